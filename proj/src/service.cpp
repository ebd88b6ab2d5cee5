#include "ifvc/service.hpp"

#include <charconv>
#include <iostream>
#include <optional>
#include <string_view>

// After the Eigen-based headers: <resolv.h> defines an _res macro.
#include <httplib.h>
#include <json.hpp>

#include "ifvc/errors.hpp"
#include "ifvc/trace_io.hpp"

namespace ifvc {

namespace {

void send_error(httplib::Response& res, int status, std::string_view kind, std::string_view message) {
  res.status = status;
  res.set_content(nlohmann::json{{"error", kind}, {"message", message}}.dump(-1, ' ', false,
                                                                             nlohmann::json::error_handler_t::replace),
                  "application/json");
}

std::optional<std::size_t> parse_index(const std::string& text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

// Runs `body`, translating library exceptions into JSON error responses.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const ParseError& e) {
    send_error(res, 400, "ParseError", e.what());
  } catch (const ValidationError& e) {
    send_error(res, 400, "ValidationError", e.what());
  } catch (const RangeError& e) {
    send_error(res, 400, "RangeError", e.what());
  } catch (const DecodeError& e) {
    send_error(res, 400, "DecodeError", e.what());
  } catch (const DimensionError& e) {
    send_error(res, 422, "DimensionError", e.what());
  } catch (const DegenerateError& e) {
    send_error(res, 422, "DegenerateError", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "InternalError", e.what());
  }
}

// Resolves the {l} path segment, answering 404 when it is not a frame.
std::optional<std::size_t> frame_param(const Session& session, const httplib::Request& req, httplib::Response& res) {
  const auto l = parse_index(req.matches[1]);
  if (!l || *l >= session.frame_count()) {
    send_error(res, 404, "NotFound", "no frame " + std::string(req.matches[1]) + " (stream has " +
                                         std::to_string(session.frame_count()) + " frames)");
    return std::nullopt;
  }
  return l;
}

}  // namespace

void register_routes(httplib::Server& server, Session& session) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/meta", [&session](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(session.meta_json(), "application/json"); });
  });

  server.Get(R"(/frames/([^/]+)/semantics)", [&session](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (const auto l = frame_param(session, req, res)) res.set_content(session.frame_json(*l), "application/json");
    });
  });

  server.Get(R"(/frames/([^/]+)/mesh)", [&session](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (const auto l = frame_param(session, req, res)) res.set_content(session.mesh_json(*l), "application/json");
    });
  });

  server.Get(R"(/frames/([^/]+)/preview\.png)", [&session](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (const auto l = frame_param(session, req, res)) {
        const auto png = encode_png(session.preview(*l));
        res.set_content(std::string(png.begin(), png.end()), "image/png");
      }
    });
  });

  server.Get("/edits", [&session](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(session.edits_json(), "application/json"); });
  });

  server.Post("/edits", [&session](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::size_t index = session.add_edit(parse_edit_json(req.body));
      auto doc = nlohmann::json::parse(session.edits_json());
      doc["index"] = index;
      res.status = 201;
      res.set_content(doc.dump(), "application/json");
    });
  });

  server.Delete(R"(/edits/([^/]+))", [&session](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto k = parse_index(req.matches[1]);
      if (!k || *k >= session.edits().size()) {
        send_error(res, 404, "NotFound", "no edit " + std::string(req.matches[1]));
        return;
      }
      session.remove_edit(*k);
      res.set_content(session.edits_json(), "application/json");
    });
  });

  server.Post("/key", [&session](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.is_multipart_form_data() || !req.has_file("image")) {
        send_error(res, 400, "ParseError", "expected multipart/form-data with an 'image' part");
        return;
      }
      const std::string& image = req.get_file_value("image").content;
      RgbImage decoded = decode_png(std::span(reinterpret_cast<const std::uint8_t*>(image.data()), image.size()));
      std::optional<KeyFrameSemantics> key;
      if (req.has_file("semantics")) key = parse_key_json(req.get_file_value("semantics").content);
      session.substitute_key(std::move(decoded), std::move(key));
      res.set_content(session.meta_json(), "application/json");
    });
  });

  server.Post("/export", [&session](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      const auto bytes = serialize(session.exported());
      res.set_header("Content-Disposition", "attachment; filename=\"edited.ifvc\"");
      res.set_content(std::string(bytes.begin(), bytes.end()), "application/octet-stream");
    });
  });
}

void serve(Session& session, const std::string& host, int port) {
  httplib::Server server;
  register_routes(server, session);
  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    std::cerr << req.method << ' ' << req.path << ' ' << res.status << '\n';
  });
  if (!server.bind_to_port(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  std::cerr << "serving on http://" << host << ':' << port << '\n';
  server.listen_after_bind();
}

}  // namespace ifvc
