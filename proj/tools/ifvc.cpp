#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ifvc/container.hpp"
#include "ifvc/demo.hpp"
#include "ifvc/errors.hpp"
#include "ifvc/file_io.hpp"
#include "ifvc/flow.hpp"
#include "ifvc/image.hpp"
#include "ifvc/morphable_model.hpp"
#include "ifvc/preview.hpp"
#include "ifvc/service.hpp"
#include "ifvc/session.hpp"
#include "ifvc/stream_codec.hpp"
#include "ifvc/trace_io.hpp"

namespace fs = std::filesystem;
using namespace ifvc;

namespace {

QuantConfig parse_steps(const std::string& text) {
  QuantConfig cfg;
  std::stringstream in(text);
  std::string item;
  std::size_t n = 0;
  while (std::getline(in, item, ',')) {
    if (n == kSemanticDim) throw ParseError("--steps takes 14 comma-separated values");
    try {
      std::size_t used = 0;
      cfg.steps[n] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParseError("bad step value '" + item + "'");
    }
    ++n;
  }
  if (n != kSemanticDim) throw ParseError("--steps takes 14 comma-separated values, got " + std::to_string(n));
  validate(cfg);
  return cfg;
}

std::shared_ptr<const MorphableModel> model_for(const StreamHeader& header, const std::string& path) {
  if (!path.empty()) return std::make_shared<const MorphableModel>(load_model(path));
  if (header.model_id == "synthetic") return std::make_shared<const MorphableModel>(make_synthetic_model());
  throw ValidationError("stream uses model '" + header.model_id + "'; pass --model");
}

// "a..b" inclusive, or a single index.
std::pair<std::size_t, std::size_t> parse_frame_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw ParseError("bad frame range '" + text + "' (expected a..b)");
  }
}

std::string frame_name(std::size_t l, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu%s", l, ext);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facial-semantics video codec"};
  app.require_subcommand(1);

  // encode
  auto* encode = app.add_subcommand("encode", "encode a semantic trace into a .ifvc stream");
  std::string trace_path, key_path, out_path, steps_text, model_id = "synthetic", key_sem_path;
  double fps = 25.0;
  int width = 0, height = 0;
  encode->add_option("--trace", trace_path, "trace (.csv or .json)")->required()->check(CLI::ExistingFile);
  encode->add_option("--key", key_path, "key reference image file stored verbatim")->required()->check(CLI::ExistingFile);
  encode->add_option("--out", out_path, "output .ifvc")->required();
  encode->add_option("--steps", steps_text, "14 comma-separated quantization steps");
  encode->add_option("--fps", fps, "frame rate for CSV traces")->capture_default_str();
  encode->add_option("--model-id", model_id, "model identifier written to the header")->capture_default_str();
  encode->add_option("--width", width, "frame width (default: key PNG width, else 256)");
  encode->add_option("--height", height, "frame height (default: key PNG height, else 256)");
  encode->add_option("--key-semantics", key_sem_path, "key semantics JSON overriding the trace's key")
      ->check(CLI::ExistingFile);

  // decode
  auto* decode = app.add_subcommand("decode", "decode a stream to a semantic trace");
  std::string in_path, key_out;
  decode->add_option("--in", in_path, "input .ifvc")->required()->check(CLI::ExistingFile);
  decode->add_option("--out", out_path, "output trace (.csv or .json)")->required();
  decode->add_option("--key-out", key_out, "also write the key payload bytes here");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "report header fields and bit usage");
  bool as_json = false;
  inspect->add_option("--in", in_path, "input .ifvc")->required()->check(CLI::ExistingFile);
  inspect->add_flag("--json", as_json, "machine-readable output");

  // mesh
  auto* mesh = app.add_subcommand("mesh", "dump the projected mesh of one frame as JSON");
  std::string model_path;
  std::size_t frame = 0;
  mesh->add_option("--in", in_path, "input .ifvc")->required()->check(CLI::ExistingFile);
  mesh->add_option("--frame", frame, "frame index")->required();
  mesh->add_option("--model", model_path, "morphable model (.mmb)")->check(CLI::ExistingFile);
  mesh->add_option("--out", out_path, "output JSON (default stdout)");

  // preview
  auto* preview = app.add_subcommand("preview", "write warped PNG previews");
  std::string frames_text, outdir;
  bool with_flow = false, with_wireframe = false;
  preview->add_option("--in", in_path, "input .ifvc")->required()->check(CLI::ExistingFile);
  preview->add_option("--model", model_path, "morphable model (.mmb)")->check(CLI::ExistingFile);
  preview->add_option("--frames", frames_text, "frame range a..b (inclusive)")->required();
  preview->add_option("--outdir", outdir, "output directory")->required();
  preview->add_flag("--flow", with_flow, "also write .flo flow fields");
  preview->add_flag("--wireframe", with_wireframe, "also write wireframe PNGs");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "run the local HTTP editing service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--file", in_path, "input .ifvc")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--port", port, "TCP port")->capture_default_str();
  serve_cmd->add_option("--host", host, "bind address")->capture_default_str();
  serve_cmd->add_option("--model", model_path, "morphable model (.mmb)")->check(CLI::ExistingFile);

  // synth
  auto* synth = app.add_subcommand("synth", "write a demo trace, key image and model");
  std::size_t synth_frames = 250;
  int size = 256;
  synth->add_option("--outdir", outdir, "output directory")->required();
  synth->add_option("--frames", synth_frames, "frame count")->capture_default_str();
  synth->add_option("--fps", fps, "frame rate")->capture_default_str();
  synth->add_option("--size", size, "key image width and height")->capture_default_str()->check(CLI::Range(16, 4096));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode) {
      SemanticTrace trace = load_trace(trace_path, trace_format_for(trace_path), fps);
      if (!key_sem_path.empty()) trace.key = parse_key_json(read_file_text(key_sem_path));
      KeyPayload key;
      key.data = read_file_bytes(key_path);
      StreamInfo info;
      info.model_id = model_id;
      if (is_png(key.data) && (width == 0 || height == 0)) {
        const RgbImage img = decode_png(key.data);
        info.width = static_cast<std::uint16_t>(img.width);
        info.height = static_cast<std::uint16_t>(img.height);
      }
      if (width != 0) info.width = static_cast<std::uint16_t>(width);
      if (height != 0) info.height = static_cast<std::uint16_t>(height);
      if (width < 0 || width > 65535 || height < 0 || height > 65535) throw ValidationError("bad frame size");
      const QuantConfig cfg = steps_text.empty() ? QuantConfig::defaults() : parse_steps(steps_text);
      const CodedStream stream = encode_stream(trace, key, cfg, info);
      write_file_bytes(out_path, serialize(stream));
      const StreamReport report = inspect_stream(stream);
      std::cout << "encoded " << trace.frames.size() << " frames, " << report.semantic_bytes << " semantic bytes, "
                << report.kbps << " kbps\n";
    } else if (*decode) {
      const CodedStream stream = parse_stream(read_file_bytes(in_path));
      export_trace(decode_stream(stream), out_path, trace_format_for(out_path));
      if (!key_out.empty()) write_file_bytes(key_out, stream.key.data);
    } else if (*inspect) {
      const StreamReport report = inspect_stream(parse_stream(read_file_bytes(in_path)));
      std::cout << (as_json ? report.to_json() : report.to_text()) << '\n';
    } else if (*mesh) {
      const CodedStream stream = parse_stream(read_file_bytes(in_path));
      auto model = model_for(stream.header, model_path);
      const Session session(stream, model);
      const std::string text = session.mesh_json(frame);
      if (out_path.empty()) std::cout << text << '\n';
      else write_file_text(out_path, text);
    } else if (*preview) {
      const CodedStream stream = parse_stream(read_file_bytes(in_path));
      const auto [first, last] = parse_frame_range(frames_text);
      auto model = model_for(stream.header, model_path);
      const Session session(stream, model);
      if (first > last || last >= session.frame_count()) {
        throw RangeError("frames " + frames_text + " outside 0.." + std::to_string(session.frame_count() - 1));
      }
      fs::create_directories(outdir);
      for (std::size_t l = first; l <= last; ++l) {
        FlowField flow;
        write_png(session.preview(l, &flow), fs::path(outdir) / frame_name(l, ".png"));
        if (with_flow) write_flo(flow, fs::path(outdir) / frame_name(l, ".flo"));
        if (with_wireframe) {
          const FrameGeometry g = session.geometry(l);
          write_png(render_wireframe(g.mesh, model->triangles, &g.eyes, stream.header.width, stream.header.height),
                    fs::path(outdir) / frame_name(l, "_mesh.png"));
        }
      }
      std::cout << "wrote " << (last - first + 1) << " previews to " << outdir << '\n';
    } else if (*serve_cmd) {
      const CodedStream stream = parse_stream(read_file_bytes(in_path));
      Session session(stream, model_for(stream.header, model_path));
      serve(session, host, port);
    } else if (*synth) {
      fs::create_directories(outdir);
      const MorphableModel model = make_synthetic_model();
      const SemanticTrace trace = make_demo_trace(synth_frames, fps);
      export_trace(trace, fs::path(outdir) / "trace.json", TraceFormat::kJson);
      const auto camera = CameraIntrinsics::for_image(size, size);
      const FrameGeometry g = key_geometry(model, trace.key, camera);
      write_png(render_wireframe(g.mesh, model.triangles, &g.eyes, size, size), fs::path(outdir) / "key.png");
      save_model(model, fs::path(outdir) / "synthetic_face.mmb");
      std::cout << "wrote trace.json, key.png, synthetic_face.mmb to " << outdir << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
