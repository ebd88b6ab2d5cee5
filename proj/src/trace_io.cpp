#include "ifvc/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifvc/errors.hpp"
#include "ifvc/file_io.hpp"

namespace ifvc {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view token, std::size_t row, std::string_view field) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("frame " + std::to_string(row) + ": field " + std::string(field) +
                     " is not a number: '" + std::string(token) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> json_vector(const json& node, const std::string& what) {
  if (!node.is_array()) throw ParseError(what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& item : node) {
    if (!item.is_number()) throw ParseError(what + " contains a non-numeric entry");
    out.push_back(item.get<double>());
  }
  return out;
}

SemanticVector json_semantic(const json& node, const std::string& what) {
  const auto values = json_vector(node, what);
  if (values.size() != kSemanticDim) {
    throw ValidationError(what + " has " + std::to_string(values.size()) + " values, expected 14");
  }
  SemanticArray a{};
  std::copy(values.begin(), values.end(), a.begin());
  return unflatten(a);
}

json semantic_json(const SemanticVector& v) {
  const auto a = flatten(v);
  return json(std::vector<double>(a.begin(), a.end()));
}

json key_to_json(const KeyFrameSemantics& key) {
  return json{{"id", key.id_coeffs},
              {"alb", key.alb_coeffs},
              {"illum", key.illum_coeffs},
              {"exp", key.exp_coeffs},
              {"pose", semantic_json(key.pose)}};
}

KeyFrameSemantics key_from_json(const json& node) {
  if (!node.is_object()) throw ParseError("key must be an object");
  KeyFrameSemantics key;
  auto optional_vector = [&](const char* name) {
    return node.contains(name) ? json_vector(node.at(name), std::string("key.") + name)
                               : std::vector<double>{};
  };
  key.id_coeffs = optional_vector("id");
  key.alb_coeffs = optional_vector("alb");
  key.illum_coeffs = optional_vector("illum");
  key.exp_coeffs = optional_vector("exp");
  if (!node.contains("pose")) throw ParseError("key.pose missing");
  key.pose = json_semantic(node.at("pose"), "key.pose");
  return key;
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

TraceFormat trace_format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv" || ext == ".CSV") return TraceFormat::kCsv;
  if (ext == ".json" || ext == ".JSON") return TraceFormat::kJson;
  throw ParseError("cannot infer trace format from extension '" + ext + "'");
}

SemanticTrace parse_trace_csv(std::string_view text, double fps) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= text.size();) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    const auto line = trim(text.substr(start, pos - start));
    if (!line.empty()) lines.push_back(line);
    start = pos + 1;
  }
  if (lines.empty()) throw ParseError("empty CSV trace");

  const auto header = split(lines.front(), ',');
  if (header.size() != kSemanticDim) {
    throw ParseError("CSV header has " + std::to_string(header.size()) + " columns, expected 14");
  }
  for (std::size_t i = 0; i < kSemanticDim; ++i) {
    if (header[i] != component_name(i)) {
      throw ParseError("CSV header column " + std::to_string(i) + " is '" + std::string(header[i]) +
                       "', expected '" + std::string(component_name(i)) + "'");
    }
  }

  SemanticTrace trace;
  trace.fps = fps;
  for (std::size_t row = 0; row + 1 < lines.size(); ++row) {
    const auto fields = split(lines[row + 1], ',');
    if (fields.size() != kSemanticDim) {
      throw ValidationError("frame " + std::to_string(row) + ": " + std::to_string(fields.size()) +
                                " columns, expected 14",
                            row, "row");
    }
    SemanticArray a{};
    for (std::size_t i = 0; i < kSemanticDim; ++i) a[i] = parse_number(fields[i], row, component_name(i));
    trace.frames.push_back(unflatten(a));
  }
  if (!trace.frames.empty()) trace.key.pose = trace.frames.front();
  validate(trace);
  return trace;
}

SemanticTrace parse_trace_json(std::string_view text) {
  const json doc = parse_json_text(text);
  if (!doc.is_object()) throw ParseError("trace JSON must be an object");
  SemanticTrace trace;
  try {
    if (!doc.contains("fps") || !doc.at("fps").is_number()) throw ParseError("fps missing or not a number");
    trace.fps = doc.at("fps").get<double>();
    if (!doc.contains("key")) throw ParseError("key missing");
    trace.key = key_from_json(doc.at("key"));
    if (!doc.contains("frames") || !doc.at("frames").is_array()) throw ParseError("frames missing");
    const auto& frames = doc.at("frames");
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& row = frames[i];
      if (!row.is_array()) throw ParseError("frame " + std::to_string(i) + " is not an array");
      if (row.size() != kSemanticDim) {
        throw ValidationError("frame " + std::to_string(i) + ": " + std::to_string(row.size()) +
                                  " values, expected 14",
                              i, "row");
      }
      SemanticArray a{};
      for (std::size_t c = 0; c < kSemanticDim; ++c) {
        if (!row[c].is_number()) {
          throw ParseError("frame " + std::to_string(i) + ": field " + std::string(component_name(c)) +
                           " is not a number");
        }
        a[c] = row[c].get<double>();
      }
      trace.frames.push_back(unflatten(a));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed trace JSON: ") + e.what());
  }
  validate(trace);
  return trace;
}

std::string format_trace_csv(const SemanticTrace& trace) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kSemanticDim; ++i) out << (i ? "," : "") << component_name(i);
  out << '\n';
  for (const auto& frame : trace.frames) {
    const auto a = flatten(frame);
    for (std::size_t i = 0; i < kSemanticDim; ++i) out << (i ? "," : "") << format_double(a[i]);
    out << '\n';
  }
  return out.str();
}

std::string format_trace_json(const SemanticTrace& trace) {
  json frames = json::array();
  for (const auto& frame : trace.frames) frames.push_back(semantic_json(frame));
  const json doc{{"fps", trace.fps}, {"key", key_to_json(trace.key)}, {"frames", std::move(frames)}};
  return doc.dump() + "\n";
}

SemanticTrace load_trace(const std::filesystem::path& path, TraceFormat format, double csv_fps) {
  const auto text = read_file_text(path);
  return format == TraceFormat::kCsv ? parse_trace_csv(text, csv_fps) : parse_trace_json(text);
}

void export_trace(const SemanticTrace& trace, const std::filesystem::path& path, TraceFormat format) {
  write_file_text(path, format == TraceFormat::kCsv ? format_trace_csv(trace) : format_trace_json(trace));
}

std::string format_key_json(const KeyFrameSemantics& key) { return key_to_json(key).dump(); }

KeyFrameSemantics parse_key_json(std::string_view text) {
  try {
    auto key = key_from_json(parse_json_text(text));
    validate(key);
    return key;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed key JSON: ") + e.what());
  }
}

}  // namespace ifvc
