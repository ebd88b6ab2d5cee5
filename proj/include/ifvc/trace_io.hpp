#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ifvc/semantics.hpp"

namespace ifvc {

enum class TraceFormat { kJson, kCsv };

/// Picks the format from the file extension (".csv" or ".json").
TraceFormat trace_format_for(const std::filesystem::path& path);

// CSV traces carry frames only; the key pose defaults to the first frame and
// the key coefficient vectors are left empty.
SemanticTrace parse_trace_csv(std::string_view text, double fps = 25.0);
SemanticTrace parse_trace_json(std::string_view text);

std::string format_trace_csv(const SemanticTrace& trace);
std::string format_trace_json(const SemanticTrace& trace);

SemanticTrace load_trace(const std::filesystem::path& path, TraceFormat format, double csv_fps = 25.0);
void export_trace(const SemanticTrace& trace, const std::filesystem::path& path, TraceFormat format);

// KeyFrameSemantics as a JSON object {id, alb, illum, exp, pose}.
std::string format_key_json(const KeyFrameSemantics& key);
KeyFrameSemantics parse_key_json(std::string_view text);

}  // namespace ifvc
