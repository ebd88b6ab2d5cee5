#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ifvc {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

// Writes to a sibling temporary and renames over the target, so a failed
// write never leaves a truncated file behind.
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void write_file_text(const std::filesystem::path& path, std::string_view text);

}  // namespace ifvc
