#include "ifvc/file_io.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "ifvc/errors.hpp"

namespace ifvc {

namespace {

void write_raw(const std::filesystem::path& path, const char* data, std::size_t size) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(data, static_cast<std::streamsize>(size));
    if (!out) throw IoError("write failed: " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

}  // namespace

Bytes read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  write_raw(path, reinterpret_cast<const char*>(data.data()), data.size());
}

void write_file_text(const std::filesystem::path& path, std::string_view text) {
  write_raw(path, text.data(), text.size());
}

}  // namespace ifvc
