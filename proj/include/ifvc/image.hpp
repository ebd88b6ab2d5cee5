#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ifvc {

/// 8-bit RGB raster, row major, 3 bytes per pixel.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, std::array<std::uint8_t, 3> fill = {0, 0, 0});

  std::uint8_t* at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* at(int x, int y) const { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  void set(int x, int y, std::array<std::uint8_t, 3> rgb);

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

using PreviewFrame = RgbImage;

bool is_png(std::span<const std::uint8_t> bytes);
/// Any PNG is converted to 8-bit RGB (alpha composited onto black).
/// Throws DecodeError on malformed data.
RgbImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const RgbImage& image);
void write_png(const RgbImage& image, const std::filesystem::path& path);
RgbImage read_png(const std::filesystem::path& path);

}  // namespace ifvc
