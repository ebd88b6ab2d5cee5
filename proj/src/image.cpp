#include "ifvc/image.hpp"

#include <cstring>
#include <string>

#include <png.h>

#include "ifvc/errors.hpp"
#include "ifvc/file_io.hpp"

namespace ifvc {

RgbImage::RgbImage(int w, int h, std::array<std::uint8_t, 3> fill) : width(w), height(h) {
  if (w < 0 || h < 0) throw DimensionError("negative image size");
  pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 3) std::memcpy(&pixels[i], fill.data(), 3);
}

void RgbImage::set(int x, int y, std::array<std::uint8_t, 3> rgb) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  std::memcpy(at(x, y), rgb.data(), 3);
}

bool is_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
  if (!is_png(bytes)) throw DecodeError("not a PNG image");
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw DecodeError(std::string("PNG: ") + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  if (img.width > 16384 || img.height > 16384) {
    png_image_free(&img);
    throw DecodeError("PNG dimensions too large");
  }
  RgbImage out(static_cast<int>(img.width), static_cast<int>(img.height));
  png_color black{0, 0, 0};
  if (!png_image_finish_read(&img, &black, out.pixels.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw DecodeError("PNG: " + msg);
  }
  return out;
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  if (image.width <= 0 || image.height <= 0) throw DimensionError("cannot encode an empty image");
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
    throw Error(std::string("PNG: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
    throw Error(std::string("PNG: ") + img.message);
  }
  out.resize(size);
  return out;
}

void write_png(const RgbImage& image, const std::filesystem::path& path) { write_file_bytes(path, encode_png(image)); }

RgbImage read_png(const std::filesystem::path& path) { return decode_png(read_file_bytes(path)); }

}  // namespace ifvc
