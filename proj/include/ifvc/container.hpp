#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ifvc/quantizer.hpp"
#include "ifvc/semantics.hpp"

namespace ifvc {

inline constexpr std::array<char, 4> kStreamMagic = {'I', 'F', 'V', 'C'};
inline constexpr std::uint16_t kStreamVersion = 1;
/// Key payload tag for an image file embedded verbatim (PNG by default).
inline constexpr std::array<char, 4> kLosslessKeyTag = {'L', 'S', 'L', 'S'};

struct StreamHeader {
  std::uint16_t version = kStreamVersion;
  std::uint16_t fps_q8 = 25 * 256;  // unsigned 8.8 fixed point
  std::uint32_t frame_count = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  QuantConfig quant = QuantConfig::defaults();
  std::string model_id;

  double fps() const { return fps_q8 / 256.0; }

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

/// Rounds to the nearest representable 8.8 value; throws ValidationError when
/// the result is zero or does not fit.
std::uint16_t encode_fps(double fps);

/// Externally coded key-reference image: opaque bytes plus a fourCC naming
/// the codec that produced them.
struct KeyPayload {
  std::array<char, 4> fourcc = kLosslessKeyTag;
  std::vector<std::uint8_t> data;

  friend bool operator==(const KeyPayload&, const KeyPayload&) = default;
};

/// One inter frame: PPM/range-coded exp-Golomb bits, byte aligned.
struct FramePayload {
  std::uint32_t bit_length = 0;
  std::vector<std::uint8_t> bytes;

  friend bool operator==(const FramePayload&, const FramePayload&) = default;
};

struct CodedStream {
  StreamHeader header;
  KeyPayload key;
  KeyFrameSemantics key_semantics;
  std::vector<FramePayload> frames;

  friend bool operator==(const CodedStream&, const CodedStream&) = default;
};

// Layout (little endian):
//   "IFVC" | u16 version | u16 fps 8.8 | u32 frame_count | u16 width |
//   u16 height | 14 x f64 steps | u16 len + model_id UTF-8
//   key:   fourCC | u32 len | bytes
//   key semantics: (u16 n + n x f64) for id, alb, illum, exp | 14 x f64 pose
//   frames: frame_count x (varint bit_length | varint byte_length | bytes)
//   u32 CRC-32 of everything above
std::vector<std::uint8_t> serialize(const CodedStream& stream);
/// Throws ContainerError on bad magic/version, truncation, checksum mismatch
/// or any malformed field.
CodedStream parse_stream(std::span<const std::uint8_t> bytes);

/// Size in bytes of the frame record as serialized (length prefixes
/// included).
std::size_t frame_record_size(const FramePayload& frame);

}  // namespace ifvc
