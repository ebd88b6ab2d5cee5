#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ifvc {

/// 32-bit range encoder with carry propagation. Symbols are coded as
/// (cumulative, frequency, total) triples; total must stay below 2^24.
///
/// The leading byte of the classic cache scheme is always zero and is not
/// written; finish() emits the shortest tail that pins the final interval and
/// trailing zero bytes are dropped (the decoder reads zeros past the end).
class RangeEncoder {
 public:
  static constexpr std::uint32_t kTop = 1U << 24;
  static constexpr std::uint32_t kMaxTotal = kTop;

  void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total);
  /// Flushes and returns the payload. The encoder must not be reused.
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFU;
  std::uint8_t cache_ = 0;
  std::uint64_t pending_ = 1;
  bool first_ = true;
  std::vector<std::uint8_t> out_;
};

/// Mirror of RangeEncoder. Detects interval violations, over-long payloads and
/// non-canonical tails, throwing DecodeError.
class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> payload);

  /// Returns the scaled target in [0, total); follow with consume().
  std::uint32_t decode_target(std::uint32_t total);
  void consume(std::uint32_t cum, std::uint32_t freq);
  /// Verifies the payload ended exactly where the encoder's flush put it.
  void finish() const;

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFU;
  std::uint32_t scale_ = 0;
};

}  // namespace ifvc
