#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ifvc/bitstring.hpp"
#include "ifvc/range_coder.hpp"

namespace ifvc {

/// Prediction-by-partial-matching over the binary alphabet.
///
/// Contexts are the previous 0..max_order bits. The highest-order context
/// with any statistics predicts the next bit. PPM-C escape estimation with
/// symbol exclusion collapses, for two symbols, to:
///   both bits seen  -> (c0, c1)
///   only x seen     -> c_x for x, escape count 1 for the other bit
///   nothing seen    -> order -1 uniform (1, 1)
/// Every order is updated after each bit; a context's counts are halved when
/// either reaches 2^16.
class PpmModel {
 public:
  static constexpr unsigned kDefaultOrder = 8;
  static constexpr unsigned kMaxSupportedOrder = 16;
  static constexpr std::uint32_t kRescaleLimit = 1U << 16;

  explicit PpmModel(unsigned max_order = kDefaultOrder);

  unsigned max_order() const { return max_order_; }

  struct Distribution {
    std::uint32_t freq0;
    std::uint32_t freq1;
  };
  Distribution predict() const;
  void update(bool bit);

  void encode(bool bit, RangeEncoder& enc);
  bool decode(RangeDecoder& dec);

  /// Counts of the order-k context ending at the current history; {0, 0}
  /// while the history is shorter than k.
  std::array<std::uint32_t, 2> counts(unsigned order) const;

  friend bool operator==(const PpmModel&, const PpmModel&) = default;

 private:
  std::size_t node(unsigned order) const {
    const std::uint32_t mask = (1U << order) - 1U;
    return (std::size_t{1} << order) | (history_ & mask);
  }

  unsigned max_order_;
  std::uint32_t history_ = 0;
  unsigned history_len_ = 0;
  // Node (1 << k) | ctx holds the counts of the order-k context ctx.
  std::vector<std::array<std::uint32_t, 2>> table_;
};

std::vector<std::uint8_t> ppm_encode(const BitString& bits, PpmModel& model);
/// The bit count is carried by the container; the payload is not
/// self-delimiting.
BitString ppm_decode(std::span<const std::uint8_t> payload, std::size_t bit_count, PpmModel& model);

}  // namespace ifvc
