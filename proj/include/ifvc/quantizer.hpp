#pragma once

#include <array>
#include <cstdint>

#include "ifvc/semantics.hpp"

namespace ifvc {

inline constexpr std::int64_t kMaxSymbolMagnitude = 2147483647;  // 2^31 - 1

/// Per-component quantization step sizes in flatten() order.
struct QuantConfig {
  SemanticArray steps{};

  /// 0.02 mouth, 0.05 eye, 0.005 rad rotation, 0.01 translation and loc.
  static QuantConfig defaults();

  friend bool operator==(const QuantConfig&, const QuantConfig&) = default;
};

/// Throws ValidationError unless every step is positive and finite.
void validate(const QuantConfig& cfg);

/// Quantized residual of one frame.
struct SymbolBlock {
  std::array<std::int32_t, kSemanticDim> symbols{};

  friend bool operator==(const SymbolBlock&, const SymbolBlock&) = default;
};

/// Rounds half away from zero. Throws OverflowError when a symbol would exceed
/// 2^31 - 1 in magnitude (or the input is not finite).
SymbolBlock quantize(const SemanticArray& residual, const QuantConfig& cfg);
SemanticArray dequantize(const SymbolBlock& block, const QuantConfig& cfg);

/// 0 -> 0, -1 -> 1, 1 -> 2, -2 -> 3, ...
constexpr std::uint32_t zigzag(std::int32_t n) {
  return (static_cast<std::uint32_t>(n) << 1) ^ static_cast<std::uint32_t>(n >> 31);
}

constexpr std::int32_t unzigzag(std::uint32_t u) {
  return static_cast<std::int32_t>(u >> 1) ^ -static_cast<std::int32_t>(u & 1U);
}

}  // namespace ifvc
