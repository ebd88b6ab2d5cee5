#include "ifvc/quantizer.hpp"

#include <cmath>
#include <string>

#include "ifvc/errors.hpp"

namespace ifvc {

QuantConfig QuantConfig::defaults() {
  QuantConfig cfg;
  for (std::size_t i = 0; i < kMouthDim; ++i) cfg.steps[slot::kMouth + i] = 0.02;
  cfg.steps[slot::kEye] = 0.05;
  for (std::size_t i = 0; i < 3; ++i) {
    cfg.steps[slot::kRot + i] = 0.005;
    cfg.steps[slot::kTrans + i] = 0.01;
  }
  cfg.steps[slot::kLoc] = 0.01;
  return cfg;
}

void validate(const QuantConfig& cfg) {
  for (std::size_t i = 0; i < kSemanticDim; ++i) {
    if (!(cfg.steps[i] > 0.0) || !std::isfinite(cfg.steps[i])) {
      throw ValidationError("quantization step for " + std::string(component_name(i)) +
                                " must be positive and finite",
                            std::nullopt, std::string(component_name(i)));
    }
  }
}

SymbolBlock quantize(const SemanticArray& residual, const QuantConfig& cfg) {
  SymbolBlock block;
  for (std::size_t i = 0; i < kSemanticDim; ++i) {
    // std::round rounds halfway cases away from zero.
    const double q = std::round(residual[i] / cfg.steps[i]);
    if (!std::isfinite(q) || std::abs(q) > static_cast<double>(kMaxSymbolMagnitude)) {
      throw OverflowError("quantized " + std::string(component_name(i)) +
                          " residual exceeds 2^31-1 in magnitude");
    }
    block.symbols[i] = static_cast<std::int32_t>(q);
  }
  return block;
}

SemanticArray dequantize(const SymbolBlock& block, const QuantConfig& cfg) {
  SemanticArray out{};
  for (std::size_t i = 0; i < kSemanticDim; ++i) out[i] = block.symbols[i] * cfg.steps[i];
  return out;
}

}  // namespace ifvc
