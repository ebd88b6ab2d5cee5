#pragma once

#include <cstdint>

#include "ifvc/bitstring.hpp"

namespace ifvc {

inline constexpr std::uint64_t kMaxExpGolombValue = (std::uint64_t{1} << 63) - 2;

// Zero-order exp-Golomb: floor(log2(u+1)) zero bits, then u+1 in binary.

void eg0_encode(std::uint64_t value, BitString& out);
BitString eg0_encode(std::uint64_t value);

/// Consumes exactly one codeword. Throws DecodeError on truncation or on a
/// prefix longer than any encodable value.
std::uint64_t eg0_decode(BitReader& in);

}  // namespace ifvc
