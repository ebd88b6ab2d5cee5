#include "ifvc/exp_golomb.hpp"

#include <bit>

#include "ifvc/errors.hpp"

namespace ifvc {

void eg0_encode(std::uint64_t value, BitString& out) {
  if (value > kMaxExpGolombValue) throw RangeError("exp-Golomb value out of range");
  const std::uint64_t v = value + 1;
  const unsigned width = static_cast<unsigned>(std::bit_width(v));
  out.append_bits(0, width - 1);
  out.append_bits(v, width);
}

BitString eg0_encode(std::uint64_t value) {
  BitString out;
  eg0_encode(value, out);
  return out;
}

std::uint64_t eg0_decode(BitReader& in) {
  unsigned zeros = 0;
  while (!in.read()) {
    if (++zeros > 62) throw DecodeError("exp-Golomb prefix too long");
  }
  std::uint64_t v = 1;
  for (unsigned i = 0; i < zeros; ++i) v = (v << 1) | static_cast<std::uint64_t>(in.read());
  return v - 1;
}

}  // namespace ifvc
