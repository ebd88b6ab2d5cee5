#include "ifvc/ppm.hpp"

#include <algorithm>

#include "ifvc/errors.hpp"

namespace ifvc {

PpmModel::PpmModel(unsigned max_order) : max_order_(max_order) {
  if (max_order > kMaxSupportedOrder) throw RangeError("PPM order above 16 is not supported");
  table_.assign(std::size_t{2} << max_order, {0, 0});
}

PpmModel::Distribution PpmModel::predict() const {
  for (unsigned k = std::min(max_order_, history_len_) + 1; k-- > 0;) {
    const auto& c = table_[node(k)];
    if (c[0] != 0 && c[1] != 0) return {c[0], c[1]};
    if (c[0] != 0) return {c[0], 1};
    if (c[1] != 0) return {1, c[1]};
  }
  return {1, 1};
}

void PpmModel::update(bool bit) {
  for (unsigned k = 0; k <= std::min(max_order_, history_len_); ++k) {
    auto& c = table_[node(k)];
    if (++c[bit] >= kRescaleLimit) {
      c[0] = (c[0] + 1) >> 1;
      c[1] = (c[1] + 1) >> 1;
    }
  }
  history_ = (history_ << 1) | static_cast<std::uint32_t>(bit);
  if (history_len_ < max_order_) ++history_len_;
}

std::array<std::uint32_t, 2> PpmModel::counts(unsigned order) const {
  if (order > max_order_ || order > history_len_) return {0, 0};
  return table_[node(order)];
}

void PpmModel::encode(bool bit, RangeEncoder& enc) {
  const auto d = predict();
  const std::uint32_t total = d.freq0 + d.freq1;
  if (bit) {
    enc.encode(d.freq0, d.freq1, total);
  } else {
    enc.encode(0, d.freq0, total);
  }
  update(bit);
}

bool PpmModel::decode(RangeDecoder& dec) {
  const auto d = predict();
  const std::uint32_t target = dec.decode_target(d.freq0 + d.freq1);
  const bool bit = target >= d.freq0;
  if (bit) {
    dec.consume(d.freq0, d.freq1);
  } else {
    dec.consume(0, d.freq0);
  }
  update(bit);
  return bit;
}

std::vector<std::uint8_t> ppm_encode(const BitString& bits, PpmModel& model) {
  RangeEncoder enc;
  for (std::size_t i = 0; i < bits.size(); ++i) model.encode(bits[i], enc);
  return enc.finish();
}

BitString ppm_decode(std::span<const std::uint8_t> payload, std::size_t bit_count, PpmModel& model) {
  RangeDecoder dec(payload);
  BitString bits;
  for (std::size_t i = 0; i < bit_count; ++i) bits.push_back(model.decode(dec));
  dec.finish();
  return bits;
}

}  // namespace ifvc
