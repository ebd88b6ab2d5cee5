#include "ifvc/range_coder.hpp"

#include "ifvc/errors.hpp"

namespace ifvc {

void RangeEncoder::encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
  const std::uint32_t r = range_ / total;
  low_ += static_cast<std::uint64_t>(r) * cum;
  range_ = r * freq;
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000U || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t byte = cache_;
    do {
      const auto value = static_cast<std::uint8_t>(byte + carry);
      // The very first cached byte is the integer part of the code value,
      // which is always zero.
      if (first_) {
        first_ = false;
      } else {
        out_.push_back(value);
      }
      byte = 0xFF;
    } while (--pending_ != 0);
    cache_ = static_cast<std::uint8_t>(static_cast<std::uint32_t>(low_) >> 24);
  }
  ++pending_;
  low_ = (low_ & 0x00FFFFFFU) << 8;
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  // Smallest multiple of 2^24 inside [low, low + range); range >= 2^24 here.
  low_ = (low_ + (kTop - 1)) & ~static_cast<std::uint64_t>(kTop - 1);
  shift_low();
  shift_low();
  while (!out_.empty() && out_.back() == 0) out_.pop_back();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> payload) : in_(payload) {
  if (!in_.empty() && in_.back() == 0) throw DecodeError("range coder payload has a zero tail byte");
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
  const std::uint8_t b = pos_ < in_.size() ? in_[pos_] : 0;
  ++pos_;
  return b;
}

std::uint32_t RangeDecoder::decode_target(std::uint32_t total) {
  scale_ = range_ / total;
  const std::uint32_t target = code_ / scale_;
  if (target >= total) throw DecodeError("range decoder: code outside the coding interval");
  return target;
}

void RangeDecoder::consume(std::uint32_t cum, std::uint32_t freq) {
  code_ -= scale_ * cum;
  range_ = scale_ * freq;
  while (range_ < RangeEncoder::kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
}

void RangeDecoder::finish() const {
  // The flush leaves the code value a multiple of 2^24 at most 2^24 above
  // the interval base, followed only by padding.
  if (code_ >= RangeEncoder::kTop) throw DecodeError("range decoder: non-canonical stream tail");
  if (in_.size() + 3 > pos_) throw DecodeError("range decoder: payload longer than coded data");
}

}  // namespace ifvc
