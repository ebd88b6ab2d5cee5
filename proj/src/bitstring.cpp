#include "ifvc/bitstring.hpp"

#include "ifvc/errors.hpp"

namespace ifvc {

BitString BitString::from_string(std::string_view text) {
  BitString out;
  for (const char c : text) {
    if (c != '0' && c != '1') throw ParseError("bit string contains '" + std::string(1, c) + "'");
    out.push_back(c == '1');
  }
  return out;
}

void BitString::push_back(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (63 - (size_ & 63));
  ++size_;
}

void BitString::append_bits(std::uint64_t value, unsigned count) {
  for (unsigned i = count; i-- > 0;) push_back((value >> i) & 1U);
}

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
}

void BitString::clear() {
  words_.clear();
  size_ = 0;
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back((*this)[i] ? '1' : '0');
  return out;
}

bool operator==(const BitString& a, const BitString& b) {
  // Unused tail bits are always zero, so word comparison is exact.
  return a.size_ == b.size_ && a.words_ == b.words_;
}

bool BitReader::read() {
  if (pos_ >= bits_->size()) throw DecodeError("bit string truncated");
  return (*bits_)[pos_++];
}

}  // namespace ifvc
