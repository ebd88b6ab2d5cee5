#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ifvc {

/// Growable sequence of bits, packed MSB-first into 64-bit words.
class BitString {
 public:
  BitString() = default;

  /// Parses a string of '0'/'1' characters; throws ParseError otherwise.
  static BitString from_string(std::string_view text);

  void push_back(bool bit);
  /// Appends the low `count` bits of `value`, most significant first.
  void append_bits(std::uint64_t value, unsigned count);
  void append(const BitString& other);

  bool operator[](std::size_t index) const {
    return (words_[index >> 6] >> (63 - (index & 63))) & 1U;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  void clear();

  std::string to_string() const;

  friend bool operator==(const BitString& a, const BitString& b);

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Sequential reader over a BitString.
class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(&bits) {}

  bool at_end() const { return pos_ >= bits_->size(); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_->size() - pos_; }
  /// Throws DecodeError when the string is exhausted.
  bool read();

 private:
  const BitString* bits_;
  std::size_t pos_ = 0;
};

}  // namespace ifvc
