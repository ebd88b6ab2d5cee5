#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ifvc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Carries the offending frame (row) index and field name so callers can point
// users at the exact cell of a trace file.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::optional<std::size_t> frame = std::nullopt,
                  std::string field = {});

  std::optional<std::size_t> frame() const { return frame_; }
  const std::string& field() const { return field_; }

 private:
  std::optional<std::size_t> frame_;
  std::string field_;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class ContainerError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ifvc
