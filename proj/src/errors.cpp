#include "ifvc/errors.hpp"

#include <utility>

namespace ifvc {

ValidationError::ValidationError(const std::string& message, std::optional<std::size_t> frame,
                                 std::string field)
    : Error(message), frame_(frame), field_(std::move(field)) {}

}  // namespace ifvc
