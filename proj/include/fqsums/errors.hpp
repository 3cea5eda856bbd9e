#pragma once

#include <stdexcept>
#include <string>

namespace fqsums {

// Raised when a request is well-formed but too large for the configured
// resource guards. Callers are told what to shrink; nothing is computed.
class refused_size_error : public std::runtime_error {
 public:
  explicit refused_size_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fqsums
