#pragma once

#include <stdexcept>
#include <string>

namespace bucketree {

// Raised for parameter constraint violations and malformed inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a request exceeds a configured desk-scale limit.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by canonical_decode / from_json on malformed input.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bucketree
