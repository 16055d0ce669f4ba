// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace sharpweights {

// Bad arguments: parameter domains, malformed meshes, mixed lattices.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematical domain violations, e.g. a negative power of a zero piece.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A constructive step finished but its output failed post-verification.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sharpweights
