// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bellcert {

// Raised when an operation has no implementation for the requested input
// (no closed form, enumeration too large, ...). Callers fall back elsewhere.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an iterative routine gives up. Carries the best value seen.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double best)
      : std::runtime_error(what), best_(best) {}
  double best() const noexcept { return best_; }

 private:
  double best_;
};

}  // namespace bellcert
