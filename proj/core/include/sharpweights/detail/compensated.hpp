// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sharpweights::detail {

// Unevaluated sum hi + lo; differences of two running totals keep roughly
// twice the working precision, which matters when a small interval sits far
// from the origin of a long prefix-sum array.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  void add(double x) {
    const double s = hi + x;
    const double bp = s - hi;
    const double err = (hi - (s - bp)) + (x - bp);
    hi = s;
    lo += err;
  }

  [[nodiscard]] double value() const { return hi + lo; }
};

inline double difference(const DoubleDouble& upper, const DoubleDouble& lower) {
  return (upper.hi - lower.hi) + (upper.lo - lower.lo);
}

// prefix[i] = sum of terms[0..i).
inline std::vector<DoubleDouble> prefix_sums(std::span<const double> terms) {
  std::vector<DoubleDouble> out(terms.size() + 1);
  DoubleDouble acc;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    acc.add(terms[i]);
    out[i + 1] = acc;
  }
  return out;
}

}  // namespace sharpweights::detail
