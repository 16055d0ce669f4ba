// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "sharpweights/detail/compensated.hpp"
#include "sharpweights/step_function.hpp"

namespace sharpweights::detail {

// Piece ends x_0 < ... < x_B of a function restricted to a window, with
// compensated prefix masses of any number of derived densities.
class MassTable {
 public:
  explicit MassTable(std::vector<Segment> segments) : segments_(std::move(segments)) {
    points_.reserve(segments_.size() + 1);
    points_.push_back(segments_.front().a);
    for (const auto& s : segments_) points_.push_back(s.b);
  }

  // Adds the density v -> fn(v) and returns its handle.
  template <class Fn>
  std::size_t add_density(Fn&& fn) {
    std::vector<double> values(segments_.size());
    std::vector<double> masses(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      values[i] = fn(segments_[i].value);
      masses[i] = values[i] * segments_[i].length();
    }
    densities_.push_back(std::move(values));
    prefix_.push_back(prefix_sums(masses));
    return prefix_.size() - 1;
  }

  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] std::size_t piece_count() const { return segments_.size(); }
  [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }

  // Mass of density d over [x_i, x_j].
  [[nodiscard]] double mass(std::size_t d, std::size_t i, std::size_t j) const {
    return difference(prefix_[d][j], prefix_[d][i]);
  }

  // Mass of density d over [a, b] for arbitrary a < b inside the table.
  [[nodiscard]] double mass_at(std::size_t d, double a, double b) const {
    const std::size_t i = locate(a);
    const std::size_t j = locate(b);
    const auto& v = densities_[d];
    if (i == j) return v[i] * (b - a);
    double s = difference(prefix_[d][j], prefix_[d][i + 1]);
    s += v[i] * (points_[i + 1] - a);
    s += v[j] * (b - points_[j]);
    return s;
  }

  [[nodiscard]] std::size_t locate(double x) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), x);
    auto idx = static_cast<std::size_t>(it - points_.begin());
    idx = idx == 0 ? 0 : idx - 1;
    return std::min(idx, segments_.size() - 1);
  }

 private:
  std::vector<Segment> segments_;
  std::vector<double> points_;
  std::vector<std::vector<double>> densities_;
  std::vector<std::vector<DoubleDouble>> prefix_;
};

}  // namespace sharpweights::detail
