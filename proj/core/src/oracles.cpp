// SPDX-License-Identifier: MIT
#include "sharpweights/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <unsupported/Eigen/MatrixFunctions>

#include "sharpweights/error.hpp"

namespace sharpweights::oracle {

namespace {

// int_a^b f by walking the pieces.
double naive_integral(const StepFunction& f, double a, double b) {
  double s = 0.0;
  for (const auto& seg : f.segments(Interval(a, b))) s += seg.value * (seg.b - seg.a);
  return s;
}

// Measure of {g >= v} (or {g > v}) in the window, optionally weighted.
double naive_measure(const StepFunction& g, double v, bool strict, const Interval& window,
                     const StepFunction* weight) {
  double m = 0.0;
  for (const auto& seg : g.segments(window)) {
    const bool in = strict ? seg.value > v : seg.value >= v;
    if (!in) continue;
    m += weight ? naive_integral(*weight, seg.a, seg.b) : seg.b - seg.a;
  }
  return m;
}

Matrix general_power(const Matrix& a, double s) {
  const Matrix out = a.pow(s);
  return 0.5 * (out + out.transpose());
}

}  // namespace

double dyadic_maximal(const StepFunction& f, const DyadicLattice& lattice, double x,
                      const DyadicCube& window, int extra) {
  const Interval top = lattice.interval(window);
  if (!top.contains(x)) throw InvalidArgument("oracle::dyadic_maximal: x outside the window");
  double best = -std::numeric_limits<double>::infinity();
  const int last = std::min(window.generation + extra, lattice.generation_cap());
  for (int g = window.generation; g <= last; ++g) {
    // Scan the cubes of generation g inside the window for the one holding x.
    const double h = lattice.side_length(g);
    const auto span = static_cast<std::int64_t>(std::llround(top.length() / h));
    const DyadicCube first = lattice.cube_containing(top.a(), g);
    // The lattice offsets are thirds, so the cube found for top.a() may be the
    // neighbour to its left after rounding; search one cube further each way.
    std::int64_t lo = -1;
    std::int64_t hi = span;
    // Binary search over the ordered cubes instead of a linear scan at deep levels.
    while (lo < hi) {
      const std::int64_t mid = (lo + hi + 1) / 2;
      DyadicCube c = first;
      c.index[0] += mid;
      if (lattice.interval(c).a() <= x) lo = mid;
      else hi = mid - 1;
    }
    DyadicCube c = first;
    c.index[0] += lo;
    const Interval iv = lattice.interval(c);
    if (!iv.contains(x)) continue;
    best = std::max(best, naive_integral(f, iv.a(), iv.b()) / iv.length());
  }
  return best;
}

double weak_lp_quasinorm(const StepFunction& g, double p, const Interval& window,
                         const StepFunction* weight, int grid) {
  if (!(p >= 1.0)) throw InvalidArgument("oracle::weak_lp_quasinorm: p must be at least 1");
  std::set<double> levels;
  double top = 0.0;
  for (const auto& seg : g.segments(window)) {
    const double v = std::abs(seg.value);
    if (v > 0.0) levels.insert(v);
    top = std::max(top, v);
  }
  const StepFunction ag = g.map_values([](double v) { return std::abs(v); });
  double best = 0.0;
  for (const double v : levels) {
    best = std::max(best, v * std::pow(naive_measure(ag, v, false, window, weight), 1.0 / p));
  }
  for (int i = 1; i <= grid; ++i) {
    const double a = top * static_cast<double>(i) / static_cast<double>(grid + 1);
    best = std::max(best, a * std::pow(naive_measure(ag, a, true, window, weight), 1.0 / p));
  }
  return best;
}

double cg_maximal(const MatrixWeight& w, double p, const VectorField& f, double x, CgMode mode) {
  const std::size_t count = w.piece_count();
  if (f.size() != count) throw InvalidArgument("oracle::cg_maximal: field does not match mesh");
  std::size_t k = count;
  for (std::size_t i = 0; i < count; ++i) {
    if (w.piece_interval(i).contains(x)) k = i;
  }
  if (k == count) throw InvalidArgument("oracle::cg_maximal: x is off the mesh");
  const Matrix wx = general_power(w.piece(k), 1.0 / p);
  std::vector<double> h(count);
  for (std::size_t y = 0; y < count; ++y) {
    h[y] = (wx * general_power(w.piece(y), -1.0 / p) * f[y]).norm();
  }
  double best = 0.0;
  auto average = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t y = i; y < j; ++y) s += h[y];
    return s / static_cast<double>(j - i);
  };
  if (mode == CgMode::kDyadicLocal) {
    for (std::size_t len = count; len >= 1; len /= 2) {
      for (std::size_t i = 0; i < count; i += len) {
        if (i <= k && k < i + len) best = std::max(best, average(i, i + len));
      }
    }
  } else {
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = k + 1; j <= count; ++j) best = std::max(best, average(i, j));
    }
  }
  return best;
}

}  // namespace sharpweights::oracle
