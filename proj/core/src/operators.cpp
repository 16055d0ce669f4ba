// SPDX-License-Identifier: MIT
#include "sharpweights/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sharpweights/detail/compensated.hpp"
#include "sharpweights/detail/gauss_legendre.hpp"
#include "sharpweights/error.hpp"

namespace sharpweights {

namespace {

void require_compact(const StepFunction& f, const char* who) {
  if (f.is_periodic() || f.outside_value() != 0.0) {
    throw InvalidArgument(std::string(who) + ": function must vanish outside its breakpoints");
  }
}

// Breakpoints y_0..y_B of f and the primitive at each of them.
struct Graph {
  std::vector<double> y;
  std::vector<double> F;
  std::vector<double> v;

  explicit Graph(const StepFunction& f) {
    const auto bp = f.breakpoints();
    const auto vals = f.values();
    y.assign(bp.begin(), bp.end());
    v.assign(vals.begin(), vals.end());
    F.resize(y.size());
    detail::DoubleDouble acc;
    F[0] = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0) throw DomainError("maximal function: f must be nonnegative");
      acc.add(v[i] * (y[i + 1] - y[i]));
      F[i + 1] = acc.value();
    }
  }

  // Piece of x within [y_0, y_B), or B when outside.
  [[nodiscard]] std::size_t piece(double x) const {
    if (x < y.front() || x >= y.back()) return v.size();
    auto it = std::upper_bound(y.begin(), y.end(), x);
    return static_cast<std::size_t>(it - y.begin()) - 1;
  }

  [[nodiscard]] double primitive(double x) const {
    if (x <= y.front()) return 0.0;
    if (x >= y.back()) return F.back();
    const std::size_t k = piece(x);
    return F[k] + v[k] * (x - y[k]);
  }

  [[nodiscard]] double avg(std::size_t i, std::size_t j) const {
    return (F[j] - F[i]) / (y[j] - y[i]);
  }
};

// Candidates that use x itself as an endpoint, plus the one-sided limits.
double maximal_through_x(const Graph& g, double x) {
  const double Fx = g.primitive(x);
  double best = 0.0;
  const std::size_t k = g.piece(x);
  if (k < g.v.size()) best = g.v[k];
  // left limit at a breakpoint
  auto it = std::lower_bound(g.y.begin(), g.y.end(), x);
  if (it != g.y.end() && *it == x && it != g.y.begin()) {
    const auto i = static_cast<std::size_t>(it - g.y.begin());
    if (i <= g.v.size()) best = std::max(best, g.v[i - 1]);
  }
  for (std::size_t j = 0; j < g.y.size(); ++j) {
    if (g.y[j] > x) best = std::max(best, (g.F[j] - Fx) / (g.y[j] - x));
    else if (g.y[j] < x) best = std::max(best, (Fx - g.F[j]) / (x - g.y[j]));
  }
  return best;
}

}  // namespace

double maximal_chi_unit(double x) {
  if (x > 1.0) return 1.0 / x;
  if (x < 0.0) return 1.0 / (1.0 - x);
  return 1.0;
}

double uncentered_maximal(const StepFunction& f, double x, double) {
  require_compact(f, "uncentered_maximal");
  const Graph g(f);
  double best = maximal_through_x(g, x);
  // Breakpoint pairs straddling x.
  for (std::size_t i = 0; i < g.y.size() && g.y[i] <= x; ++i) {
    for (std::size_t j = g.y.size(); j-- > i + 1 && g.y[j] >= x;) {
      best = std::max(best, g.avg(i, j));
    }
  }
  return best;
}

std::vector<double> uncentered_maximal_at(const StepFunction& f, std::span<const double> xs) {
  require_compact(f, "uncentered_maximal_at");
  const Graph g(f);
  const std::size_t n = g.y.size();
  constexpr std::size_t kTableLimit = 2048;
  std::vector<double> out(xs.size());
  if (n > kTableLimit) {
    for (std::size_t t = 0; t < xs.size(); ++t) out[t] = uncentered_maximal(f, xs[t]);
    return out;
  }
  // straddle[k] = max over breakpoint pairs i <= k < j of avg(i, j), built
  // from D(i, j) = max over i' <= i, j' >= j.
  std::vector<double> straddle(n, 0.0);
  std::vector<double> row(n, 0.0);  // D(i - 1, .)
  std::vector<double> cur(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double right = 0.0;
    for (std::size_t j = n; j-- > i + 1;) {
      right = std::max({right, g.avg(i, j), row[j]});
      cur[j] = right;
    }
    straddle[i] = cur[i + 1];
    std::swap(row, cur);
  }
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const double x = xs[t];
    double best = maximal_through_x(g, x);
    const std::size_t k = g.piece(x);
    if (k < g.v.size()) {
      best = std::max(best, straddle[k]);
      // x on the breakpoint y_k also straddles pairs ending at y_k.
      if (x == g.y[k] && k > 0) best = std::max(best, straddle[k - 1]);
    }
    out[t] = best;
  }
  return out;
}

double dyadic_maximal(const StepFunction& f, const DyadicLattice& lattice, double x,
                      const DyadicCube& window) {
  const Interval top = lattice.interval(window);
  if (!top.contains(x)) throw InvalidArgument("dyadic_maximal: x lies outside the window");
  double best = -std::numeric_limits<double>::infinity();
  DyadicCube cube = window;
  while (true) {
    const Interval iv = lattice.interval(cube);
    best = std::max(best, f.integrate(iv) / iv.length());
    // Once f is constant on the cube, every finer cube has the same average.
    if (f.segments(iv).size() == 1) break;
    if (cube.generation >= lattice.generation_cap()) break;
    cube = lattice.cube_containing(x, cube.generation + 1);
  }
  return best;
}

double hardy(const StepFunction& f, double x) {
  if (!(x > 0.0)) throw DomainError("hardy: x must be positive");
  require_compact(f, "hardy");
  if (f.breakpoints().front() < 0.0) throw InvalidArgument("hardy: support must lie in [0, inf)");
  return f.integrate(Interval(0.0, x)) / x;
}

double dual_hardy(const StepFunction& f, double x) {
  if (!(x > 0.0)) throw DomainError("dual_hardy: x must be positive");
  require_compact(f, "dual_hardy");
  const auto bp = f.breakpoints();
  const auto v = f.values();
  if (bp.front() < 0.0) throw InvalidArgument("dual_hardy: support must lie in [0, inf)");
  double s = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) {
    const double b = bp[i + 1];
    if (b <= x) break;
    if (v[i] != 0.0) s += v[i] * std::log(b / std::max(bp[i], x));
  }
  return s;
}

double hilbert_step(const StepFunction& f, double x) {
  require_compact(f, "hilbert_step");
  const auto bp = f.breakpoints();
  const auto v = f.values();
  if (std::binary_search(bp.begin(), bp.end(), x)) {
    throw DomainError("hilbert_step: x = " + std::to_string(x) + " is a breakpoint");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) s += v[i] * std::log(std::abs(x - bp[i]) / std::abs(x - bp[i + 1]));
  }
  return s;
}

StepFunction sparse_apply(const SparseFamily& family, const StepFunction& phi) {
  if (family.empty()) return StepFunction::indicator(phi.support(), 0.0);
  std::vector<Interval> cubes;
  std::vector<double> coeff;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& q = family.interval(i);
    cubes.push_back(q);
    coeff.push_back(phi.integrate(q) / q.length());
  }
  return cube_sum(cubes, coeff);
}

StepFunction weighted_sparse_apply(const CubeFunctions& lambda, const SparseFamily& family,
                                   const StepFunction& psi) {
  if (family.empty()) return StepFunction::indicator(psi.support(), 0.0);
  std::vector<Interval> cubes;
  std::vector<double> coeff;
  std::vector<const StepFunction*> mult;
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto it = lambda.find(family.cubes()[i]);
    if (it == lambda.end()) {
      throw InvalidArgument("weighted_sparse_apply: no multiplier for cube " +
                            family.cubes()[i].id());
    }
    const auto& q = family.interval(i);
    cubes.push_back(q);
    coeff.push_back(psi.integrate(q) / q.length());
    mult.push_back(&it->second);
  }
  return cube_sum(cubes, coeff, mult);
}

WeakNormReport weak_lp_quasinorm(const StepFunction& g, double p, const Interval& window,
                                 const StepFunction* weight) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("weak_lp_quasinorm: p must be >= 1");
  std::vector<std::pair<double, double>> cells;  // (value, mass)
  if (weight) {
    const StepFunction* fs[] = {&g, weight};
    const auto mesh = common_mesh(fs, window);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      const Interval c(mesh[i], mesh[i + 1]);
      const double v = g(c.midpoint());
      if (v < 0) throw DomainError("weak_lp_quasinorm: g must be nonnegative");
      if (v > 0) cells.emplace_back(v, weight->integrate(c));
    }
  } else {
    for (const auto& s : g.segments(window)) {
      if (s.value < 0) throw DomainError("weak_lp_quasinorm: g must be nonnegative");
      if (s.value > 0) cells.emplace_back(s.value, s.length());
    }
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  WeakNormReport out;
  detail::DoubleDouble mass;
  for (std::size_t i = 0; i < cells.size();) {
    const double v = cells[i].first;
    while (i < cells.size() && cells[i].first == v) mass.add(cells[i++].second);
    ++out.level_grid_size;
    const double value = v * std::pow(mass.value(), 1.0 / p);
    if (value > out.value) {
      out.value = value;
      out.level = v;
    }
  }
  return out;
}

double sharpness_functional_small_p(const StepFunction& w, double p, const Interval& window) {
  return compare_measure(pointwise_power(w, 1.0 / p), AnalyticBound::linear(1.0), window);
}

double sharpness_functional_hilbert(const StepFunction& w, double p, const Interval& window) {
  return compare_measure(pointwise_power(w, 1.0 / p), AnalyticBound::inverse_hilbert_unit(1.0),
                         window);
}

DualHardyReport dual_hardy_experiment(const StepFunction& w, double p,
                                      const std::vector<Interval>& sets, const QuadConfig& quad) {
  const Exponent ex(p);
  if (sets.empty()) throw InvalidArgument("dual_hardy_experiment: E is empty");
  std::vector<Interval> e = sets;
  std::sort(e.begin(), e.end(), [](const Interval& a, const Interval& b) { return a.a() < b.a(); });
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i].a() >= 0.0)) throw InvalidArgument("dual_hardy_experiment: E must lie in [0, inf)");
    if (i > 0 && e[i].a() < e[i - 1].b()) {
      throw InvalidArgument("dual_hardy_experiment: intervals of E overlap");
    }
  }
  // g = w^{1/p} chi_E as an explicit step function.
  std::vector<Segment> gsegs;
  for (const auto& iv : e) {
    for (const auto& s : w.segments(iv)) {
      if (!(s.value > 0.0)) throw DomainError("dual_hardy_experiment: weight must be positive");
      gsegs.push_back({s.a, s.b, std::pow(s.value, 1.0 / p)});
    }
  }
  std::vector<Segment> filled;
  for (const auto& s : gsegs) {
    if (!filled.empty() && filled.back().b < s.a) filled.push_back({filled.back().b, s.a, 0.0});
    filled.push_back(s);
  }
  const StepFunction g = from_segments(filled, 0.0);
  const auto gb = g.breakpoints();
  const auto gv = g.values();
  // tail[i] = int_{b_i}^inf g(t)/t dt
  std::vector<double> tail(gv.size() + 1, 0.0);
  for (std::size_t i = gv.size(); i-- > 0;) {
    tail[i] = tail[i + 1] + (gv[i] != 0.0 ? gv[i] * std::log(gb[i + 1] / gb[i]) : 0.0);
  }
  auto hstar = [&](double x) {
    if (x >= gb.back()) return 0.0;
    if (x < gb.front()) return tail[0];
    auto it = std::upper_bound(gb.begin(), gb.end(), x);
    const auto i = static_cast<std::size_t>(it - gb.begin()) - 1;
    return tail[i + 1] + gv[i] * std::log(gb[i + 1] / x);
  };
  // Below the support H* is the constant tail[0] (0 < x < b_0 with b_0 > 0)
  // except when E starts at 0, where the first cell carries ln(1/x).
  const double top = gb.back();
  const double pd = ex.conjugate();
  const double sp = ex.dual_power();
  const auto rule = detail::gauss_legendre(quad.order);

  std::vector<double> mesh{0.0, top};
  for (const auto& s : w.segments(Interval(0.0, top))) mesh.push_back(s.a);
  for (double b : gb) mesh.push_back(b);
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());

  detail::DoubleDouble total;
  double err = 0.0;
  DualHardyReport out;
  auto cell = [&](double a, double b) {
    const double sigma = std::pow(w(0.5 * (a + b)), sp);
    const bool flat = g(0.5 * (a + b)) == 0.0;
    auto integrand = [&](double x) { return std::pow(hstar(x), pd) * sigma; };
    if (flat) {
      total.add(std::pow(hstar(0.5 * (a + b)), pd) * sigma * (b - a));
      ++out.cells;
      return;
    }
    const double whole = rule.integrate(integrand, a, b);
    const double m = 0.5 * (a + b);
    const double halves = rule.integrate(integrand, a, m) + rule.integrate(integrand, m, b);
    total.add(halves);
    err += std::abs(halves - whole);
    ++out.cells;
  };
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double a = mesh[i];
    const double b = mesh[i + 1];
    if (a == 0.0 && gb.front() == 0.0 && gv.front() != 0.0) {
      // Logarithmic singularity at 0: geometric cells down to 2^-60 b.
      double hi = b;
      for (int k = 0; k < 60; ++k) {
        cell(0.5 * hi, hi);
        hi *= 0.5;
      }
      continue;
    }
    cell(a, b);
  }
  out.integral = total.value();
  out.value = std::pow(out.integral, 1.0 / pd);
  out.error_estimate = out.integral > 0 ? err / out.integral : 0.0;
  out.flagged = out.error_estimate > quad.tolerance;
  return out;
}

}  // namespace sharpweights
