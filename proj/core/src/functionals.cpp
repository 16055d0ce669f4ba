// SPDX-License-Identifier: MIT
#include "sharpweights/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "sharpweights/detail/gauss_legendre.hpp"
#include "sharpweights/detail/mass_table.hpp"
#include "sharpweights/detail/parallel.hpp"
#include "sharpweights/dyadic.hpp"
#include "sharpweights/error.hpp"
#include "sharpweights/operators.hpp"

namespace sharpweights {

namespace {

void require_positive(const std::vector<Segment>& segs, const char* who) {
  for (const auto& s : segs) {
    if (!(s.value > 0.0)) {
      throw DomainError(std::string(who) + ": weight must be positive on the domain");
    }
  }
}

struct Candidate {
  double value;
  std::size_t i;
  std::size_t j;
};

// Larger value first; ties resolved by position so the order is total.
bool better(const Candidate& x, const Candidate& y) {
  if (x.value != y.value) return x.value > y.value;
  return std::tie(x.i, x.j) < std::tie(y.i, y.j);
}

void keep_top(std::vector<Candidate>& top, const Candidate& c, std::size_t k) {
  if (top.size() < k) {
    top.push_back(c);
    std::push_heap(top.begin(), top.end(), better);
    return;
  }
  // The heap front is the worst retained candidate.
  if (better(c, top.front())) {
    std::pop_heap(top.begin(), top.end(), better);
    top.back() = c;
    std::push_heap(top.begin(), top.end(), better);
  }
}

struct ApTable {
  detail::MassTable table;
  std::size_t w;
  std::size_t sigma;
  double q;  // p - 1

  ApTable(const StepFunction& weight, const Exponent& p, const Interval& domain, const char* who)
      : table(weight.segments(domain)), w(0), sigma(0), q(p.value() - 1.0) {
    require_positive(table.segments(), who);
    w = table.add_density([](double v) { return v; });
    const double s = p.dual_power();
    sigma = table.add_density([s](double v) { return std::pow(v, s); });
  }

  [[nodiscard]] double pair(std::size_t i, std::size_t j) const {
    const auto pts = table.points();
    const double len = pts[j] - pts[i];
    return (table.mass(w, i, j) / len) * std::pow(table.mass(sigma, i, j) / len, q);
  }

  [[nodiscard]] double at(double a, double b) const {
    const double len = b - a;
    return (table.mass_at(w, a, b) / len) * std::pow(table.mass_at(sigma, a, b) / len, q);
  }
};

// Maximises fn on [lo, hi] by golden-section steps; returns the best point
// seen, never worse than `start`.
template <class Fn>
std::pair<double, double> golden_max(Fn&& fn, double lo, double hi, double start, double f_start,
                                     int steps, std::int64_t& evals) {
  double best_x = start;
  double best_f = f_start;
  auto consider = [&](double x, double f) {
    if (f > best_f) {
      best_f = f;
      best_x = x;
    }
  };
  if (!(lo < hi)) return {best_x, best_f};
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  evals += 2;
  consider(c, fc);
  consider(d, fd);
  for (int s = 0; s < steps; ++s) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
      consider(d, fd);
    }
    ++evals;
  }
  for (double x : {lo, hi}) {
    consider(x, fn(x));
    ++evals;
  }
  return {best_x, best_f};
}

}  // namespace

void SearchConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("SearchConfig: tolerance must be positive");
  if (refinement_passes < 0 || refinement_steps < 0 || refine_top < 0) {
    throw InvalidArgument("SearchConfig: refinement counts must be nonnegative");
  }
}

double ap_functional(const StepFunction& w, const Exponent& p, const Interval& interval) {
  const auto segs = w.segments(interval);
  require_positive(segs, "ap_functional");
  const double s = p.dual_power();
  detail::DoubleDouble mw;
  detail::DoubleDouble ms;
  for (const auto& sg : segs) {
    mw.add(sg.value * sg.length());
    ms.add(std::pow(sg.value, s) * sg.length());
  }
  const double len = interval.length();
  return (mw.value() / len) * std::pow(ms.value() / len, p.value() - 1.0);
}

Interval default_search_domain(const StepFunction& w) {
  const auto bp = w.breakpoints();
  if (w.is_periodic()) return {bp.front(), bp.front() + 0.5 * *w.period()};
  return w.support();
}

ApReport ap_constant(const StepFunction& w, const Exponent& p, const SearchConfig& config) {
  config.validate();
  const Interval domain = config.domain.value_or(default_search_domain(w));
  const ApTable table(w, p, domain, "ap_constant");
  const auto pts = table.table.points();
  const std::size_t n = pts.size();
  const auto top_k = static_cast<std::size_t>(std::max(1, config.refine_top));

  const std::size_t chunks = detail::chunk_count(n - 1, config.jobs);
  std::vector<std::vector<Candidate>> tops(chunks);
  // Row i costs n - i pairs; interleave rows so chunks carry similar work.
  detail::parallel_chunks(n - 1, config.jobs, [&](std::size_t c, std::size_t, std::size_t) {
    auto& top = tops[c];
    for (std::size_t i = c; i + 1 < n; i += chunks) {
      for (std::size_t j = i + 1; j < n; ++j) keep_top(top, {table.pair(i, j), i, j}, top_k);
    }
  });
  std::vector<Candidate> all;
  for (auto& t : tops) all.insert(all.end(), t.begin(), t.end());
  std::sort(all.begin(), all.end(), better);
  if (all.size() > top_k) all.resize(top_k);

  ApReport report;
  report.candidates_examined = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  report.stage_one_value = all.front().value;
  report.value = all.front().value;
  report.argmax = Interval(pts[all.front().i], pts[all.front().j]);

  double best_residual = 0.0;
  bool first = true;
  for (const auto& cand : all) {
    double a = pts[cand.i];
    double b = pts[cand.j];
    double value = cand.value;
    double residual = 0.0;
    for (int pass = 0; pass < config.refinement_passes; ++pass) {
      const double before = value;
      const double gap = 1e-12 * (b - a);
      {
        const double lo = pts[cand.i == 0 ? 0 : cand.i - 1];
        const double hi = std::min(pts[std::min(cand.i + 1, n - 1)], b - gap);
        auto [x, f] = golden_max([&](double t) { return table.at(t, b); }, lo, hi, a, value,
                                 config.refinement_steps, report.candidates_examined);
        a = x;
        value = f;
      }
      {
        const double lo = std::max(pts[cand.j - 1], a + gap);
        const double hi = pts[std::min(cand.j + 1, n - 1)];
        auto [x, f] = golden_max([&](double t) { return table.at(a, t); }, lo, hi, b, value,
                                 config.refinement_steps, report.candidates_examined);
        b = x;
        value = f;
      }
      residual = (value - before) / value;
      if (residual < config.tolerance * 1e-3) break;
    }
    if (first || value > report.value) {
      report.value = value;
      report.argmax = Interval(a, b);
      best_residual = residual;
    }
    first = false;
  }
  report.refinement_residual = best_residual;
  return report;
}

DualityReport ap_duality_check(const StepFunction& w, const Exponent& p,
                               const SearchConfig& config) {
  config.validate();
  const Interval domain = config.domain.value_or(default_search_domain(w));
  detail::MassTable table(w.segments(domain));
  require_positive(table.segments(), "ap_duality_check");
  const Exponent pd(p.conjugate());
  const std::size_t dw = table.add_density([](double v) { return v; });
  const double s = p.dual_power();
  const std::size_t ds = table.add_density([s](double v) { return std::pow(v, s); });
  // Dual weight of sigma, rebuilt from sigma's values rather than from w.
  const double sd = pd.dual_power();
  const std::size_t dws =
      table.add_density([s, sd](double v) { return std::pow(std::pow(v, s), sd); });
  const auto pts = table.points();
  const std::size_t n = pts.size();
  const double q = p.value() - 1.0;
  const double qd = pd.value() - 1.0;

  struct Partial {
    double sigma_ap = 0.0;
    double w_ap = 0.0;
    Candidate worst{-1.0, 0, 0};
  };
  const std::size_t chunks = detail::chunk_count(n - 1, config.jobs);
  std::vector<Partial> parts(chunks);
  detail::parallel_chunks(n - 1, config.jobs, [&](std::size_t c, std::size_t, std::size_t) {
    auto& part = parts[c];
    for (std::size_t i = c; i + 1 < n; i += chunks) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double len = pts[j] - pts[i];
        const double aw = table.mass(dw, i, j) / len;
        const double as = table.mass(ds, i, j) / len;
        const double aws = table.mass(dws, i, j) / len;
        const double lhs = as * std::pow(aws, qd);
        const double rhs = std::pow(aw * std::pow(as, q), 1.0 / q);
        part.sigma_ap = std::max(part.sigma_ap, lhs);
        part.w_ap = std::max(part.w_ap, rhs);
        const double gap = std::abs(lhs - rhs) / std::max(lhs, rhs);
        const Candidate cand{gap, i, j};
        if (better(cand, part.worst)) part.worst = cand;
      }
    }
  });
  DualityReport out;
  Candidate worst{-1.0, 0, 0};
  for (const auto& part : parts) {
    out.sigma_ap = std::max(out.sigma_ap, part.sigma_ap);
    out.w_ap_power = std::max(out.w_ap_power, part.w_ap);
    if (better(part.worst, worst)) worst = part.worst;
  }
  out.max_discrepancy = std::max(0.0, worst.value);
  out.worst = Interval(pts[worst.i], pts[worst.j]);
  out.candidates = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  return out;
}

AinfReport ainf_constant(const StepFunction& w, const AinfConfig& config) {
  if (config.generations < 0 || config.generations > 20) {
    throw InvalidArgument("ainf_constant: generations must be in [0, 20]");
  }
  const Interval domain = config.domain.value_or(default_search_domain(w));
  require_positive(w.segments(domain), "ainf_constant");
  const auto coarse = detail::gauss_legendre(config.gauss_order);
  const auto fine = detail::gauss_legendre(2 * config.gauss_order);

  std::vector<Interval> candidates;
  for (const auto& lattice : three_lattices(1, domain.length(), domain.a())) {
    for (int g = 0; g <= config.generations; ++g) {
      const Interval box[] = {domain};
      for (const auto& cube : lattice.cubes_meeting(box, g)) {
        const Interval iv = lattice.interval(cube);
        if (domain.contains(iv)) candidates.push_back(iv);
      }
    }
  }

  AinfReport report;
  report.candidates = static_cast<std::int64_t>(candidates.size());
  for (const auto& q : candidates) {
    const auto segs = w.segments(q);
    const StepFunction local = from_segments(segs, 0.0);
    double mass = 0.0;
    for (const auto& s : segs) mass += s.value * s.length();
    auto integral = [&](const detail::GaussLegendreRule& rule) {
      std::vector<double> xs;
      std::vector<double> ws;
      for (const auto& s : segs) {
        const double half = 0.5 * s.length();
        const double mid = 0.5 * (s.a + s.b);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          xs.push_back(mid + half * rule.nodes[k]);
          ws.push_back(half * rule.weights[k]);
        }
      }
      const auto m = uncentered_maximal_at(local, xs);
      double sum = 0.0;
      for (std::size_t k = 0; k < m.size(); ++k) sum += ws[k] * m[k];
      return sum;
    };
    const double lo = integral(coarse);
    const double hi = integral(fine);
    const double value = hi / mass;
    report.quadrature_residual = std::max(report.quadrature_residual, std::abs(hi - lo) / hi);
    if (value > report.value) {
      report.value = value;
      report.argmax = q;
    }
  }
  return report;
}

ReverseHolderReport reverse_holder_probe(const StepFunction& w, const Exponent& p,
                                         const SearchConfig& config) {
  config.validate();
  ReverseHolderReport report;
  report.ap = ap_constant(w, p, config).value;
  const Interval domain = config.domain.value_or(default_search_domain(w));
  detail::MassTable table(w.segments(domain));
  const auto pts = table.points();
  const std::size_t n = pts.size();
  const std::size_t dw = table.add_density([](double v) { return v; });
  for (int j = 0; j <= 20; ++j) {
    const double r = 1.0 + std::ldexp(1.0, -j);
    const std::size_t dr = table.add_density([r](double v) { return std::pow(v, r); });
    const std::size_t chunks = detail::chunk_count(n - 1, config.jobs);
    std::vector<Candidate> first(chunks, Candidate{0.0, n, n});
    detail::parallel_chunks(n - 1, config.jobs, [&](std::size_t c, std::size_t, std::size_t) {
      for (std::size_t i = c; i + 1 < n; i += chunks) {
        for (std::size_t k = i + 1; k < n; ++k) {
          const double len = pts[k] - pts[i];
          const double lhs = std::pow(table.mass(dr, i, k) / len, 1.0 / r);
          const double rhs = 2.0 * table.mass(dw, i, k) / len;
          if (lhs > rhs * (1.0 + 1e-12)) {
            first[c] = {0.0, i, k};
            return;
          }
        }
      }
    });
    std::size_t bi = n;
    std::size_t bk = n;
    for (const auto& f : first) {
      if (std::tie(f.i, f.j) < std::tie(bi, bk)) {
        bi = f.i;
        bk = f.j;
      }
    }
    if (bi == n) {
      report.r_max = r;
      report.found = true;
      report.witness.reset();
      break;
    }
    report.witness = Interval(pts[bi], pts[bk]);
  }
  if (report.found) report.c_estimate = 1.0 / ((report.r_max - 1.0) * report.ap);
  return report;
}

CovReport cov_functional(const SparseFamily& family, const CubeCoefficients& lambda,
                         const StepFunction& w, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("cov_functional: p must be >= 1");
  const std::size_t n = family.size();
  std::vector<double> coeff(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = lambda.find(family.cubes()[i]);
    if (it == lambda.end()) {
      throw InvalidArgument("cov_functional: no coefficient for cube " + family.cubes()[i].id());
    }
    if (!(it->second >= 0.0)) throw InvalidArgument("cov_functional: coefficients must be >= 0");
    coeff[i] = it->second;
  }
  CovReport out;
  if (n == 0) return out;
  const auto& forest = family.forest();
  std::vector<double> wq(n);
  for (std::size_t i = 0; i < n; ++i) wq[i] = w.integrate(forest.intervals[i]);

  // Subtree sums of lambda_Q' w(Q'); cubes are sorted so descendants follow
  // their ancestors, hence a reverse sweep accumulates bottom-up.
  std::vector<double> inner(n);
  for (std::size_t i = 0; i < n; ++i) inner[i] = coeff[i] * wq[i];
  for (std::size_t i = n; i-- > 0;) {
    if (forest.parent[i] >= 0) inner[static_cast<std::size_t>(forest.parent[i])] += inner[i];
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (coeff[i] == 0.0) continue;
    rhs += coeff[i] * std::pow(inner[i] / wq[i], p - 1.0) * wq[i];
  }
  out.rhs = std::pow(rhs, 1.0 / p);

  const StepFunction g = cube_sum(forest.intervals, coeff);
  out.lhs = std::pow(power_integral(g, p, g.support(), &w), 1.0 / p);
  return out;
}

}  // namespace sharpweights
