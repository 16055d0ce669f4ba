// SPDX-License-Identifier: MIT
#include "sharpweights/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sharpweights/error.hpp"

namespace sharpweights {

namespace {

// |{x in [a, b) : x < t}|
double measure_below(double a, double b, double t) {
  return std::clamp(t - a, 0.0, b - a);
}

// |{x in [a, b) : x > t}|
double measure_above(double a, double b, double t) {
  return std::clamp(b - t, 0.0, b - a);
}

// Inverse of h(x) = ln(x / (x - 1)) on x > 1, for t > 0.
double hilbert_unit_inverse(double t) { return 1.0 + 1.0 / std::expm1(t); }

double solve_piece(double a, double b, double v, const AnalyticBound& g) {
  const double c = g.coefficient();
  switch (g.kind()) {
    case AnalyticBound::Kind::kConstant:
      return v > c ? b - a : 0.0;
    case AnalyticBound::Kind::kLinear:
      if (c > 0) return measure_below(a, b, v / c);
      if (c < 0) return measure_above(a, b, v / c);
      return v > 0 ? b - a : 0.0;
    case AnalyticBound::Kind::kReciprocal: {
      double total = 0.0;
      if (b > 0) {  // x > 0: v x > c
        const double lo = std::max(a, 0.0);
        if (v > 0) {
          total += measure_above(lo, b, c / v);
        } else if (v == 0) {
          total += c < 0 ? b - lo : 0.0;
        } else {
          total += measure_below(lo, b, c / v);
        }
      }
      if (a < 0) {  // x < 0: v x < c
        const double hi = std::min(b, 0.0);
        if (v > 0) {
          total += measure_below(a, hi, c / v);
        } else if (v == 0) {
          total += c > 0 ? hi - a : 0.0;
        } else {
          total += measure_above(a, hi, c / v);
        }
      }
      return total;
    }
    case AnalyticBound::Kind::kHilbertUnit: {
      // v > c h(x), h decreasing from +inf to 0 on (1, inf).
      if (c > 0) {
        if (v <= 0) return 0.0;
        return measure_above(a, b, hilbert_unit_inverse(v / c));
      }
      if (c == 0) return v > 0 ? b - a : 0.0;
      const double t = v / c;
      if (t <= 0) return b - a;
      return measure_below(a, b, hilbert_unit_inverse(t));
    }
    case AnalyticBound::Kind::kInverseHilbertUnit: {
      // v > c / h(x)  <=>  v h(x) > c.
      if (v > 0) {
        const double t = c / v;
        if (t <= 0) return b - a;
        return measure_below(a, b, hilbert_unit_inverse(t));
      }
      if (v == 0) return c < 0 ? b - a : 0.0;
      const double t = c / v;
      if (t <= 0) return 0.0;
      return measure_above(a, b, hilbert_unit_inverse(t));
    }
  }
  return 0.0;
}

}  // namespace

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw InvalidArgument("Interval requires finite a < b, got [" +
                          std::to_string(a) + ", " + std::to_string(b) + ")");
  }
}

double Interval::overlap(const Interval& other) const {
  return std::max(0.0, std::min(b_, other.b_) - std::max(a_, other.a_));
}

Exponent::Exponent(double p) : p_(p) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    throw InvalidArgument("Exponent requires 1 < p < inf, got " + std::to_string(p));
  }
}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                           double outside_value)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      outside_(outside_value) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
    throw InvalidArgument("StepFunction needs B >= 1 pieces and B + 1 breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) {
      throw InvalidArgument("StepFunction breakpoints must be finite");
    }
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
      throw InvalidArgument("StepFunction breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("StepFunction values must be finite");
  }
  if (!std::isfinite(outside_)) {
    throw InvalidArgument("StepFunction outside value must be finite");
  }
  std::vector<double> masses(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    masses[i] = values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
  }
  prefix_ = detail::prefix_sums(masses);
}

StepFunction StepFunction::periodic(std::vector<double> breakpoints,
                                    std::vector<double> values) {
  StepFunction f(std::move(breakpoints), std::move(values), 0.0);
  f.period_ = f.breakpoints_.back() - f.breakpoints_.front();
  return f;
}

StepFunction StepFunction::indicator(const Interval& support, double height) {
  return StepFunction({support.a(), support.b()}, {height}, 0.0);
}

StepFunction StepFunction::constant(double c, const Interval& support) {
  return StepFunction({support.a(), support.b()}, {c}, c);
}

Interval StepFunction::piece(std::size_t i) const {
  return {breakpoints_.at(i), breakpoints_.at(i + 1)};
}

Interval StepFunction::support() const {
  return {breakpoints_.front(), breakpoints_.back()};
}

std::size_t StepFunction::locate(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  auto idx = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, values_.size() - 1);
}

double StepFunction::operator()(double x) const {
  const double x0 = breakpoints_.front();
  const double xb = breakpoints_.back();
  if (period_) {
    double r = std::fmod(x - x0, *period_);
    if (r < 0) r += *period_;
    return values_[locate(x0 + r)];
  }
  if (x < x0 || x >= xb) return outside_;
  return values_[locate(x)];
}

double StepFunction::local_primitive(double x) const {
  const std::size_t i = locate(x);
  return prefix_[i].value() + values_[i] * (x - breakpoints_[i]);
}

double StepFunction::primitive(double x) const {
  const double x0 = breakpoints_.front();
  const double xb = breakpoints_.back();
  const double total = prefix_.back().value();
  if (period_) {
    const double k = std::floor((x - x0) / *period_);
    double r = x - x0 - k * *period_;
    r = std::clamp(r, 0.0, *period_);
    return k * total + (r >= *period_ ? total : local_primitive(x0 + r));
  }
  if (x < x0) return outside_ * (x - x0);
  if (x >= xb) return total + outside_ * (x - xb);
  return local_primitive(x);
}

double StepFunction::integrate(const Interval& window) const {
  if (!period_) {
    // Summing segments keeps full accuracy for short windows inside long meshes.
    const auto segs = segments(window);
    if (segs.size() <= 64) {
      double s = 0.0;
      for (const auto& sg : segs) s += sg.value * sg.length();
      return s;
    }
    const double x0 = breakpoints_.front();
    const double xb = breakpoints_.back();
    double s = 0.0;
    const double lo = std::max(window.a(), x0);
    const double hi = std::min(window.b(), xb);
    if (window.a() < x0) s += outside_ * (std::min(window.b(), x0) - window.a());
    if (window.b() > xb) s += outside_ * (window.b() - std::max(window.a(), xb));
    if (lo < hi) {
      const std::size_t i = locate(lo);
      const std::size_t j = locate(hi);
      if (i == j) return s + values_[i] * (hi - lo);
      // (prefix[j] - prefix[i+1]) + partial head and tail pieces
      s += detail::difference(prefix_[j], prefix_[i + 1]);
      s += values_[i] * (breakpoints_[i + 1] - lo);
      s += values_[j] * (hi - breakpoints_[j]);
    }
    return s;
  }
  const double periods = window.length() / *period_;
  if (periods > 4.0) return primitive(window.b()) - primitive(window.a());
  double s = 0.0;
  for (const auto& sg : segments(window)) s += sg.value * sg.length();
  return s;
}

std::vector<Segment> StepFunction::segments(const Interval& window) const {
  std::vector<Segment> out;
  const double x0 = breakpoints_.front();
  const double xb = breakpoints_.back();
  const double a = window.a();
  const double b = window.b();
  auto push = [&](double lo, double hi, double v) {
    if (!out.empty()) lo = out.back().b;
    if (hi > lo) out.push_back({lo, hi, v});
  };
  if (!period_) {
    if (a < x0) push(a, std::min(b, x0), outside_);
    const double lo = std::max(a, x0);
    const double hi = std::min(b, xb);
    if (lo < hi) {
      for (std::size_t i = locate(lo); i < values_.size() && breakpoints_[i] < hi; ++i) {
        push(std::max(lo, breakpoints_[i]), std::min(hi, breakpoints_[i + 1]), values_[i]);
      }
    }
    if (b > xb) push(std::max(a, xb), b, outside_);
    if (out.empty()) out.push_back({a, b, (*this)(a)});
    return out;
  }
  const double period = *period_;
  double k = std::floor((a - x0) / period);
  while (true) {
    const double shift = k * period;
    if (x0 + shift >= b) break;
    const double local_a = std::max(a - shift, x0);
    std::size_t i = local_a >= xb ? values_.size() : locate(local_a);
    for (; i < values_.size(); ++i) {
      const double pa = breakpoints_[i] + shift;
      const double pb = (i + 1 == values_.size()) ? x0 + (k + 1) * period
                                                  : breakpoints_[i + 1] + shift;
      if (pa >= b) break;
      push(std::max(a, pa), std::min(b, pb), values_[i]);
    }
    k += 1.0;
  }
  if (out.empty()) out.push_back({a, b, (*this)(a)});
  out.back().b = b;
  return out;
}

StepFunction StepFunction::scaled(double factor) const {
  return map_values([factor](double v) { return v * factor; });
}

StepFunction from_segments(std::span<const Segment> segments, double outside_value) {
  if (segments.empty()) throw InvalidArgument("from_segments: no segments");
  std::vector<double> bp;
  std::vector<double> vals;
  bp.reserve(segments.size() + 1);
  vals.reserve(segments.size());
  bp.push_back(segments.front().a);
  for (const auto& s : segments) {
    if (s.a != bp.back()) throw InvalidArgument("from_segments: segments are not contiguous");
    bp.push_back(s.b);
    vals.push_back(s.value);
  }
  return StepFunction(std::move(bp), std::move(vals), outside_value);
}

double AnalyticBound::operator()(double x) const {
  switch (kind_) {
    case Kind::kConstant: return c_;
    case Kind::kLinear: return c_ * x;
    case Kind::kReciprocal: return c_ / x;
    case Kind::kHilbertUnit: return c_ * std::log1p(1.0 / (x - 1.0));
    case Kind::kInverseHilbertUnit: return c_ / std::log1p(1.0 / (x - 1.0));
  }
  return 0.0;
}

double integrate(const StepFunction& f, const Interval& window) {
  return f.integrate(window);
}

StepFunction pointwise_power(const StepFunction& f, double s) {
  if (s == 1.0) return f;
  const bool integral = std::floor(s) == s;
  auto check = [&](double v) {
    if (v < 0 && !integral) {
      throw DomainError("pointwise_power: negative value with fractional exponent");
    }
    if (v == 0 && s < 0) throw DomainError("pointwise_power: zero value with negative exponent");
  };
  for (double v : f.values()) check(v);
  if (!f.is_periodic()) check(f.outside_value());
  return f.map_values([s](double v) { return std::pow(v, s); });
}

double level_measure(const StepFunction& f, double alpha, const Interval& window) {
  double m = 0.0;
  for (const auto& sg : f.segments(window)) {
    if (sg.value > alpha) m += sg.length();
  }
  return m;
}

double compare_measure(const StepFunction& f, const AnalyticBound& g,
                       const Interval& window) {
  const auto kind = g.kind();
  if ((kind == AnalyticBound::Kind::kHilbertUnit ||
       kind == AnalyticBound::Kind::kInverseHilbertUnit) &&
      !(window.a() >= 1.0)) {
    throw DomainError("compare_measure: Hilbert-type bounds are defined only for x > 1");
  }
  double m = 0.0;
  for (const auto& sg : f.segments(window)) m += solve_piece(sg.a, sg.b, sg.value, g);
  return m;
}

double power_integral(const StepFunction& f, double p, const Interval& window,
                      const StepFunction* weight) {
  double s = 0.0;
  for (const auto& sg : f.segments(window)) {
    const double mass = weight ? weight->integrate({sg.a, sg.b}) : sg.length();
    if (sg.value != 0.0) s += std::pow(std::abs(sg.value), p) * mass;
  }
  return s;
}

std::vector<double> common_mesh(std::span<const StepFunction* const> functions,
                                const Interval& window) {
  std::vector<double> mesh{window.a(), window.b()};
  for (const auto* f : functions) {
    for (const auto& sg : f->segments(window)) mesh.push_back(sg.a);
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  return mesh;
}

}  // namespace sharpweights
