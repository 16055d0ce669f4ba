// SPDX-License-Identifier: MIT
//
// Exact calculus of piecewise-constant functions on the real line.
//
// A StepFunction carries strictly increasing breakpoints x_0 < ... < x_B and
// B piece values, the value on [x_i, x_{i+1}) being values[i]. Outside
// [x_0, x_B) it is either a constant (outside_value) or, for periodic
// functions, the periodic extension with period x_B - x_0. Every integral,
// level-set measure and comparison below is computed piece by piece in
// closed form; nothing is sampled.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sharpweights/detail/compensated.hpp"

namespace sharpweights {

// Half-open interval [a, b) with a < b, both finite.
class Interval {
 public:
  Interval(double a, double b);

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] double length() const { return b_ - a_; }
  [[nodiscard]] double midpoint() const { return 0.5 * (a_ + b_); }
  [[nodiscard]] bool contains(double x) const { return a_ <= x && x < b_; }
  [[nodiscard]] bool contains(const Interval& other) const {
    return a_ <= other.a_ && other.b_ <= b_;
  }
  [[nodiscard]] double overlap(const Interval& other) const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

// Exponent 1 < p < infinity together with its conjugate p' = p / (p - 1).
class Exponent {
 public:
  explicit Exponent(double p);

  [[nodiscard]] double value() const { return p_; }
  [[nodiscard]] double conjugate() const { return p_ / (p_ - 1.0); }
  // Power taking w to its dual weight sigma = w^{-1/(p-1)}.
  [[nodiscard]] double dual_power() const { return -1.0 / (p_ - 1.0); }

 private:
  double p_;
};

struct Segment {
  double a;
  double b;
  double value;

  [[nodiscard]] double length() const { return b - a; }
};

class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values,
               double outside_value = 0.0);

  static StepFunction periodic(std::vector<double> breakpoints,
                               std::vector<double> values);
  static StepFunction indicator(const Interval& support, double height = 1.0);
  static StepFunction constant(double c, const Interval& support);

  [[nodiscard]] std::span<const double> breakpoints() const { return breakpoints_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double outside_value() const { return outside_; }
  [[nodiscard]] std::optional<double> period() const { return period_; }
  [[nodiscard]] bool is_periodic() const { return period_.has_value(); }
  [[nodiscard]] std::size_t piece_count() const { return values_.size(); }
  [[nodiscard]] Interval piece(std::size_t i) const;
  [[nodiscard]] Interval support() const;

  [[nodiscard]] double operator()(double x) const;

  // Signed integral of f from x_0 to x (negative for x < x_0).
  [[nodiscard]] double primitive(double x) const;
  [[nodiscard]] double integrate(const Interval& window) const;

  // Pieces covering the window exactly, in order, including outside and
  // periodic continuation.
  [[nodiscard]] std::vector<Segment> segments(const Interval& window) const;

  template <class Fn>
  [[nodiscard]] StepFunction map_values(Fn&& fn) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(values_[i]);
    if (period_) return periodic(breakpoints_, std::move(v));
    return StepFunction(breakpoints_, std::move(v), fn(outside_));
  }

  [[nodiscard]] StepFunction scaled(double factor) const;

  friend bool operator==(const StepFunction& lhs, const StepFunction& rhs) {
    return lhs.breakpoints_ == rhs.breakpoints_ && lhs.values_ == rhs.values_ &&
           lhs.outside_ == rhs.outside_ && lhs.period_ == rhs.period_;
  }

 private:
  [[nodiscard]] std::size_t locate(double x) const;  // piece index, x in support
  [[nodiscard]] double local_primitive(double x) const;  // x in support

  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double outside_ = 0.0;
  std::optional<double> period_;
  std::vector<detail::DoubleDouble> prefix_;
};

// Builds a non-periodic step function from contiguous segments.
StepFunction from_segments(std::span<const Segment> segments,
                           double outside_value = 0.0);

// Right-hand sides supported by compare_measure. The Hilbert forms refer to
// h(x) = H(chi_[0,1])(x) = ln(x / (x - 1)), defined for x > 1.
class AnalyticBound {
 public:
  enum class Kind { kConstant, kLinear, kReciprocal, kHilbertUnit, kInverseHilbertUnit };

  static AnalyticBound constant(double c) { return {Kind::kConstant, c}; }
  static AnalyticBound linear(double c = 1.0) { return {Kind::kLinear, c}; }        // c x
  static AnalyticBound reciprocal(double c = 1.0) { return {Kind::kReciprocal, c}; }  // c / x
  static AnalyticBound hilbert_unit(double c = 1.0) { return {Kind::kHilbertUnit, c}; }  // c h(x)
  static AnalyticBound inverse_hilbert_unit(double c = 1.0) {  // c / h(x)
    return {Kind::kInverseHilbertUnit, c};
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double coefficient() const { return c_; }
  [[nodiscard]] double operator()(double x) const;

 private:
  AnalyticBound(Kind kind, double c) : kind_(kind), c_(c) {}
  Kind kind_;
  double c_;
};

double integrate(const StepFunction& f, const Interval& window);
StepFunction pointwise_power(const StepFunction& f, double s);
// |{x in window : f(x) > alpha}|
double level_measure(const StepFunction& f, double alpha, const Interval& window);
// |{x in window : f(x) > g(x)}|
double compare_measure(const StepFunction& f, const AnalyticBound& g,
                       const Interval& window);

// Exact integral of f^p * weight over the window (weight defaults to 1).
double power_integral(const StepFunction& f, double p, const Interval& window,
                      const StepFunction* weight = nullptr);

// Sorted union of all breakpoints of the given functions inside the window,
// together with the window ends.
std::vector<double> common_mesh(std::span<const StepFunction* const> functions,
                                const Interval& window);

}  // namespace sharpweights
