#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sharpweights/error.hpp"
#include "sharpweights/step_function.hpp"

using namespace sharpweights;

namespace {

StepFunction random_step(std::mt19937_64& rng, int pieces, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  std::uniform_real_distribution<double> val(lo, hi);
  std::vector<double> bp{gap(rng) - 2.0};
  std::vector<double> v;
  for (int i = 0; i < pieces; ++i) {
    bp.push_back(bp.back() + gap(rng));
    v.push_back(val(rng));
  }
  return StepFunction(bp, v);
}

}  // namespace

TEST(Interval, RejectsDegenerate) {
  EXPECT_THROW(Interval(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(Interval(2.0, 1.0), InvalidArgument);
  EXPECT_THROW(Interval(0.0, INFINITY), InvalidArgument);
}

TEST(Exponent, ConjugateIdentity) {
  for (double p : {1.1, 1.5, 2.0, 3.0, 7.5}) {
    const Exponent e(p);
    EXPECT_NEAR(e.value() * e.conjugate(), e.value() + e.conjugate(), 1e-12);
  }
  EXPECT_THROW(Exponent(1.0), InvalidArgument);
}

TEST(StepFunction, RejectsBadMesh) {
  EXPECT_THROW(StepFunction({0.0, 0.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(StepFunction({0.0, 1.0}, {1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(StepFunction({0.0}, {}), InvalidArgument);
}

TEST(Integrate, IndicatorOnSubinterval) {
  const auto f = StepFunction::indicator(Interval(0.0, 3.0));
  EXPECT_DOUBLE_EQ(integrate(f, Interval(1.0, 2.0)), 1.0);
}

TEST(Integrate, PeriodicTiling) {
  const auto f = StepFunction::periodic({0.0, 1.0}, {1.0});
  EXPECT_DOUBLE_EQ(integrate(f, Interval(0.0, 5.0)), 5.0);
  EXPECT_NEAR(integrate(f, Interval(-2.25, 3.5)), 5.75, 1e-14);
}

TEST(Integrate, TwoPieces) {
  const StepFunction f({0.0, 1.0, 2.0}, {2.0, 3.0});
  EXPECT_DOUBLE_EQ(integrate(f, Interval(0.5, 1.5)), 2.5);
}

TEST(Integrate, OutsideValueCounts) {
  const StepFunction f({0.0, 1.0}, {2.0}, 0.5);
  EXPECT_DOUBLE_EQ(integrate(f, Interval(-1.0, 2.0)), 3.0);
}

TEST(Integrate, AdditiveAndLinear) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.5, 30.0);
  for (int t = 0; t < 50; ++t) {
    const auto f = random_step(rng, 40);
    double a = u(rng), b = u(rng), c = u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6 || c - b < 1e-6) continue;
    const double whole = integrate(f, Interval(a, c));
    EXPECT_NEAR(whole, integrate(f, Interval(a, b)) + integrate(f, Interval(b, c)),
                1e-12 * std::max(1.0, std::abs(whole)));
    EXPECT_NEAR(integrate(f.scaled(3.0), Interval(a, c)), 3.0 * whole,
                1e-12 * std::max(1.0, std::abs(whole)));
  }
}

TEST(Integrate, ManyPiecesAgainstClosedForm) {
  // f = i on [i, i + 1), i = 0..9999: the integral over [0, B) is B (B - 1) / 2.
  const int B = 10000;
  std::vector<double> bp(B + 1);
  std::vector<double> v(B);
  for (int i = 0; i <= B; ++i) bp[i] = i;
  for (int i = 0; i < B; ++i) v[i] = i;
  const StepFunction f(bp, v);
  for (int m : {1, 17, 999, 5000, 10000}) {
    const double exact = 0.5 * m * (m - 1.0);
    EXPECT_NEAR(integrate(f, Interval(0.0, m)), exact, 1e-12 * std::max(1.0, exact));
  }
}

TEST(PointwisePower, ConstantSquareRoot) {
  const auto f = StepFunction::constant(4.0, Interval(0.0, 1.0));
  const auto g = pointwise_power(f, 0.5);
  EXPECT_DOUBLE_EQ(g(0.5), 2.0);
}

TEST(PointwisePower, DualPowerAtTwo) {
  const auto f = StepFunction::constant(5.0, Interval(0.0, 1.0));
  EXPECT_DOUBLE_EQ(pointwise_power(f, Exponent(2.0).dual_power())(0.25), 0.2);
}

TEST(PointwisePower, InverseRoundTrip) {
  std::mt19937_64 rng(11);
  for (double s : {0.3, 2.0, -1.5}) {
    const auto g = random_step(rng, 25);
    const StepFunction f({g.breakpoints().begin(), g.breakpoints().end()},
                         {g.values().begin(), g.values().end()}, 1.0);
    const auto back = pointwise_power(pointwise_power(f, s), 1.0 / s);
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
      EXPECT_NEAR(back.values()[i], f.values()[i], 1e-12 * f.values()[i]);
    }
  }
}

TEST(PointwisePower, IdentityExponent) {
  std::mt19937_64 rng(3);
  const auto f = random_step(rng, 10);
  EXPECT_EQ(pointwise_power(f, 1.0), f);
}

TEST(PointwisePower, ZeroWithNegativeExponentIsDomainError) {
  const StepFunction f({0.0, 1.0, 2.0}, {0.0, 1.0}, 1.0);
  EXPECT_THROW(pointwise_power(f, -1.0), DomainError);
  EXPECT_THROW(pointwise_power(StepFunction({0.0, 1.0}, {-1.0}), 0.5), DomainError);
}

TEST(PointwisePower, MonotoneForPositiveExponent) {
  std::mt19937_64 rng(5);
  const auto f = random_step(rng, 20);
  const auto g = f.map_values([](double v) { return v + 0.5; });
  for (double s : {0.2, 1.7}) {
    const auto fs = pointwise_power(f, s);
    const auto gs = pointwise_power(g, s);
    for (std::size_t i = 0; i < f.piece_count(); ++i) EXPECT_LE(fs.values()[i], gs.values()[i]);
  }
}

TEST(LevelMeasure, Examples) {
  const auto f = StepFunction::indicator(Interval(0.0, 3.0), 2.0);
  EXPECT_DOUBLE_EQ(level_measure(f, 1.0, Interval(0.0, 3.0)), 3.0);
  EXPECT_DOUBLE_EQ(level_measure(f, 2.0, Interval(0.0, 3.0)), 0.0);
  const StepFunction g({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0});
  EXPECT_DOUBLE_EQ(level_measure(g, 2.0, Interval(-1.0, 4.0)), 2.0);
}

TEST(LevelMeasure, RightContinuousStepsAtValues) {
  std::mt19937_64 rng(19);
  const auto f = random_step(rng, 30);
  const Interval win = f.support();
  double prev = level_measure(f, 0.0, win);
  for (double a = 0.0; a < 11.0; a += 0.01) {
    const double m = level_measure(f, a, win);
    EXPECT_LE(m, prev + 1e-12);
    prev = m;
  }
  for (double v : f.values()) {
    EXPECT_DOUBLE_EQ(level_measure(f, v, win), level_measure(f, v + 1e-9, win));
    EXPECT_GT(level_measure(f, v - 1e-9, win), level_measure(f, v, win));
  }
}

TEST(CompareMeasure, ConstantAgainstIdentity) {
  const auto f = StepFunction::constant(2.0, Interval(0.0, 4.0));
  EXPECT_DOUBLE_EQ(compare_measure(f, AnalyticBound::linear(), Interval(0.0, 4.0)), 2.0);
}

TEST(CompareMeasure, ZeroFunction) {
  const auto f = StepFunction::constant(0.0, Interval(1.0, 4.0));
  EXPECT_DOUBLE_EQ(compare_measure(f, AnalyticBound::reciprocal(), Interval(1.0, 4.0)), 0.0);
  EXPECT_DOUBLE_EQ(compare_measure(f, AnalyticBound::linear(), Interval(1.0, 4.0)), 0.0);
}

TEST(CompareMeasure, ReciprocalAndHilbertForms) {
  // 1 > 1/x on (1, 4) entirely; 1 > c/x iff x > c.
  const auto f = StepFunction::constant(1.0, Interval(1.0, 4.0));
  EXPECT_DOUBLE_EQ(compare_measure(f, AnalyticBound::reciprocal(2.0), Interval(1.0, 4.0)), 2.0);
  // h(x) = ln(x / (x - 1)) is decreasing; 1 > h(x) iff x > e / (e - 1).
  const double cut = std::exp(1.0) / (std::exp(1.0) - 1.0);
  EXPECT_NEAR(compare_measure(f, AnalyticBound::hilbert_unit(), Interval(1.0, 4.0)), 4.0 - cut,
              1e-12);
}

TEST(CompareMeasure, MatchesFineSampling) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const auto f = random_step(rng, 12, 0.5, 4.0);
    const Interval win(std::max(0.05, f.support().a()), f.support().b());
    const double exact = compare_measure(f, AnalyticBound::linear(), win);
    const int n = 400000;
    const double h = win.length() / n;
    double approx = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = win.a() + (i + 0.5) * h;
      if (f(x) > x) approx += h;
    }
    EXPECT_NEAR(exact, approx, 1e-4);
  }
}

TEST(StepFunction, SegmentsCoverWindow) {
  const auto f = StepFunction::periodic({0.0, 0.5, 2.0}, {1.0, 3.0});
  const auto segs = f.segments(Interval(-1.0, 4.25));
  ASSERT_FALSE(segs.empty());
  EXPECT_DOUBLE_EQ(segs.front().a, -1.0);
  EXPECT_DOUBLE_EQ(segs.back().b, 4.25);
  for (std::size_t i = 1; i < segs.size(); ++i) EXPECT_DOUBLE_EQ(segs[i].a, segs[i - 1].b);
}
