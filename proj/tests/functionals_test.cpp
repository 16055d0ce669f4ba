#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sharpweights/error.hpp"
#include "sharpweights/functionals.hpp"
#include "sharpweights/sparse.hpp"
#include "sharpweights/weights.hpp"

using namespace sharpweights;

namespace {

StepFunction random_weight(std::mt19937_64& rng, int pieces) {
  std::uniform_real_distribution<double> gap(0.1, 2.0);
  std::uniform_real_distribution<double> lv(-3.0, 3.0);
  std::vector<double> bp{0.0};
  std::vector<double> v;
  for (int i = 0; i < pieces; ++i) {
    bp.push_back(bp.back() + gap(rng));
    v.push_back(std::exp(lv(rng)));
  }
  return StepFunction(bp, v, 1.0);
}

// Plain loop over a fine grid of endpoints, independent of the prefix-sum
// search: symmetric intervals [-b, b] and one-sided [0, b], [a, b].
double grid_ap(const StepFunction& w, double p, const std::vector<double>& ends) {
  double best = 1.0;
  for (std::size_t j = 0; j < ends.size(); ++j) {
    const double b = ends[j];
    best = std::max(best, ap_functional(w, Exponent(p), Interval(-b, b)));
    best = std::max(best, ap_functional(w, Exponent(p), Interval(0.0, b)));
    for (std::size_t i = 0; i < j; i += 7) {
      best = std::max(best, ap_functional(w, Exponent(p), Interval(ends[i], b)));
    }
  }
  return best;
}

}  // namespace

TEST(ApFunctional, ConstantWeight) {
  const auto w = StepFunction::constant(3.7, Interval(-5.0, 5.0));
  for (double p : {1.2, 2.0, 4.0}) {
    EXPECT_NEAR(ap_functional(w, Exponent(p), Interval(-1.0, 2.0)), 1.0, 1e-14);
  }
}

TEST(ApFunctional, TwoPieceArithmetic) {
  const StepFunction w({0.0, 1.0, 2.0}, {4.0, 1.0});
  EXPECT_DOUBLE_EQ(ap_functional(w, Exponent(2.0), Interval(0.0, 2.0)), 25.0 / 16.0);
}

TEST(ApFunctional, ScaleInvariant) {
  const StepFunction w({0.0, 1.0, 2.0, 5.0}, {4.0, 1.0, 0.3});
  const Interval iv(0.2, 4.5);
  for (double p : {1.5, 3.0}) {
    const double base = ap_functional(w, Exponent(p), iv);
    for (int e = -6; e <= 6; ++e) {
      EXPECT_NEAR(ap_functional(w.scaled(std::pow(10.0, e)), Exponent(p), iv), base, 1e-12 * base);
    }
  }
}

TEST(ApFunctional, NonpositiveWeight) {
  const StepFunction w({0.0, 1.0, 2.0}, {0.0, 1.0});
  EXPECT_THROW(ap_functional(w, Exponent(2.0), Interval(0.0, 2.0)), DomainError);
}

TEST(ApConstant, ConstantWeightIsOne) {
  const auto w = StepFunction::constant(1.0, Interval(0.0, 10.0));
  EXPECT_NEAR(ap_constant(w, Exponent(2.0)).value, 1.0, 1e-14);
}

TEST(ApConstant, DominatesEveryInterval) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const auto w = random_weight(rng, 30);
    const Interval dom = w.support();
    for (double p : {1.5, 3.0}) {
      SearchConfig cfg;
      cfg.domain = dom;
      const auto rep = ap_constant(w, Exponent(p), cfg);
      EXPECT_GE(rep.value, rep.stage_one_value);
      EXPECT_GE(rep.refinement_residual, 0.0);
      for (int k = 0; k < 50; ++k) {
        double a = dom.a() + u(rng) * dom.length();
        double b = dom.a() + u(rng) * dom.length();
        if (a > b) std::swap(a, b);
        if (b - a < 1e-6) continue;
        EXPECT_GE(rep.value * (1 + 1e-12), ap_functional(w, Exponent(p), Interval(a, b)));
      }
    }
  }
}

TEST(ApConstant, ScaleInvariantWithSameArgmax) {
  std::mt19937_64 rng(8);
  const auto w = random_weight(rng, 25);
  SearchConfig cfg;
  cfg.domain = w.support();
  const auto a = ap_constant(w, Exponent(2.0), cfg);
  const auto b = ap_constant(w.map_values([](double v) { return 1e4 * v; }), Exponent(2.0), cfg);
  EXPECT_NEAR(a.value, b.value, 1e-10 * a.value);
  EXPECT_NEAR(a.argmax.a(), b.argmax.a(), 1e-9);
  EXPECT_NEAR(a.argmax.b(), b.argmax.b(), 1e-9);
}

TEST(ApConstant, PowerWeightBandAgainstGrid) {
  const double eps = 1.0 / 16;
  const auto pw = build_power_weight(eps);
  const auto rep = ap_constant(pw.weight, Exponent(2.0));
  EXPECT_GE(eps * rep.value, 0.2);
  EXPECT_LE(eps * rep.value, 5.0);
  // Endpoints ten to a piece on the positive half of the mesh.
  std::vector<double> ends;
  const auto bp = pw.weight.breakpoints();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (bp[i] < 0.0) continue;
    for (int s = 1; s <= 10; ++s) ends.push_back(bp[i] + s * (bp[i + 1] - bp[i]) / 10.0);
  }
  const double oracle = grid_ap(pw.weight, 2.0, ends);
  EXPECT_GE(rep.value, oracle * (1 - 1e-3));
}

TEST(ApConstant, SmallPWeightLinearInN) {
  std::vector<double> ratio;
  for (int N : {10, 14, 18}) {
    const auto ew = build_weight_small_p(N, 1.5);
    ratio.push_back(ap_constant(ew.weight, Exponent(1.5)).value / N);
  }
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  EXPECT_LE(*hi / *lo, 4.0);
}

TEST(ApDuality, ConstantAndSelfDual) {
  const auto one = StepFunction::constant(1.0, Interval(0.0, 3.0));
  const auto d1 = ap_duality_check(one, Exponent(1.7));
  EXPECT_NEAR(d1.sigma_ap, 1.0, 1e-14);
  EXPECT_NEAR(d1.w_ap_power, 1.0, 1e-14);
  const StepFunction w({0.0, 1.0, 2.0}, {4.0, 1.0});
  const auto d2 = ap_duality_check(w, Exponent(2.0));
  EXPECT_NEAR(d2.sigma_ap, d2.w_ap_power, 1e-14 * d2.sigma_ap);
}

TEST(ApDuality, RandomWeights) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 20; ++t) {
    const auto w = random_weight(rng, 50);
    for (double p : {1.5, 3.0}) {
      SearchConfig cfg;
      cfg.domain = w.support();
      const auto d = ap_duality_check(w, Exponent(p), cfg);
      EXPECT_LE(d.max_discrepancy, 1e-9);
      EXPECT_NEAR(d.sigma_ap, d.w_ap_power, 1e-9 * d.sigma_ap);
    }
  }
}

TEST(Ainf, ConstantWeight) {
  const auto w = StepFunction::constant(2.0, Interval(0.0, 1.0));
  EXPECT_NEAR(ainf_constant(w).value, 1.0, 1e-6);
}

TEST(Ainf, MonotoneTwoPieceAboveWholeInterval) {
  const StepFunction w({0.0, 1.0, 2.0}, {1.0, 2.0}, 1.0);
  AinfConfig cfg;
  cfg.domain = Interval(0.0, 2.0);
  const auto a = ainf_constant(w, cfg);
  // Q = [0, 2): M(w chi_Q) = (3 - x)/(2 - x) on [0, 1) and 2 on [1, 2), w(Q) = 3.
  const double whole = (3.0 + std::log(2.0)) / 3.0;
  EXPECT_GE(a.value, whole * (1 - 1e-3));
  EXPECT_LE(a.value, 2.0);
}

TEST(Ainf, PowerWeightStableUnderFinerQuadrature) {
  const auto pw = build_power_weight(0.125);
  AinfConfig coarse;
  AinfConfig fine;
  fine.gauss_order = 12;
  const auto a = ainf_constant(pw.weight, coarse);
  const auto b = ainf_constant(pw.weight, fine);
  EXPECT_NEAR(a.value, b.value, 1e-3 * b.value);
  EXPECT_GT(0.125 * a.value, 0.1);
  EXPECT_LT(0.125 * a.value, 10.0);
}

TEST(ReverseHolder, ConstantReachesTopOfGrid) {
  const auto w = StepFunction::constant(1.0, Interval(0.0, 1.0));
  const auto r = reverse_holder_probe(w, Exponent(2.0));
  EXPECT_TRUE(r.found);
  EXPECT_DOUBLE_EQ(r.r_max, 2.0);
}

TEST(ReverseHolder, PowerWeightExponentScalesWithEps) {
  std::vector<double> scaled;
  // Below eps = 1/16 the inner truncation of the discretized weight, not eps,
  // limits the exponent.
  for (int j = 2; j <= 4; ++j) {
    const double eps = std::ldexp(1.0, -j);
    const auto r = reverse_holder_probe(build_power_weight(eps).weight, Exponent(2.0));
    ASSERT_TRUE(r.found);
    scaled.push_back((r.r_max - 1.0) / eps);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  EXPECT_GT(*lo, 0.0);
  EXPECT_LE(*hi / *lo, 2.0);
}

TEST(Cov, SingletonAndZero) {
  const auto lat = DyadicLattice::standard(Interval(0.0, 1.0));
  const DyadicCube top{0, 0, {0}};
  const SparseFamily fam(lat, {top}, 0.5);
  const StepFunction w({0.0, 0.5, 1.0}, {2.0, 3.0}, 1.0);
  const auto one = cov_functional(fam, {{top, 1.0}}, w, 2.0);
  EXPECT_NEAR(one.lhs, std::sqrt(2.5), 1e-14);
  EXPECT_NEAR(one.rhs, std::sqrt(2.5), 1e-14);
  const auto zero = cov_functional(fam, {{top, 0.0}}, w, 2.0);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
  EXPECT_THROW(cov_functional(fam, {}, w, 2.0), InvalidArgument);
}
