#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sharpweights/error.hpp"
#include "sharpweights/functionals.hpp"
#include "sharpweights/matrix_weight.hpp"
#include "sharpweights/oracles.hpp"

using namespace sharpweights;

namespace {

Matrix spd2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return m;
}

Matrix random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = g(rng);
  return r * r.transpose() + 0.1 * Matrix::Identity(n, n);
}

}  // namespace

TEST(MatrixPower, Examples) {
  const Matrix d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const Matrix h = matrix_power(d, 0.5);
  EXPECT_NEAR(h(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(h(1, 1), 3.0, 1e-14);
  EXPECT_NEAR(h(0, 1), 0.0, 1e-14);
  const Matrix a = spd2(2.0, 1.0, 2.0);
  EXPECT_LE((matrix_power(a, 1.0) - a).norm(), 1e-13);
  EXPECT_LE((matrix_power(a, -1.0) * a - Matrix::Identity(2, 2)).norm(), 1e-13);
  EXPECT_THROW(matrix_power(spd2(1.0, 2.0, 1.0), 0.5), DomainError);
  Matrix nonsym(2, 2);
  nonsym << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(matrix_power(nonsym, 0.5), DomainError);
}

TEST(MatrixPower, NormOfProductIsSymmetric) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = matrix_power(random_spd(3, rng), 0.7);
    const Matrix b = matrix_power(random_spd(3, rng), -0.4);
    const double ab = operator_norm(a * b);
    EXPECT_NEAR(ab, operator_norm(b * a), 1e-10 * ab);
  }
}

TEST(MatrixWeight, ConstructionRules) {
  EXPECT_THROW(MatrixWeight(Interval(0.0, 1.0), 1, {Matrix::Identity(2, 2)}), InvalidArgument);
  EXPECT_THROW(MatrixWeight::constant(Interval(0.0, 1.0), 13, Matrix::Identity(2, 2)),
               InvalidArgument);
  const Matrix bad = Eigen::Vector2d(1.0, 1e-11).asDiagonal();
  EXPECT_THROW(MatrixWeight::constant(Interval(0.0, 1.0), 2, bad), DomainError);
  const auto w = MatrixWeight::constant(Interval(0.0, 1.0), 3, Matrix::Identity(2, 2));
  EXPECT_EQ(w.piece_count(), 8u);
  EXPECT_EQ(w.piece_index(0.3), 2u);
  EXPECT_EQ(w.piece_interval(2), Interval(0.25, 0.375));
}

TEST(RhoEval, ConstantWeights) {
  const auto id = MatrixWeight::constant(Interval(0.0, 1.0), 2, Matrix::Identity(2, 2));
  const Vector u = Eigen::Vector2d(3.0, 4.0);
  EXPECT_NEAR(rho_eval(Interval(0.0, 0.5), 3.0, id, u), 5.0, 1e-13);
  const auto d = MatrixWeight::constant(Interval(0.0, 1.0), 2, Eigen::Vector2d(4.0, 1.0).asDiagonal());
  EXPECT_NEAR(rho_eval(Interval(0.0, 1.0), 2.0, d, Eigen::Vector2d(1.0, 0.0)), 0.5, 1e-14);
  EXPECT_NEAR(rho_eval(Interval(0.0, 1.0), 2.0, d, Eigen::Vector2d(0.0, 1.0)), 1.0, 1e-14);
}

TEST(RhoEval, TwoPieceAverage) {
  std::vector<Matrix> pieces{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 16.0)};
  const MatrixWeight w(Interval(0.0, 1.0), 1, pieces);
  // p = 2: (avg w^{-1})^{1/2} = ((1 + 1/16)/2)^{1/2}
  EXPECT_NEAR(rho_eval(Interval(0.0, 1.0), 2.0, w, Vector::Ones(1)), std::sqrt(17.0 / 32.0), 1e-14);
}

TEST(ReducingOperator, IdentityAndExactP2) {
  const auto id = MatrixWeight::constant(Interval(0.0, 1.0), 2, Matrix::Identity(2, 2));
  const auto r = reducing_operator(Interval(0.0, 1.0), 3.0, id);
  EXPECT_LE((r.a - Matrix::Identity(2, 2)).norm(), 1e-6);

  std::mt19937_64 rng(7);
  const auto w = random_matrix_weight(3, 4, rng);
  const auto e = reducing_operator(Interval(0.25, 0.5), 2.0, w);
  EXPECT_TRUE(e.exact);
  EXPECT_NEAR(e.c_low, 1.0, 1e-12);
  EXPECT_NEAR(e.c_high, 1.0, 1e-12);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    Vector u(3);
    for (int i = 0; i < 3; ++i) u(i) = g(rng);
    EXPECT_NEAR((e.a * u).norm(), rho_eval(Interval(0.25, 0.5), 2.0, w, u),
                1e-12 * u.norm() * 10);
  }
}

TEST(ReducingOperator, JohnRatioForP3) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto w = random_matrix_weight(2, 5, rng);
    const auto r = reducing_operator(Interval(0.0, 0.5), 3.0, w, 64, t);
    EXPECT_FALSE(r.exact);
    EXPECT_LE(r.c_high, 1.0 + 1e-3);
    EXPECT_LE(r.c_high / r.c_low, std::sqrt(2.0) * 1.05);
  }
}

TEST(ReducingOperator, RejectsCubesOutsideBase) {
  const auto id = MatrixWeight::constant(Interval(0.0, 1.0), 2, Matrix::Identity(2, 2));
  EXPECT_THROW(reducing_operator(Interval(0.5, 1.5), 3.0, id), InvalidArgument);
  EXPECT_THROW(reducing_operator(Interval(0.0, 1.0), 1.0, id), InvalidArgument);
}

TEST(MatrixAp, ConstantWeightIsOne) {
  const auto w = MatrixWeight::constant(Interval(0.0, 1.0), 3, spd2(3.0, 1.0, 2.0));
  const auto cands = mesh_candidates(w);
  EXPECT_NEAR(matrix_ap(w, 2.0, cands), 1.0, 1e-12);
  EXPECT_NEAR(matrix_ap(w, 3.5, cands), 1.0, 1e-12);
  EXPECT_NEAR(matrix_a1(w, cands), 1.0, 1e-12);
}

TEST(MatrixAp, ScalarReduction) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto w = random_matrix_weight(1, 5, rng);
    std::vector<double> bp;
    std::vector<double> v;
    for (std::size_t k = 0; k < w.piece_count(); ++k) {
      bp.push_back(w.piece_interval(k).a());
      v.push_back(w.piece(k)(0, 0));
    }
    bp.push_back(1.0);
    const StepFunction s(bp, v, 1.0);
    const auto cands = mesh_candidates(w);
    for (double p : {1.5, 2.0, 3.0}) {
      double best = 0.0;
      for (const auto& iv : cands) best = std::max(best, ap_functional(s, Exponent(p), iv));
      EXPECT_NEAR(matrix_ap(w, p, cands), best, 1e-10 * best);
    }
  }
}

TEST(MatrixAp, DiagonalDominatesScalarEntries) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lv(-2.0, 2.0);
  std::vector<Matrix> pieces;
  for (int k = 0; k < 16; ++k) pieces.push_back(Eigen::Vector2d(std::exp(lv(rng)), std::exp(lv(rng))).asDiagonal());
  const MatrixWeight w(Interval(0.0, 1.0), 4, pieces);
  const auto cands = mesh_candidates(w);
  for (double p : {1.5, 3.0}) {
    const double m = matrix_ap(w, p, cands);
    for (int j = 0; j < 2; ++j) {
      const auto c = scap_check(w, p, Vector::Unit(2, j), cands);
      EXPECT_TRUE(c.holds);
      EXPECT_LE(c.scalar_ap, m * (1 + 1e-9));
    }
  }
}

TEST(MatrixAp, ScapHoldsForRandomDirections) {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g;
  for (int t = 0; t < 5; ++t) {
    const auto w = random_matrix_weight(3, 4, rng);
    const auto cands = mesh_candidates(w);
    Vector u(3);
    for (int i = 0; i < 3; ++i) u(i) = g(rng);
    EXPECT_TRUE(scap_check(w, 2.5, u, cands).holds);
  }
}

TEST(CgMaximal, MatchesOracle) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  for (int t = 0; t < 6; ++t) {
    const auto w = random_matrix_weight(2, 4, rng);
    const auto f = random_vector_field(w, rng);
    for (auto mode : {CgMode::kDyadicLocal, CgMode::kAllMeshIntervals}) {
      for (int k = 0; k < 10; ++k) {
        const double x = ux(rng);
        const double fast = cg_maximal(w, 3.0, f, x, mode);
        EXPECT_NEAR(fast, oracle::cg_maximal(w, 3.0, f, x, mode), 1e-9 * std::max(1.0, fast));
      }
    }
  }
}

TEST(CgMaximal, IdentityWeightIsScalarMaximal) {
  const auto w = MatrixWeight::constant(Interval(0.0, 1.0), 2, Matrix::Identity(2, 2));
  VectorField f(4, Vector::Zero(2));
  f[0] = Eigen::Vector2d(3.0, 4.0);  // |f| = 5 on [0, 1/4)
  const auto m = cg_maximal_pieces(w, 2.0, f);
  ASSERT_EQ(m.size(), 4u);
  EXPECT_NEAR(m[0], 5.0, 1e-13);
  EXPECT_NEAR(m[1], 2.5, 1e-13);
  EXPECT_NEAR(m[2], 1.25, 1e-13);
  EXPECT_NEAR(m[3], 1.25, 1e-13);
}

TEST(Pr1Pr2, BoundsOnRandomWeights) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 5; ++t) {
    const auto w = random_matrix_weight(2, 4, rng);
    const auto f = random_vector_field(w, rng);
    const Interval cube(0.0, 0.5);
    const auto v = reducing_operator(cube, 3.0, w, 64, t);
    const auto c1 = prop_pr1_check(cube, 3.0, w, f, v);
    EXPECT_LE(c1.ratio, c1.bound);
    const double ap = matrix_ap(w, 3.0, mesh_candidates(w));
    const auto c2 = prop_pr2_check(cube, 3.0, w, 1.0, v, ap);
    EXPECT_GT(c2.lhs, 0.0);
    const double s = prop_pr2_probe(cube, 3.0, w, v);
    EXPECT_GE(s, 1.0);
    EXPECT_LE(s, 2.0);
  }
}

TEST(CgStrong, EstimateAtLeastOne) {
  std::mt19937_64 rng(31);
  const auto w = random_matrix_weight(2, 4, rng);
  const auto probes = coordinate_probes(w);
  ASSERT_FALSE(probes.empty());
  EXPECT_GE(cg_strong_norm_estimate(w, 2.0, probes), 1.0 - 1e-12);
}
