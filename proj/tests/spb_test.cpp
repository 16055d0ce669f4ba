#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sharpweights/error.hpp"
#include "sharpweights/operators.hpp"
#include "sharpweights/spb.hpp"

using namespace sharpweights;

namespace {

const DyadicCube kTop{0, 0, {0}};

}  // namespace

TEST(Spb, ConstantScalarGivesSingleCube) {
  const auto w = MatrixWeight::constant(Interval(0.0, 1.0), 4, Matrix::Identity(1, 1));
  const VectorField f(w.piece_count(), Vector::Ones(1));
  SpbConfig cfg;
  cfg.samples = 0;
  const auto r = spb_construct(kTop, w, 2.0, f, cfg);
  ASSERT_EQ(r.family.size(), 1u);
  EXPECT_EQ(r.family.cubes()[0], kTop);
  for (int v : r.report.violations) EXPECT_EQ(v, 0);
}

TEST(Spb, LocalMaximalMatchesScalarDyadicMaximal) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const auto w = MatrixWeight::constant(Interval(0.0, 1.0), 5, Matrix::Identity(1, 1));
  VectorField f;
  std::vector<double> bp{0.0};
  std::vector<double> vals;
  for (std::size_t k = 0; k < w.piece_count(); ++k) {
    const double v = u(rng);
    f.push_back(Vector::Constant(1, v));
    vals.push_back(v);
    bp.push_back(w.piece_interval(k).b());
  }
  const StepFunction g(bp, vals);
  const auto lat = w.lattice();
  for (std::size_t k = 0; k < w.piece_count(); ++k) {
    const double x = w.piece_interval(k).midpoint();
    EXPECT_NEAR(local_cg_maximal(w, 2.0, f, kTop, k), dyadic_maximal(g, lat, x, kTop), 1e-13);
  }
}

TEST(Spb, ScalarDominationAtEveryPiece) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto w = random_matrix_weight(1, 6, rng);
    const auto f = random_vector_field(w, rng);
    SpbConfig cfg;
    cfg.samples = 0;
    cfg.exponents = {1.0, 2.0};
    const auto r = spb_construct(kTop, w, 3.0, f, cfg);
    EXPECT_EQ(r.report.samples, static_cast<int>(w.piece_count()));
    for (int v : r.report.violations) EXPECT_EQ(v, 0);
    EXPECT_LE(r.report.max_stopping_fraction, 0.5);
    EXPECT_GE(r.family.measured_eta(), 0.5);
  }
}

TEST(Spb, RandomTwoByTwoDepthEight) {
  std::mt19937_64 rng(7);
  const auto w = random_matrix_weight(2, 8, rng, 1.5);
  const auto f = random_vector_field(w, rng);
  SpbConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 11;
  const auto r = spb_construct(kTop, w, 3.0, f, cfg);
  EXPECT_EQ(r.report.samples, 1000);
  ASSERT_EQ(r.report.exponents.size(), r.report.violations.size());
  for (int v : r.report.violations) EXPECT_EQ(v, 0);
  for (const auto& c : r.family.cubes()) EXPECT_TRUE(r.operators.count(c));
}

TEST(Spb, RejectsBadInput) {
  const auto w = MatrixWeight::constant(Interval(0.0, 1.0), 3, Matrix::Identity(2, 2));
  const VectorField f(w.piece_count(), Vector::Ones(2));
  EXPECT_THROW(spb_construct(DyadicCube{0, 4, {0}}, w, 2.0, f), InvalidArgument);
  EXPECT_THROW(spb_construct(kTop, w, 2.0, VectorField(3, Vector::Ones(2))), InvalidArgument);
  EXPECT_THROW(spb_construct(kTop, w, 1.0, f), InvalidArgument);
}
