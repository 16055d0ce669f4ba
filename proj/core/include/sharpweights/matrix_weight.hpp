// SPDX-License-Identifier: MIT
//
// Matrix weights: piecewise-constant SPD fields on the dyadic mesh of a base
// interval, reducing operators, the Roudenko A_p constant, the A_1 condition,
// the Christ-Goldberg maximal operator and the numerical checks built on them.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sharpweights/dyadic.hpp"
#include "sharpweights/step_function.hpp"

namespace sharpweights {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxMatrixDimension = 4;
inline constexpr int kMaxMeshDepth = 12;
inline constexpr double kMaxConditionNumber = 1e10;

// A^s by spectral decomposition; throws DomainError unless A is SPD.
Matrix matrix_power(const Matrix& a, double s);

// Largest singular value.
double operator_norm(const Matrix& a);

class MatrixWeight {
 public:
  MatrixWeight(Interval base, int depth, std::vector<Matrix> pieces);

  static MatrixWeight constant(Interval base, int depth, const Matrix& value);
  // n = 1 weight from a step function sampled at piece midpoints of the mesh.
  static MatrixWeight from_scalar(const StepFunction& w, Interval base, int depth);

  [[nodiscard]] const Interval& base() const { return base_; }
  [[nodiscard]] int depth() const { return depth_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::size_t piece_count() const { return pieces_.size(); }
  [[nodiscard]] const Matrix& piece(std::size_t i) const { return pieces_[i]; }
  [[nodiscard]] std::span<const Matrix> pieces() const { return pieces_; }
  [[nodiscard]] Interval piece_interval(std::size_t i) const;
  [[nodiscard]] std::span<const double> condition_numbers() const { return condition_; }
  [[nodiscard]] std::size_t piece_index(double x) const;

  // Piece powers W^s, one per piece.
  [[nodiscard]] std::vector<Matrix> powers(double s) const;

  // Standard lattice whose generation-0 cube is the base.
  [[nodiscard]] DyadicLattice lattice() const;

  // (piece, |piece within I| / |I|) for every piece meeting I.
  [[nodiscard]] std::vector<std::pair<std::size_t, double>> weights_on(const Interval& iv) const;

 private:
  Interval base_;
  int depth_;
  int n_;
  std::vector<Matrix> pieces_;
  std::vector<double> condition_;
};

// One vector per mesh piece.
using VectorField = std::vector<Vector>;

// Lattice cubes of generations 0..depth contained in the base, over the
// three shifted lattices (or the standard one only).
std::vector<Interval> mesh_candidates(const MatrixWeight& w, bool shifted = true);

// rho(u) = (avg_I |W^{-1/p}(y) u|^{p'})^{1/p'}
double rho_eval(const Interval& cube, double p, const MatrixWeight& w, const Vector& u);

struct ReducingOperator {
  Matrix a;
  Interval cube{0.0, 1.0};
  double p = 2.0;
  double c_low = 1.0;   // min |A u| / rho(u) on fresh directions
  double c_high = 1.0;  // max |A u| / rho(u)
  int directions = 0;
  bool exact = false;
};

// p = 2 (or n = 1): closed form. Otherwise the minimum-volume ellipsoid of
// sampled rho-sphere points, with two-sided constants from 4K fresh directions.
ReducingOperator reducing_operator(const Interval& cube, double p, const MatrixWeight& w,
                                   int directions = 64, std::uint64_t seed = 0);

// sup over candidates of avg_x (avg_y ||W^{1/p}(x) W^{-1/p}(y)||^{p'})^{p/p'}
double matrix_ap(const MatrixWeight& w, double p, std::span<const Interval> candidates);
// Same, with the maximising candidate.
std::pair<double, Interval> matrix_ap_argmax(const MatrixWeight& w, double p,
                                             std::span<const Interval> candidates);

// sup over candidates of esssup_y avg_x ||W(x) W(y)^{-1}||
double matrix_a1(const MatrixWeight& w, std::span<const Interval> candidates);

enum class CgMode { kDyadicLocal, kAllMeshIntervals };

// sup over candidate intervals I containing x of avg_I |W^{1/p}(x) W^{-1/p}(y) f(y)|.
double cg_maximal(const MatrixWeight& w, double p, const VectorField& f, double x,
                  CgMode mode = CgMode::kDyadicLocal);

// Value of M_{W,p} f on every mesh piece (it is constant on pieces).
std::vector<double> cg_maximal_pieces(const MatrixWeight& w, double p, const VectorField& f,
                                      CgMode mode = CgMode::kDyadicLocal);

struct Pr1Check {
  double ratio = 0.0;  // avg |V^{-1} W^{-1/p} f| / (avg |f|^p)^{1/p}
  double bound = 0.0;  // n / c_low
};

Pr1Check prop_pr1_check(const Interval& cube, double p, const MatrixWeight& w,
                        const VectorField& f, const ReducingOperator& v);

struct Pr2Check {
  double lhs = 0.0;    // (avg ||W^{1/p} V||^{sp})^{1/s}
  double ap = 0.0;     // [W]_{A_p} over the supplied candidates
  double ratio = 0.0;  // lhs / ap
  double s = 1.0;
};

Pr2Check prop_pr2_check(const Interval& cube, double p, const MatrixWeight& w, double s,
                        const ReducingOperator& v, double ap);

// Largest s = 1 + 2^{-j}, j = 0..20, with
// (avg ||W^{1/p} V||^{sp})^{1/s} <= 2 avg ||W^{1/p} V||^p; returns 1 if none.
double prop_pr2_probe(const Interval& cube, double p, const MatrixWeight& w,
                      const ReducingOperator& v);

// The scalar weight x -> |W^{1/p}(x) u|^p on the mesh.
StepFunction direction_weight(const MatrixWeight& w, double p, const Vector& u);

struct ScapCheck {
  double scalar_ap = 1.0;
  double matrix_ap = 1.0;
  bool holds = true;  // scalar_ap <= matrix_ap (1 + 1e-9)
};

ScapCheck scap_check(const MatrixWeight& w, double p, const Vector& u,
                     std::span<const Interval> candidates);

// max over probes of ||M_{W,p} f||_{L^p} / ||f||_{L^p}, exact on the mesh.
double cg_strong_norm_estimate(const MatrixWeight& w, double p, std::span<const VectorField> probes,
                               CgMode mode = CgMode::kDyadicLocal);

// Indicators of e_j on dyadic blocks of several sizes.
std::vector<VectorField> coordinate_probes(const MatrixWeight& w);

// Random SPD pieces R diag(exp(l)) R^T with log-eigenvalues in [-spread, spread].
MatrixWeight random_matrix_weight(int n, int depth, std::mt19937_64& rng, double spread = 2.0,
                                  Interval base = Interval(0.0, 1.0));

VectorField random_vector_field(const MatrixWeight& w, std::mt19937_64& rng);

}  // namespace sharpweights
