// SPDX-License-Identifier: MIT
//
// Scalar operators evaluated exactly on step functions: maximal functions,
// the Hardy pair, the Hilbert transform, sparse operators, and weak norms.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sharpweights/dyadic.hpp"
#include "sharpweights/sparse.hpp"
#include "sharpweights/step_function.hpp"

namespace sharpweights {

// M(chi_[0,1])(x)
double maximal_chi_unit(double x);

// Uncentered maximal function of f >= 0 with bounded support. On each piece
// the average is monotone in either endpoint, so breakpoints together with x
// itself are the only candidate endpoints and the value is exact; `tol` is
// accepted for interface symmetry.
double uncentered_maximal(const StepFunction& f, double x, double tol = 0.0);

// Same values at many points; shares the breakpoint-pair maxima across points.
std::vector<double> uncentered_maximal_at(const StepFunction& f, std::span<const double> xs);

// Max of avg_R f over cubes R of the lattice with x in R within the window cube.
double dyadic_maximal(const StepFunction& f, const DyadicLattice& lattice, double x,
                      const DyadicCube& window);

// (1/x) int_0^x f
double hardy(const StepFunction& f, double x);
// int_x^inf f(t)/t dt
double dual_hardy(const StepFunction& f, double x);

// P.V. int f(t) / (x - t) dt; x must not be a breakpoint.
double hilbert_step(const StepFunction& f, double x);

// sum_Q (avg_Q phi) chi_Q
StepFunction sparse_apply(const SparseFamily& family, const StepFunction& phi);

// sum_Q lambda_Q(x) (avg_Q psi) chi_Q(x). Signed psi is allowed here.
StepFunction weighted_sparse_apply(const CubeFunctions& lambda, const SparseFamily& family,
                                   const StepFunction& psi);

struct WeakNormReport {
  double value = 0.0;
  double level = 0.0;  // piece value whose superlevel set attains the value
  std::size_t level_grid_size = 0;
};

// sup_alpha alpha mu{g > alpha}^{1/p} over the window, mu = Lebesgue or w dx.
WeakNormReport weak_lp_quasinorm(const StepFunction& g, double p, const Interval& window,
                                 const StepFunction* weight = nullptr);

// |{x in window : w^{1/p}(x) > x}|
double sharpness_functional_small_p(const StepFunction& w, double p, const Interval& window);

// |{x in window : w^{1/p}(x) H(chi_[0,1])(x) > 1}|, window within (1, inf).
double sharpness_functional_hilbert(const StepFunction& w, double p, const Interval& window);

struct QuadConfig {
  int order = 16;
  double tolerance = 1e-4;  // relative, on the p'-th power integral
};

struct DualHardyReport {
  double value = 0.0;  // ||H*(w^{1/p} chi_E)||_{L^{p'}(sigma)}
  double integral = 0.0;
  double error_estimate = 0.0;  // relative, from the half-cell comparison
  std::size_t cells = 0;
  bool flagged = false;
};

// E is a list of disjoint intervals inside (0, inf).
DualHardyReport dual_hardy_experiment(const StepFunction& w, double p,
                                      const std::vector<Interval>& sets,
                                      const QuadConfig& quad = {});

}  // namespace sharpweights
