// SPDX-License-Identifier: MIT
//
// Scalar weight functionals: A_p on an interval, the A_p constant by
// candidate search, the duality identity, A_infinity, reverse Holder probing,
// and the two sides of the Cascante-Ortega-Verbitsky equivalence.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sharpweights/sparse.hpp"
#include "sharpweights/step_function.hpp"

namespace sharpweights {

struct SearchConfig {
  // Defaults to half a period for periodic weights, the breakpoint range otherwise.
  std::optional<Interval> domain;
  int refinement_passes = 2;
  int refinement_steps = 24;  // golden-section steps per endpoint and pass
  double tolerance = 1e-3;
  int refine_top = 8;         // stage-one winners handed to refinement
  int jobs = 1;

  void validate() const;
};

struct ApReport {
  double value = 1.0;
  Interval argmax{0.0, 1.0};
  double stage_one_value = 1.0;      // best breakpoint-pair value
  double refinement_residual = 0.0;  // relative change in the last pass
  std::int64_t candidates_examined = 0;
};

// (avg_I w)(avg_I w^{-1/(p-1)})^{p-1}
double ap_functional(const StepFunction& w, const Exponent& p, const Interval& interval);

Interval default_search_domain(const StepFunction& w);

// Lower bound for [w]_{A_p}: all breakpoint pairs of the domain, then
// golden-section refinement of each endpoint of the best pairs.
ApReport ap_constant(const StepFunction& w, const Exponent& p, const SearchConfig& config = {});

struct DualityReport {
  double sigma_ap = 1.0;       // max over pairs of the A_{p'} functional of sigma
  double w_ap_power = 1.0;     // max over pairs of (A_p functional of w)^{1/(p-1)}
  double max_discrepancy = 0;  // max relative per-interval mismatch
  Interval worst{0.0, 1.0};
  std::int64_t candidates = 0;
};

// Both sides over the same breakpoint pairs; sigma's dual weight is rebuilt
// from sigma, so the identity is checked rather than assumed.
DualityReport ap_duality_check(const StepFunction& w, const Exponent& p,
                               const SearchConfig& config = {});

struct AinfConfig {
  int generations = 4;   // dyadic subintervals of the domain down to this generation
  int gauss_order = 4;   // nodes per piece; the residual compares with twice this order
  std::optional<Interval> domain;
};

struct AinfReport {
  double value = 1.0;
  Interval argmax{0.0, 1.0};
  double quadrature_residual = 0.0;  // max relative change between the two orders
  bool approximate = true;
  std::int64_t candidates = 0;
};

// sup_Q (1/w(Q)) int_Q M(w chi_Q) over dyadic subintervals of the domain and
// the A_p argmax of the weight itself.
AinfReport ainf_constant(const StepFunction& w, const AinfConfig& config = {});

struct ReverseHolderReport {
  double r_max = 1.0;
  double c_estimate = 0.0;  // 1 / ((r_max - 1) [w]_{A_p})
  double ap = 1.0;
  bool found = false;
  std::optional<Interval> witness;  // failing interval at the finest grid point
};

// Largest r = 1 + 2^{-j}, j = 0..20, with (avg w^r)^{1/r} <= 2 avg w on every
// breakpoint pair of the domain.
ReverseHolderReport reverse_holder_probe(const StepFunction& w, const Exponent& p,
                                         const SearchConfig& config = {});

struct CovReport {
  double lhs = 0.0;
  double rhs = 0.0;
};

// lhs = ||sum_Q lambda_Q chi_Q||_{L^p(w)},
// rhs = (sum_Q lambda_Q (sum_{Q' in S, Q' within Q} lambda_Q' w(Q') / w(Q))^{p-1} w(Q))^{1/p}.
CovReport cov_functional(const SparseFamily& family, const CubeCoefficients& lambda,
                         const StepFunction& w, double p);

}  // namespace sharpweights
