// SPDX-License-Identifier: MIT
//
// Stopping-time sparse family for the local dyadic Christ-Goldberg maximal
// operator, with a pointwise check of the resulting sparse bound.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sharpweights/matrix_weight.hpp"
#include "sharpweights/sparse.hpp"

namespace sharpweights {

struct SpbConfig {
  int samples = 1000;  // 0: every mesh piece of Q
  std::uint64_t seed = 0;
  int directions = 64;
  std::vector<double> exponents{1.0};  // r values; p is appended by spb_construct
  int jobs = 1;
};

struct DominationReport {
  std::vector<double> exponents;
  std::vector<double> max_ratio;  // max over samples of lhs^r / rhs
  std::vector<int> violations;    // samples with lhs^r > rhs (1 + 1e-12)
  int samples = 0;
  double max_stopping_fraction = 0.0;  // max |Omega_R| / |R| over the family
};

struct SpbResult {
  SparseFamily family;
  std::map<DyadicCube, ReducingOperator> operators;
  DominationReport report;
};

// Local maximal M^d_{Q,W,p} f on piece k by enumerating every cube of D(Q)
// that contains it.
double local_cg_maximal(const MatrixWeight& w, double p, const VectorField& f,
                        const DyadicCube& q, std::size_t k);

// q must be a cube of w.lattice() inside the base, of generation <= depth.
SpbResult spb_construct(const DyadicCube& q, const MatrixWeight& w, double p,
                        const VectorField& f, const SpbConfig& config = {});

}  // namespace sharpweights
