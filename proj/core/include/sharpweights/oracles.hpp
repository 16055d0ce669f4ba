// SPDX-License-Identifier: MIT
//
// Slow second implementations used to cross-check the fast operators. They
// share no code with operators.cpp or matrix_weight.cpp beyond the basic
// types: averages are plain loops over pieces and matrix powers go through
// Eigen's general matrix-function module.
#pragma once

#include "sharpweights/dyadic.hpp"
#include "sharpweights/matrix_weight.hpp"
#include "sharpweights/operators.hpp"
#include "sharpweights/step_function.hpp"

namespace sharpweights::oracle {

// Every generation below the window down to `extra` further generations.
double dyadic_maximal(const StepFunction& f, const DyadicLattice& lattice, double x,
                      const DyadicCube& window, int extra = 40);

// Levels at every piece value plus a uniform grid of `grid` levels.
double weak_lp_quasinorm(const StepFunction& g, double p, const Interval& window,
                         const StepFunction* weight = nullptr, int grid = 10000);

double cg_maximal(const MatrixWeight& w, double p, const VectorField& f, double x, CgMode mode);

}  // namespace sharpweights::oracle
