// SPDX-License-Identifier: MIT
//
// Sparse families of dyadic intervals and the stopping-time constructions
// built on them. Everything here works on one one-dimensional lattice at a
// time; cubes of one lattice are nested or disjoint, which turns every union
// below into a disjoint union of maximal members and keeps all measures exact.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "sharpweights/dyadic.hpp"
#include "sharpweights/step_function.hpp"

namespace sharpweights {

// Containment forest of a cube set: parent = smallest strict ancestor in the set.
struct CubeForest {
  std::vector<Interval> intervals;
  std::vector<int> parent;                 // -1 for maximal cubes
  std::vector<std::vector<int>> children;  // maximal strict descendants
  std::vector<int> depth;                  // 0 for maximal cubes
};

// Cubes must be distinct members of the (one-dimensional) lattice.
CubeForest build_forest(const DyadicLattice& lattice, std::span<const DyadicCube> cubes);

// min over Q of |E_Q| / |Q| with E_Q = Q minus the union of strict
// descendants in the set; 1 for an empty set.
double verify_sparseness(std::span<const DyadicCube> cubes, const DyadicLattice& lattice);

class SparseFamily {
 public:
  // Throws VerificationError when some |E_Q| < eta |Q|.
  SparseFamily(DyadicLattice lattice, std::vector<DyadicCube> cubes, double eta);

  [[nodiscard]] const DyadicLattice& lattice() const { return lattice_; }
  [[nodiscard]] std::span<const DyadicCube> cubes() const { return cubes_; }
  [[nodiscard]] std::size_t size() const { return cubes_.size(); }
  [[nodiscard]] bool empty() const { return cubes_.empty(); }
  [[nodiscard]] double eta() const { return eta_; }
  [[nodiscard]] double measured_eta() const { return measured_eta_; }
  [[nodiscard]] const CubeForest& forest() const { return forest_; }
  [[nodiscard]] const Interval& interval(std::size_t i) const { return forest_.intervals[i]; }
  // E_Q as disjoint intervals in increasing order.
  [[nodiscard]] const std::vector<Interval>& core(std::size_t i) const { return cores_[i]; }
  // Index of the cube, or -1.
  [[nodiscard]] int find(const DyadicCube& cube) const;

 private:
  DyadicLattice lattice_;
  std::vector<DyadicCube> cubes_;  // sorted by left end, then by size descending
  double eta_;
  double measured_eta_;
  CubeForest forest_;
  std::vector<std::vector<Interval>> cores_;
};

// sum_i coefficients[i] m_i(x) chi_{cubes[i]}(x) on the common mesh of the
// interval ends and the multipliers' breakpoints; multipliers may be empty
// (all ones) or hold null entries.
StepFunction cube_sum(std::span<const Interval> cubes, std::span<const double> coefficients,
                      std::span<const StepFunction* const> multipliers = {});

// m / (m + 1/eta - 1)
double split_sparseness_bound(double eta, int m);

// Partitions S into m families, each verified at split_sparseness_bound(S.eta(), m).
std::vector<SparseFamily> split_sparse(const SparseFamily& family, int m);

struct SelectedCube {
  DyadicCube cube;
  Interval interval;
  std::vector<Interval> kept;  // G_Q
  double mass = 0.0;           // integral of phi over Q
  double kept_mass = 0.0;      // integral of phi over G_Q
};

// F = {Q in S : gamma <= avg_Q phi <= 4 gamma} with G_Q = Q minus the strict
// sub-cubes of Q in F. Requires a measured sparseness of at least 7/8.
std::vector<SelectedCube> sppr_select(const SparseFamily& family, const StepFunction& phi,
                                      double gamma);

struct CZDecomposition {
  double gamma = 0.0;
  DyadicCube window;
  std::vector<DyadicCube> cubes;      // maximal cubes with average > gamma
  std::vector<Interval> intervals;    // their extents
  StepFunction good;
  StepFunction bad;
};

// Calderon-Zygmund decomposition of psi >= 0 restricted to the window cube.
// Throws InvalidArgument when gamma <= avg_window psi.
CZDecomposition cz_decompose(const StepFunction& psi, double gamma, const DyadicLattice& lattice,
                             const DyadicCube& window);

using CubeFunctions = std::map<DyadicCube, StepFunction>;
using CubeCoefficients = std::map<DyadicCube, double>;

struct VanishingReport {
  double max_abs = 0.0;  // max |T_{lambda,S} b| off the union of CZ cubes
  double scale = 0.0;    // max of sum_Q lambda_Q avg_Q |b| over the same region
  bool vanishes = true;  // max_abs <= 1e-12 scale
};

VanishingReport vanishing_check(const CubeFunctions& lambda, const SparseFamily& family,
                                const CZDecomposition& cz);

struct LevelFamily {
  int k = 0;
  std::vector<DyadicCube> cubes;    // base^{-k-1} < avg <= base^{-k}
  std::vector<DyadicCube> maximal;  // maximal members of `cubes`
};

struct LevelPartition {
  std::vector<LevelFamily> families;  // increasing k, only non-empty levels
  std::vector<DyadicCube> zero_average;
};

LevelPartition level_families(const SparseFamily& family, const StepFunction& phi,
                              double base = 4.0);

// measure[m] = |{x in R : #{Q' in cubes : Q' within R, x in Q'} > m}| for
// m = 0 .. max overlap - 1.
std::vector<double> overlap_distribution(std::span<const DyadicCube> cubes,
                                         const DyadicLattice& lattice, const DyadicCube& root);

struct RandomFamilyConfig {
  double eta = 0.875;
  int max_depth = 12;        // generations below the root
  std::size_t max_cubes = 64;
  double descend_probability = 0.8;
};

// Random family inside the root cube whose members keep cores of at least
// eta |Q| by construction.
SparseFamily random_sparse_family(const DyadicLattice& lattice, const DyadicCube& root,
                                  const RandomFamilyConfig& config, std::mt19937_64& rng);

// Random nonnegative step function on the dyadic mesh of the root at the given
// depth; about `zero_fraction` of the pieces vanish.
StepFunction random_mesh_function(const DyadicLattice& lattice, const DyadicCube& root, int depth,
                                  std::mt19937_64& rng, double zero_fraction = 0.0);

}  // namespace sharpweights
