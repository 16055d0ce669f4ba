// SPDX-License-Identifier: MIT
//
// Constructors for the extremal weight families.
//
// SMALL_P (1 < p < 2) and LARGE_P (p >= 2) are periodic step weights built
// from blocks J_k = [2^k, 2^{k+1}). Each block splits into a head I_k of
// prescribed length and two geometric halving families L_k^-, L_k^+ that
// shrink towards I_k and towards 2^{k+1}. The block levels are scaled by
// 2^{(k+1)(p-1)} so the head always carries the value 2^{(k+1)p}. The weight
// on [0, 2^{N+1}) is mirrored about 2^{N+1} and repeated with period 2^{N+2}.
//
// POWER is the even weight 1/eps on [-1, 1] and |x|^{-(1-eps)} beyond, with the
// tail discretised on a geometric mesh by exact piece averages.
#pragma once

#include <vector>

#include "sharpweights/step_function.hpp"

namespace sharpweights {

enum class WeightFamily { kSmallP, kLargeP, kPower };

struct WeightFamilyParams {
  WeightFamily family = WeightFamily::kSmallP;
  int N = 10;
  double p = 1.5;
  double eps = 0.25;
  double cutoff = 65536.0;

  void validate() const;
};

struct JkPartition {
  int k = 0;
  Interval head{0.0, 1.0};
  std::vector<Interval> left;   // (L_k^-)^j, j = 1..k at index j - 1
  std::vector<Interval> right;  // (L_k^+)^j

  // |L_k^j| = |(L_k^-)^j| + |(L_k^+)^j|
  [[nodiscard]] double level_length(int j) const;
  // Pieces of J_k in increasing order of position.
  [[nodiscard]] std::vector<Interval> tiles() const;
};

JkPartition partition_Jk(int k, double head_length);

// Smallest integer k >= 1 with k^{p-1} < 2^{k-1}.
int k0(double p);

struct ExtremalWeight {
  StepFunction weight;
  double p;
  int N;
  int first_k;                 // first block index (3 or k0(p) + 1)
  std::vector<Interval> heads;   // I_k, k = first_k..N
  std::vector<Interval> blocks;  // J_k
};

ExtremalWeight build_weight_small_p(int N, double p);
ExtremalWeight build_weight_large_p(int N, double p);

struct PowerWeight {
  StepFunction weight;
  double eps;
  double cutoff;
  double ratio;  // geometric mesh ratio of the tail
};

inline constexpr double kDefaultPowerMeshRatio = 1.0442737824274138;  // 2^{1/16}

PowerWeight build_power_weight(double eps, double cutoff = 65536.0,
                               double ratio = kDefaultPowerMeshRatio);

StepFunction build_weight(const WeightFamilyParams& params);

// floor(x) for values the constructions expect to be unambiguous; values
// within 1e-9 of an integer are snapped to it (exact cases such as log2 of a
// power of two), anything else is floored.
int guarded_floor(double x);

}  // namespace sharpweights
