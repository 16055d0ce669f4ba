// SPDX-License-Identifier: MIT
//
// Seeded randomized property suites. Each returns an ExperimentReport whose
// checks summarize the suite and whose `extra["counterexamples"]` holds the
// serialized inputs of the first failing instances.
#pragma once

#include <cstdint>
#include <vector>

#include "sharpweights/experiments.hpp"

namespace sharpweights {

struct SuiteSizes {
  int sparse = 200;   // instances per sparse lemma
  int samples = 1000; // sampled points per domination instance
  int matrix = 50;
  int cov = 100;
  int random_weights = 50;  // random scalar weights in the duality suite
  int oracle = 1000;
};

ExperimentReport run_sparse_suite(std::uint64_t seed, const SuiteSizes& sizes = {}, int jobs = 1);
ExperimentReport run_matrix_suite(std::uint64_t seed, const SuiteSizes& sizes = {}, int jobs = 1);
ExperimentReport run_cov_suite(std::uint64_t seed, const SuiteSizes& sizes = {}, int jobs = 1);
ExperimentReport run_duality_suite(std::uint64_t seed, const SuiteSizes& sizes = {}, int jobs = 1);
ExperimentReport run_oracle_suite(std::uint64_t seed, const SuiteSizes& sizes = {}, int jobs = 1);

// All five suites in order.
std::vector<ExperimentReport> run_property_suites(std::uint64_t seed, const SuiteSizes& sizes = {},
                                                  int jobs = 1);

}  // namespace sharpweights
