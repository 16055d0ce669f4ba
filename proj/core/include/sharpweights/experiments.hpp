// SPDX-License-Identifier: MIT
//
// Scaling experiments over the extremal weight families and the report type
// shared with the property suites.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace sharpweights {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the log-space residuals
};

// Ordinary least squares on (ln x, ln y). Needs at least three points with
// strictly increasing positive x and positive y.
FitResult fit_exponent(std::span<const std::pair<double, double>> points);

struct Check {
  std::string name;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool passed = false;
};

// Passes when lower <= value <= upper.
Check make_check(std::string name, double value, double lower, double upper);

struct ExperimentPoint {
  double parameter = 0.0;
  std::map<std::string, double> values;
  std::map<std::string, std::string> provenance;  // value name -> producing operation
};

struct ExperimentReport {
  std::string id;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<ExperimentPoint> points;
  FitResult fit;
  std::string fit_x;
  std::string fit_y;
  std::vector<Check> checks;
  nlohmann::json extra = nlohmann::json::object();
  double wall_seconds = 0.0;  // not serialized; reports stay byte-identical across runs

  [[nodiscard]] bool passed() const;
  [[nodiscard]] nlohmann::json to_json() const;
  // One row per grid point: parameter followed by every value column.
  [[nodiscard]] std::string to_csv() const;
};

std::vector<int> default_small_p_grid();   // N = 10, 14, ..., 30
std::vector<int> default_large_p_grid();   // N = 16, 20, ..., 40
std::vector<double> default_eps_grid();    // 2^-2 .. 2^-8

// [w]_{A_p} and L(N) = |{x in (1, 2^{N+1}) : w^{1/p}(x) > x}|^{1/p}.
ExperimentReport run_sharpness_small_p(double p, const std::vector<int>& grid, int jobs = 1);

// [w]_{A_p}, k sigma(J_k) and D(N) = ||H*(w^{1/p} chi_E)||_{L^{p'}(sigma)} / |E|^{1/p'}.
ExperimentReport run_sharpness_large_p(double p, const std::vector<int>& grid, int jobs = 1);

// [w_eps]_{A_p} and the left-hand side of the duality bound with E = (0, 1).
ExperimentReport run_power_weight(double p, const std::vector<double>& grid, int jobs = 1);

// A1 with M replaced by H: |{x in (1, 2^{N+1}) : w^{1/p}(x) H(chi_[0,1])(x) > 1}|.
ExperimentReport run_hilbert_small_p(double p, const std::vector<int>& grid, int jobs = 1);

// Closed form eps^{-1/p} (((p - 1)/eps) 2^{-eps/(p-1)})^{1/p'}.
double power_weight_lhs_closed(double eps, double p);

}  // namespace sharpweights
