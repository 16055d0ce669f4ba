// SPDX-License-Identifier: MIT
//
// Acceptance runner. `acceptance --criterion A3` runs one criterion, no
// argument runs all nine. Each criterion prints one PASS/FAIL line followed by
// indented detail lines for every check it aggregates.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sharpweights/experiments.hpp"
#include "sharpweights/suites.hpp"

namespace sw = sharpweights;

namespace {

constexpr std::uint64_t kSeed = 20240611;

// Wall-clock budgets in seconds.
constexpr double kBudgetA1PerP = 60.0;
constexpr double kBudgetA2PerP = 120.0;
constexpr double kBudgetA3 = 30.0;
constexpr double kBudgetA5 = 90.0;
constexpr double kBudgetA6 = 120.0;

struct Outcome {
  std::vector<sw::Check> checks;
  std::string note;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void absorb(Outcome& out, const sw::ExperimentReport& r, const std::string& prefix) {
  for (const auto& c : r.checks) {
    auto copy = c;
    copy.name = prefix + c.name;
    out.checks.push_back(copy);
  }
}

std::string p_label(double p) {
  std::ostringstream s;
  s << "p=" << p << ": ";
  return s.str();
}

template <class Run>
Outcome per_p(const std::vector<double>& ps, double budget, Run run) {
  Outcome out;
  for (double p : ps) {
    const auto t0 = Clock::now();
    const auto r = run(p);
    const double dt = seconds_since(t0);
    absorb(out, r, p_label(p));
    if (budget > 0) out.checks.push_back(sw::make_check(p_label(p) + "runtime [s]", dt, 0.0, budget));
  }
  return out;
}

template <class Run>
Outcome timed(double budget, Run run) {
  Outcome out;
  const auto t0 = Clock::now();
  const auto r = run();
  const double dt = seconds_since(t0);
  absorb(out, r, "");
  if (budget > 0) out.checks.push_back(sw::make_check("runtime [s]", dt, 0.0, budget));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sharpweights acceptance criteria"};
  std::string only;
  int jobs = 0;
  app.add_option("--criterion", only, "A1 .. A9 (default: all)");
  app.add_option("--jobs", jobs, "Worker threads (0: one per core)");
  CLI11_PARSE(app, argc, argv);
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const std::vector<double> small_p{1.25, 1.5, 1.75};
  const std::vector<double> large_p{2.0, 3.0};

  std::map<std::string, std::function<Outcome()>> criteria{
      {"A1",
       [&] {
         return per_p(small_p, kBudgetA1PerP, [&](double p) {
           return sw::run_sharpness_small_p(p, sw::default_small_p_grid(), jobs);
         });
       }},
      {"A2",
       [&] {
         return per_p(large_p, kBudgetA2PerP, [&](double p) {
           return sw::run_sharpness_large_p(p, sw::default_large_p_grid(), jobs);
         });
       }},
      {"A3",
       [&] {
         const auto t0 = Clock::now();
         auto out = per_p(large_p, 0.0, [&](double p) {
           return sw::run_power_weight(p, sw::default_eps_grid(), jobs);
         });
         out.checks.push_back(sw::make_check("runtime [s]", seconds_since(t0), 0.0, kBudgetA3));
         return out;
       }},
      {"A4",
       [&] {
         return per_p(small_p, 0.0, [&](double p) {
           return sw::run_hilbert_small_p(p, sw::default_small_p_grid(), jobs);
         });
       }},
      {"A5", [&] { return timed(kBudgetA5, [&] { return sw::run_sparse_suite(kSeed, {}, jobs); }); }},
      {"A6", [&] { return timed(kBudgetA6, [&] { return sw::run_matrix_suite(kSeed, {}, jobs); }); }},
      {"A7", [&] { return timed(0.0, [&] { return sw::run_cov_suite(kSeed, {}, jobs); }); }},
      {"A8", [&] { return timed(0.0, [&] { return sw::run_duality_suite(kSeed, {}, jobs); }); }},
      {"A9", [&] { return timed(0.0, [&] { return sw::run_oracle_suite(kSeed, {}, jobs); }); }},
  };

  if (!only.empty() && !criteria.count(only)) {
    std::cerr << "unknown criterion " << only << '\n';
    return 2;
  }

  bool all_ok = true;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && name != only) continue;
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.checks.push_back(sw::make_check(std::string("exception: ") + e.what(), 1.0, 0.0, 0.0));
    }
    bool ok = true;
    for (const auto& c : out.checks) ok = ok && c.passed;
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    for (const auto& c : out.checks) {
      std::cout << "    " << (c.passed ? "ok   " : "FAIL ") << c.name << " = " << std::setprecision(6)
                << c.value << "  [" << c.lower << ", " << c.upper << "]\n";
    }
    std::cout.flush();
  }
  return all_ok ? 0 : 1;
}
