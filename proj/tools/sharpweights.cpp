// SPDX-License-Identifier: MIT
//
// sharpweights: command-line front end for the weight constructions,
// functionals, operators and experiments.
//
// Exit codes: 0 all checks met, 1 a check failed (the report is still
// written) or a computation failed, 2 usage error.
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sharpweights/error.hpp"
#include "sharpweights/experiments.hpp"
#include "sharpweights/functionals.hpp"
#include "sharpweights/matrix_weight.hpp"
#include "sharpweights/operators.hpp"
#include "sharpweights/serialization.hpp"
#include "sharpweights/suites.hpp"
#include "sharpweights/weights.hpp"

namespace sw = sharpweights;

namespace {

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 1;
};

void emit(const Common& c, const sw::Json& j) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    sw::write_json_file(c.out, j);
  }
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Write the JSON result to this file (default: stdout)");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--jobs", c.jobs, "Worker threads (0: one per core)")->check(CLI::Range(0, 1024));
}

std::string csv_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".csv");
  return p.string();
}

int run_experiment(const std::string& kind, const std::vector<double>& ps,
                   const std::vector<double>& grid, const Common& c) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  std::vector<sw::ExperimentReport> reports;
  auto int_grid = [&](std::vector<int> fallback) {
    if (grid.empty()) return fallback;
    std::vector<int> g;
    for (double v : grid) {
      if (v != static_cast<int>(v)) throw sw::InvalidArgument("N grid values must be integers");
      g.push_back(static_cast<int>(v));
    }
    return g;
  };
  auto pick = [&](std::vector<double> fallback) { return ps.empty() ? fallback : ps; };

  if (kind == "small-p" || kind == "hilbert") {
    for (double p : pick({1.25, 1.5, 1.75})) {
      const auto g = int_grid(sw::default_small_p_grid());
      reports.push_back(kind == "small-p" ? sw::run_sharpness_small_p(p, g, c.jobs)
                                          : sw::run_hilbert_small_p(p, g, c.jobs));
    }
  } else if (kind == "large-p") {
    for (double p : pick({2.0, 3.0})) {
      reports.push_back(sw::run_sharpness_large_p(p, int_grid(sw::default_large_p_grid()), c.jobs));
    }
  } else if (kind == "power") {
    for (double p : pick({2.0, 3.0})) {
      reports.push_back(sw::run_power_weight(p, grid.empty() ? sw::default_eps_grid() : grid, c.jobs));
    }
  } else {
    reports = sw::run_property_suites(c.seed, {}, c.jobs);
  }

  sw::Json j;
  j["experiment"] = kind;
  j["seed"] = c.seed;
  j["reports"] = sw::Json::array();
  bool ok = true;
  std::string csv;
  for (const auto& r : reports) {
    j["reports"].push_back(r.to_json());
    ok = ok && r.passed();
    for (const auto& chk : r.checks) {
      if (!chk.passed) {
        std::cerr << "FAIL " << r.id << " p=" << r.p << ": " << chk.name << " = " << chk.value
                  << " not in [" << chk.lower << ", " << chk.upper << "]\n";
      }
    }
    if (!r.points.empty()) {
      std::istringstream rows(r.to_csv());
      std::string line;
      bool header = true;
      while (std::getline(rows, line)) {
        if (header) {
          if (csv.empty()) csv += "experiment,p," + line + '\n';
          header = false;
          continue;
        }
        csv += r.id + ',' + sw::Json(r.p).dump() + ',' + line + '\n';
      }
      csv += "\n";
    }
  }
  j["passed"] = ok;
  emit(c, j);
  if (!c.out.empty() && !csv.empty()) {
    std::ofstream(csv_path(c.out)) << csv;
  }
  std::cerr << "wall-clock " << std::chrono::duration<double>(Clock::now() - t0).count() << " s\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for extremal A_p weights, sparse machinery and matrix weights"};
  app.require_subcommand(1);
  Common common;
  int status = 0;

  // construct-weight
  auto* cw = app.add_subcommand("construct-weight", "Build an extremal weight as StepFunction JSON");
  std::string family = "small-p";
  sw::WeightFamilyParams params;
  cw->add_option("--family", family, "small-p | large-p | power")
      ->check(CLI::IsMember({"small-p", "large-p", "power"}));
  cw->add_option("--p", params.p, "Exponent");
  cw->add_option("--N", params.N, "Block count");
  cw->add_option("--eps", params.eps, "Power-weight exponent");
  cw->add_option("--cutoff", params.cutoff, "Power-weight cutoff");
  add_common(cw, common);
  cw->callback([&] {
    params.family = family == "small-p"   ? sw::WeightFamily::kSmallP
                    : family == "large-p" ? sw::WeightFamily::kLargeP
                                          : sw::WeightFamily::kPower;
    emit(common, sw::to_json(sw::build_weight(params)));
  });

  // ap
  auto* ap = app.add_subcommand("ap", "A_p constant of a step weight");
  std::string weight_file;
  double p = 2.0;
  std::vector<double> domain;
  ap->add_option("--weight", weight_file, "StepFunction JSON")->required();
  ap->add_option("--p", p, "Exponent")->required();
  ap->add_option("--domain", domain, "Search domain a b")->expected(2);
  add_common(ap, common);
  ap->callback([&] {
    sw::SearchConfig cfg;
    cfg.jobs = common.jobs;
    if (!domain.empty()) cfg.domain = sw::Interval(domain[0], domain[1]);
    const auto w = sw::step_function_from_json(sw::read_json_file(weight_file));
    emit(common, sw::to_json(sw::ap_constant(w, sw::Exponent(p), cfg)));
  });

  // matrix-ap
  auto* map = app.add_subcommand("matrix-ap", "Matrix A_p constant over mesh-dyadic cubes");
  map->add_option("--weight", weight_file, "MatrixWeight JSON")->required();
  map->add_option("--p", p, "Exponent")->required();
  add_common(map, common);
  map->callback([&] {
    const auto w = sw::matrix_weight_from_json(sw::read_json_file(weight_file));
    const auto cands = sw::mesh_candidates(w);
    const auto [value, arg] = sw::matrix_ap_argmax(w, p, cands);
    emit(common, {{"value", value}, {"argmax", sw::to_json(arg)}, {"candidates", cands.size()}});
  });

  // weak-norm
  auto* wn = app.add_subcommand("weak-norm", "Weak L^p quasinorm of a step function");
  std::string g_file;
  std::string mu_file;
  std::vector<double> window;
  wn->add_option("--g", g_file, "StepFunction JSON")->required();
  wn->add_option("--p", p, "Exponent")->required();
  wn->add_option("--weight", mu_file, "Optional weight StepFunction JSON");
  wn->add_option("--window", window, "Window a b (default: support of g)")->expected(2);
  add_common(wn, common);
  wn->callback([&] {
    const auto g = sw::step_function_from_json(sw::read_json_file(g_file));
    std::optional<sw::StepFunction> mu;
    if (!mu_file.empty()) mu = sw::step_function_from_json(sw::read_json_file(mu_file));
    const sw::Interval win = window.empty() ? g.support() : sw::Interval(window[0], window[1]);
    emit(common, sw::to_json(sw::weak_lp_quasinorm(g, p, win, mu ? &*mu : nullptr)));
  });

  // dual-hardy
  auto* dh = app.add_subcommand("dual-hardy", "||H*(w^{1/p} chi_E)||_{L^{p'}(sigma)}");
  std::string e_file;
  dh->add_option("--weight", weight_file, "StepFunction JSON")->required();
  dh->add_option("--p", p, "Exponent")->required();
  dh->add_option("--E", e_file, "Intervals [[a, b], ...], inline or as a JSON file")->required();
  add_common(dh, common);
  dh->callback([&] {
    const auto w = sw::step_function_from_json(sw::read_json_file(weight_file));
    const bool inline_json = !e_file.empty() && (e_file.front() == '[' || e_file.front() == '{');
    auto ej = inline_json ? sw::Json::parse(e_file) : sw::read_json_file(e_file);
    if (ej.is_object()) ej = ej.at("intervals");
    emit(common, sw::to_json(sw::dual_hardy_experiment(w, p, sw::intervals_from_json(ej))));
  });

  // cg-max
  auto* cg = app.add_subcommand("cg-max", "Christ-Goldberg maximal function at a point");
  std::string f_file;
  double x = 0.0;
  std::string mode = "dyadic";
  cg->add_option("--weight", weight_file, "MatrixWeight JSON")->required();
  cg->add_option("--p", p, "Exponent")->required();
  cg->add_option("--f", f_file, "Vector field JSON")->required();
  cg->add_option("--x", x, "Evaluation point")->required();
  cg->add_option("--mode", mode, "dyadic | all")->check(CLI::IsMember({"dyadic", "all"}));
  add_common(cg, common);
  cg->callback([&] {
    const auto w = sw::matrix_weight_from_json(sw::read_json_file(weight_file));
    const auto f = sw::vector_field_from_json(sw::read_json_file(f_file));
    const auto m = mode == "all" ? sw::CgMode::kAllMeshIntervals : sw::CgMode::kDyadicLocal;
    emit(common, {{"value", sw::cg_maximal(w, p, f, x, m)}, {"x", x}, {"mode", mode}});
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "Scaling experiments and property suites");
  std::string kind;
  std::vector<double> ps;
  std::vector<double> grid;
  ex->add_option("kind", kind, "small-p | large-p | power | hilbert | suites")
      ->required()
      ->check(CLI::IsMember({"small-p", "large-p", "power", "hilbert", "suites"}));
  ex->add_option("--p", ps, "Exponents (default: the experiment's standard set)");
  ex->add_option("--grid", grid, "N values, or eps values for the power experiment");
  add_common(ex, common);
  ex->callback([&] { status = run_experiment(kind, ps, grid, common); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const sw::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const sw::Json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return status;
}
