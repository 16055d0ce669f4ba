// SPDX-License-Identifier: MIT
#include "sharpweights/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "sharpweights/calibration.hpp"
#include "sharpweights/detail/parallel.hpp"
#include "sharpweights/error.hpp"
#include "sharpweights/functionals.hpp"
#include "sharpweights/matrix_weight.hpp"
#include "sharpweights/operators.hpp"
#include "sharpweights/oracles.hpp"
#include "sharpweights/serialization.hpp"
#include "sharpweights/sparse.hpp"
#include "sharpweights/spb.hpp"
#include "sharpweights/weights.hpp"

namespace sharpweights {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxCounterexamples = 5;

struct Outcome {
  std::vector<std::pair<std::string, double>> values;
  std::vector<Json> failures;

  void put(std::string key, double v) { values.emplace_back(std::move(key), v); }
  void fail(Json j) { failures.push_back(std::move(j)); }
};

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint32_t tag, std::size_t i) {
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag,
                  static_cast<std::uint32_t>(i)};
  return std::mt19937_64(s);
}

template <class Fn>
std::vector<Outcome> run_instances(int count, int jobs, Fn&& fn) {
  if (count < 0) throw InvalidArgument("suite size must be nonnegative");
  std::vector<Outcome> out(static_cast<std::size_t>(count));
  detail::parallel_chunks(out.size(), jobs, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      try {
        out[i] = fn(i);
      } catch (const std::exception& ex) {
        out[i].fail({{"instance", i}, {"error", ex.what()}});
        out[i].put("instance_errors", 1.0);
      }
    }
  });
  return out;
}

struct Summary {
  std::map<std::string, double> lo;
  std::map<std::string, double> hi;
  std::map<std::string, double> sum;
  Json counterexamples = Json::array();
  int failed_instances = 0;

  [[nodiscard]] double max(const std::string& k, double fallback = 0.0) const {
    const auto it = hi.find(k);
    return it == hi.end() ? fallback : it->second;
  }
  [[nodiscard]] double min(const std::string& k, double fallback = 0.0) const {
    const auto it = lo.find(k);
    return it == lo.end() ? fallback : it->second;
  }
  [[nodiscard]] double total(const std::string& k) const {
    const auto it = sum.find(k);
    return it == sum.end() ? 0.0 : it->second;
  }
};

Summary summarize(const std::vector<Outcome>& outcomes) {
  Summary s;
  for (const auto& o : outcomes) {
    for (const auto& [k, v] : o.values) {
      auto [it, fresh] = s.lo.emplace(k, v);
      if (!fresh) it->second = std::min(it->second, v);
      auto [jt, fresh2] = s.hi.emplace(k, v);
      if (!fresh2) jt->second = std::max(jt->second, v);
      s.sum[k] += v;
    }
    if (!o.failures.empty()) ++s.failed_instances;
    for (const auto& f : o.failures) {
      if (s.counterexamples.size() < kMaxCounterexamples) s.counterexamples.push_back(f);
    }
  }
  return s;
}

ExperimentReport make_report(std::string id, std::uint64_t seed, const Summary& s,
                             Clock::time_point t0) {
  ExperimentReport r;
  r.id = std::move(id);
  r.seed = seed;
  r.extra["counterexamples"] = s.counterexamples;
  r.extra["failed_instances"] = s.failed_instances;
  Json ranges = Json::object();
  for (const auto& [k, v] : s.lo) ranges[k] = {{"min", v}, {"max", s.hi.at(k)}};
  r.extra["metrics"] = std::move(ranges);
  r.checks.push_back(make_check("instance errors", s.total("instance_errors"), 0.0, 0.0));
  r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

double relative_error(double fast, double slow) {
  const double scale = std::max(std::abs(slow), std::numeric_limits<double>::min());
  return std::abs(fast - slow) / scale;
}

const DyadicLattice& unit_lattice() {
  static const DyadicLattice lat = DyadicLattice::standard(Interval(0.0, 1.0));
  return lat;
}

const DyadicCube kRoot{0, 0, {0}};

Json family_json(const SparseFamily& f) { return to_json(f); }

// ---- sparse lemmas -------------------------------------------------------

void sppr_instance(std::mt19937_64& rng, std::size_t i, Outcome& o) {
  const auto& lat = unit_lattice();
  RandomFamilyConfig cfg;
  cfg.eta = 0.875;
  cfg.max_depth = 8;
  cfg.max_cubes = 48;
  const auto fam = random_sparse_family(lat, kRoot, cfg, rng);
  const auto phi = random_mesh_function(lat, kRoot, 10, rng, 0.2);
  std::uniform_real_distribution<double> scale(0.3, 1.0);
  const std::size_t pick = rng() % fam.size();
  const double avg = phi.integrate(fam.interval(pick)) / fam.interval(pick).length();
  const double gamma = avg > 0.0 ? avg * scale(rng) : 1.0;
  double worst = 0.0;
  for (const auto& q : sppr_select(fam, phi, gamma)) {
    const double ratio = q.mass > 0.0 ? q.mass / (8.0 * q.kept_mass) : 0.0;
    worst = std::max(worst, std::isfinite(ratio) ? ratio : kInf);
  }
  o.put("sppr_ratio", worst);
  if (!(worst <= 1.0 + 1e-12)) {
    o.fail({{"instance", i}, {"lemma", "sppr"}, {"family", family_json(fam)},
            {"phi", to_json(phi)}, {"gamma", gamma}});
  }
}

void split_instance(std::mt19937_64& rng, std::size_t i, Outcome& o) {
  const auto& lat = unit_lattice();
  RandomFamilyConfig cfg;
  cfg.eta = (i % 2 == 0) ? 0.5 : 0.875;
  cfg.max_depth = 10;
  cfg.max_cubes = 64;
  const auto fam = random_sparse_family(lat, kRoot, cfg, rng);
  std::vector<std::string> want;
  for (const auto& c : fam.cubes()) want.push_back(c.id());
  std::sort(want.begin(), want.end());
  for (const int m : {2, 3}) {
    const auto parts = split_sparse(fam, m);
    const double bound = split_sparseness_bound(cfg.eta, m);
    double margin = kInf;
    std::vector<std::string> got;
    for (const auto& part : parts) {
      const double measured = part.empty() ? 1.0 : verify_sparseness(part.cubes(), lat);
      margin = std::min(margin, measured - bound);
      for (const auto& c : part.cubes()) got.push_back(c.id());
    }
    std::sort(got.begin(), got.end());
    const bool partition = (got == want) && static_cast<int>(parts.size()) == m;
    o.put("split_margin", margin);
    o.put("split_partition_errors", partition ? 0.0 : 1.0);
    if (!(margin >= -1e-12) || !partition) {
      o.fail({{"instance", i}, {"lemma", "split"}, {"m", m}, {"family", family_json(fam)}});
    }
  }
}

void cz_instance(std::mt19937_64& rng, std::size_t i, Outcome& o) {
  const auto& lat = unit_lattice();
  RandomFamilyConfig cfg;
  cfg.eta = 0.5;
  cfg.max_depth = 8;
  cfg.max_cubes = 32;
  const auto fam = random_sparse_family(lat, kRoot, cfg, rng);
  const auto psi = random_mesh_function(lat, kRoot, 10, rng, 0.3);
  const Interval top = lat.interval(kRoot);
  const double avg = psi.integrate(top) / top.length();
  std::uniform_real_distribution<double> lift(1.5, 4.0);
  const double gamma = avg > 0.0 ? avg * lift(rng) : 1.0;
  const auto cz = cz_decompose(psi, gamma, lat, kRoot);

  double mean_rel = 0.0;
  int selected_bad = 0;
  int parent_bad = 0;
  double covered = 0.0;
  for (std::size_t j = 0; j < cz.cubes.size(); ++j) {
    const Interval& q = cz.intervals[j];
    const double mass = psi.integrate(q);
    mean_rel = std::max(mean_rel, std::abs(cz.bad.integrate(q)) / std::max(mass, 1e-300));
    if (!(mass / q.length() > gamma)) ++selected_bad;
    if (cz.cubes[j].generation > 0) {
      const Interval par = lat.interval(lat.parent(cz.cubes[j]));
      if (psi.integrate(par) / par.length() > gamma) ++parent_bad;
    }
    covered += q.length();
  }
  int overlaps = 0;
  auto sorted = cz.intervals;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.a() < b.a(); });
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (sorted[j].a() < sorted[j - 1].b()) ++overlaps;
  }
  const StepFunction* fs[] = {&psi, &cz.good, &cz.bad};
  const auto mesh = common_mesh(fs, top);
  double good_max = 0.0;
  double sum_err = 0.0;
  double psi_max = 0.0;
  for (std::size_t j = 0; j + 1 < mesh.size(); ++j) {
    const double x = 0.5 * (mesh[j] + mesh[j + 1]);
    good_max = std::max(good_max, cz.good(x));
    psi_max = std::max(psi_max, psi(x));
    sum_err = std::max(sum_err, std::abs(psi(x) - cz.good(x) - cz.bad(x)));
  }
  o.put("cz_mean_rel", mean_rel);
  o.put("cz_selected_violations", selected_bad);
  o.put("cz_parent_violations", parent_bad);
  o.put("cz_overlaps", overlaps);
  o.put("cz_good_over_gamma", good_max / gamma);
  o.put("cz_sum_rel", sum_err / std::max(psi_max, 1e-300));
  o.put("cz_weak11_ratio", covered * gamma / std::max(psi.integrate(top), 1e-300));

  CubeFunctions lambda;
  for (const auto& c : fam.cubes()) lambda.emplace(c, random_mesh_function(lat, kRoot, 6, rng));
  const auto v = vanishing_check(lambda, fam, cz);
  const double rel = v.scale > 0.0 ? v.max_abs / v.scale : v.max_abs;
  o.put("vanishing_rel", rel);

  const bool bad = mean_rel > 1e-12 || selected_bad || parent_bad || overlaps ||
                   good_max > 2.0 * gamma * (1.0 + 1e-12) || sum_err > 1e-12 * psi_max ||
                   covered * gamma > psi.integrate(top) * (1.0 + 1e-12) || !v.vanishes;
  if (bad) {
    o.fail({{"instance", i}, {"lemma", "calderon-zygmund"}, {"psi", to_json(psi)},
            {"gamma", gamma}, {"family", family_json(fam)}});
  }
}

void level_instance(std::mt19937_64& rng, std::size_t i, Outcome& o) {
  const auto& lat = unit_lattice();
  RandomFamilyConfig cfg;
  cfg.eta = 0.875;
  cfg.max_depth = 10;
  cfg.max_cubes = 64;
  const auto fam = random_sparse_family(lat, kRoot, cfg, rng);
  const auto phi = random_mesh_function(lat, kRoot, 11, rng, 0.3).scaled(0.01);

  // Overlap decay.
  const auto dist = overlap_distribution(fam.cubes(), lat, kRoot);
  double theta = 0.0;
  for (std::size_t m = 1; m < dist.size(); ++m) {
    theta = std::max(theta, std::pow(dist[m], 1.0 / static_cast<double>(m)));
  }
  o.put("overlap_theta", theta);

  // Level partition.
  const auto levels = level_families(fam, phi);
  std::size_t counted = levels.zero_average.size();
  int misplaced = 0;
  for (const auto& lf : levels.families) {
    counted += lf.cubes.size();
    for (const auto& c : lf.cubes) {
      const Interval iv = lat.interval(c);
      const double a = phi.integrate(iv) / iv.length();
      if (!(a > std::pow(4.0, -lf.k - 1) && a <= std::pow(4.0, -lf.k))) ++misplaced;
    }
  }
  o.put("level_misplaced", misplaced + (counted == fam.size() ? 0 : 1));
  if (theta > calibration::kOverlapTheta * (1.0 + 1e-12) || misplaced || counted != fam.size()) {
    o.fail({{"instance", i}, {"lemma", "level families"}, {"family", family_json(fam)}});
  }
}

void domination_instance(std::mt19937_64& rng, std::size_t i, int samples, Outcome& o) {
  static constexpr double kPs[] = {1.5, 2.0, 3.0};
  const double p = kPs[i % 3];
  const auto w = random_matrix_weight(2, 7, rng, 1.5);
  const auto f = random_vector_field(w, rng);
  SpbConfig cfg;
  cfg.samples = samples;
  cfg.seed = i;
  cfg.exponents = {0.5, 1.0};
  const auto res = spb_construct(kRoot, w, p, f, cfg);
  double violations = 0.0;
  double ratio = 0.0;
  for (std::size_t k = 0; k < res.report.exponents.size(); ++k) {
    violations += res.report.violations[k];
    ratio = std::max(ratio, res.report.max_ratio[k]);
  }
  o.put("domination_violations", violations);
  o.put("domination_max_ratio", ratio);
  o.put("domination_stopping_fraction", res.report.max_stopping_fraction);
  o.put("domination_family_eta", res.family.measured_eta());
  if (violations > 0.0) {
    o.fail({{"instance", i}, {"lemma", "domination"}, {"p", p}, {"weight", to_json(w)},
            {"f", to_json(f)}, {"report", to_json(res.report)}});
  }
}

// ---- matrix suite --------------------------------------------------------

void matrix_instance(std::mt19937_64& rng, std::size_t i, Outcome& o) {
  const auto w = random_matrix_weight(2, 8, rng, 1.5);
  const auto cands = mesh_candidates(w);
  std::vector<Interval> cubes{w.base()};
  for (int t = 0; t < 3; ++t) cubes.push_back(cands[rng() % cands.size()]);
  const double sqrt2 = std::sqrt(2.0);
  bool bad = false;
  for (const double p : {2.0, 3.0}) {
    const std::string tag = p == 2.0 ? "p2" : "p3";
    const double ap = matrix_ap(w, p, cands);
    o.put(tag + "_ap", ap);
    for (const auto& q : cubes) {
      const auto v = reducing_operator(q, p, w, 64, i);
      if (p == 2.0) {
        const double dev = std::max(std::abs(v.c_low - 1.0), std::abs(v.c_high - 1.0));
        o.put("p2_reducing_deviation", dev);
        bad |= dev > 1e-8;
      } else {
        o.put("p3_reducing_spread", v.c_high / v.c_low);
        bad |= v.c_high / v.c_low > sqrt2 * 1.05;
      }
      const auto f = random_vector_field(w, rng);
      const auto pr1 = prop_pr1_check(q, p, w, f, v);
      o.put(tag + "_pr1_ratio", pr1.ratio);
      o.put(tag + "_pr1_over_bound", pr1.ratio / pr1.bound);
      bad |= pr1.ratio > 4.0 || pr1.ratio > pr1.bound * (1.0 + 1e-12);
      const auto pr2 = prop_pr2_check(q, p, w, 1.0 + 1.0 / (8.0 * ap), v, ap);
      o.put(tag + "_pr2_ratio", pr2.ratio);
      bad |= pr2.ratio > calibration::kReverseHolderRatioMax;
    }
    // Scalar A_p along 16 directions over the same candidates.
    double scap_excess = 0.0;
    const Exponent e(p);
    for (int k = 0; k < 16; ++k) {
      Vector u(2);
      u << std::cos(kPi * k / 16.0), std::sin(kPi * k / 16.0);
      const auto wu = direction_weight(w, p, u);
      double scalar = 0.0;
      for (const auto& iv : cands) scalar = std::max(scalar, ap_functional(wu, e, iv));
      scap_excess = std::max(scap_excess, scalar / ap - 1.0);
    }
    o.put(tag + "_scap_excess", scap_excess);
    bad |= scap_excess > 1e-9;

    auto probes = coordinate_probes(w);
    probes.push_back(random_vector_field(w, rng));
    const double est = cg_strong_norm_estimate(w, p, probes);
    const double sqb = est / std::pow(ap, 1.0 / (p - 1.0));
    o.put(tag + "_sqb_ratio", sqb);
    bad |= sqb > calibration::kStrongBoundConstant;
  }
  if (bad) o.fail({{"instance", i}, {"weight", to_json(w)}});
}

// ---- oracle suite --------------------------------------------------------

void oracle_instance(std::mt19937_64& rng, std::size_t i, Outcome& o) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Dyadic maximal on one of the three lattices.
  {
    const auto lats = three_lattices(1);
    const auto& lat = lats[i % 3];
    const int gen = static_cast<int>(rng() % 3);
    const DyadicCube root = lat.cube_containing(unit(rng), gen);
    const auto f = random_mesh_function(lat, root, 1 + static_cast<int>(rng() % 6), rng, 0.2);
    const Interval top = lat.interval(root);
    const double x = top.a() + unit(rng) * top.length();
    const double rel = relative_error(dyadic_maximal(f, lat, x, root),
                                      oracle::dyadic_maximal(f, lat, x, root));
    o.put("dyadic_maximal_rel", rel);
    if (rel > 1e-10) {
      o.fail({{"instance", i}, {"operator", "dyadic_maximal"}, {"f", to_json(f)}, {"x", x},
              {"window", root.id()}});
    }
  }
  // Christ-Goldberg maximal, both candidate modes.
  {
    const int n = 1 + static_cast<int>(i % 3);
    const int depth = 1 + static_cast<int>(rng() % 5);
    const auto w = random_matrix_weight(n, depth, rng, 1.5);
    const auto f = random_vector_field(w, rng);
    const double p = 1.2 + 2.8 * unit(rng);
    const double x = unit(rng);
    const CgMode mode = (i % 2 == 0) ? CgMode::kDyadicLocal : CgMode::kAllMeshIntervals;
    const double rel = relative_error(cg_maximal(w, p, f, x, mode), oracle::cg_maximal(w, p, f, x, mode));
    o.put("cg_maximal_rel", rel);
    if (rel > 1e-10) {
      o.fail({{"instance", i}, {"operator", "cg_maximal"}, {"weight", to_json(w)},
              {"f", to_json(f)}, {"p", p}, {"x", x}});
    }
  }
  // Weak L^p quasinorm, Lebesgue or weighted.
  {
    const auto& lat = unit_lattice();
    const auto g = random_mesh_function(lat, kRoot, 1 + static_cast<int>(rng() % 6), rng, 0.2);
    const double p = 1.0 + 3.0 * unit(rng);
    const Interval window(0.0, 1.0);
    const bool weighted = i % 2 == 1;
    const auto wt = random_mesh_function(lat, kRoot, 1 + static_cast<int>(rng() % 5), rng);
    const StepFunction* wp = weighted ? &wt : nullptr;
    const double rel = relative_error(weak_lp_quasinorm(g, p, window, wp).value,
                                      oracle::weak_lp_quasinorm(g, p, window, wp));
    o.put("weak_norm_rel", rel);
    if (rel > 1e-10) {
      o.fail({{"instance", i}, {"operator", "weak_lp_quasinorm"}, {"g", to_json(g)}, {"p", p},
              {"weight", weighted ? to_json(wt) : Json(nullptr)}});
    }
  }
}

}  // namespace

ExperimentReport run_sparse_suite(std::uint64_t seed, const SuiteSizes& sizes, int jobs) {
  const auto t0 = Clock::now();
  const auto outcomes = run_instances(sizes.sparse, jobs, [&](std::size_t i) {
    Outcome o;
    auto rng = instance_rng(seed, 5, i);
    sppr_instance(rng, i, o);
    split_instance(rng, i, o);
    cz_instance(rng, i, o);
    level_instance(rng, i, o);
    domination_instance(rng, i, sizes.samples, o);
    return o;
  });
  const auto s = summarize(outcomes);
  auto r = make_report("sparse", seed, s, t0);
  r.checks.push_back(make_check("sppr: max int_Q phi / (8 int_G phi)", s.max("sppr_ratio"), 0.0, 1.0 + 1e-12));
  r.checks.push_back(make_check("split: min measured - bound", s.min("split_margin"), -1e-12, kInf));
  r.checks.push_back(make_check("split: partition errors", s.total("split_partition_errors"), 0.0, 0.0));
  r.checks.push_back(make_check("vanishing: max relative value", s.max("vanishing_rel"), 0.0, 1e-12));
  r.checks.push_back(make_check("domination: violations", s.total("domination_violations"), 0.0, 0.0));
  r.checks.push_back(make_check("domination: stopping fraction", s.max("domination_stopping_fraction"), 0.0, 0.5));
  r.checks.push_back(make_check("domination: family sparseness", s.min("domination_family_eta", 1.0), 0.5, 1.0));
  r.checks.push_back(make_check("cz: mean-zero (relative)", s.max("cz_mean_rel"), 0.0, 1e-12));
  r.checks.push_back(make_check("cz: overlaps", s.total("cz_overlaps"), 0.0, 0.0));
  r.checks.push_back(make_check("cz: selected average above gamma", s.total("cz_selected_violations"), 0.0, 0.0));
  r.checks.push_back(make_check("cz: parents at or below gamma", s.total("cz_parent_violations"), 0.0, 0.0));
  r.checks.push_back(make_check("cz: max g / gamma", s.max("cz_good_over_gamma"), 0.0, 2.0 * (1.0 + 1e-12)));
  r.checks.push_back(make_check("cz: psi = g + b (relative)", s.max("cz_sum_rel"), 0.0, 1e-12));
  r.checks.push_back(make_check("cz: |union| gamma / int psi", s.max("cz_weak11_ratio"), 0.0, 1.0 + 1e-12));
  r.checks.push_back(make_check("levels: misplaced cubes", s.total("level_misplaced"), 0.0, 0.0));
  r.checks.push_back(make_check("overlap: measured theta", s.max("overlap_theta"), 0.0,
                                calibration::kOverlapTheta * (1.0 + 1e-12)));
  return r;
}

ExperimentReport run_matrix_suite(std::uint64_t seed, const SuiteSizes& sizes, int jobs) {
  const auto t0 = Clock::now();
  const auto outcomes = run_instances(sizes.matrix, jobs, [&](std::size_t i) {
    Outcome o;
    auto rng = instance_rng(seed, 6, i);
    matrix_instance(rng, i, o);
    return o;
  });
  const auto s = summarize(outcomes);
  auto r = make_report("matrix", seed, s, t0);
  r.checks.push_back(make_check("p=2 reducing operator |c - 1|", s.max("p2_reducing_deviation"), 0.0, 1e-8));
  r.checks.push_back(make_check("p=3 reducing operator c_high/c_low", s.max("p3_reducing_spread"), 1.0,
                                std::sqrt(2.0) * 1.05));
  r.checks.push_back(make_check("reducing-operator ratio (p=2)", s.max("p2_pr1_ratio"), 0.0, 4.0));
  r.checks.push_back(make_check("reducing-operator ratio (p=3)", s.max("p3_pr1_ratio"), 0.0, 4.0));
  r.checks.push_back(make_check("reducing-operator ratio / (n / c_low)",
                                std::max(s.max("p2_pr1_over_bound"), s.max("p3_pr1_over_bound")), 0.0,
                                1.0 + 1e-12));
  r.checks.push_back(make_check("reverse-Hölder ratio", std::max(s.max("p2_pr2_ratio"), s.max("p3_pr2_ratio")),
                                0.0, calibration::kReverseHolderRatioMax));
  r.checks.push_back(make_check("scalar A_p along directions minus matrix A_p (relative)",
                                std::max(s.max("p2_scap_excess"), s.max("p3_scap_excess")), -kInf, 1e-9));
  r.checks.push_back(make_check("strong bound ratio",
                                std::max(s.max("p2_sqb_ratio"), s.max("p3_sqb_ratio")), 0.0,
                                calibration::kStrongBoundConstant));
  return r;
}

ExperimentReport run_cov_suite(std::uint64_t seed, const SuiteSizes& sizes, int jobs) {
  const auto t0 = Clock::now();
  const auto outcomes = run_instances(sizes.cov, jobs, [&](std::size_t i) {
    Outcome o;
    auto rng = instance_rng(seed, 7, i);
    const auto& lat = unit_lattice();
    static constexpr double kPs[] = {1.5, 2.0, 3.0};
    const double p = kPs[i % 3];
    const bool singleton = i % 10 == 0;
    RandomFamilyConfig cfg;
    cfg.eta = (i % 2 == 0) ? 0.5 : 0.875;
    cfg.max_depth = 8;
    cfg.max_cubes = 32;
    const SparseFamily fam = singleton ? SparseFamily(lat, {kRoot}, 0.5)
                                       : random_sparse_family(lat, kRoot, cfg, rng);
    const auto w = random_mesh_function(lat, kRoot, 9, rng);
    std::uniform_real_distribution<double> lg(-3.0, 3.0);
    CubeCoefficients lambda;
    for (const auto& c : fam.cubes()) lambda.emplace(c, std::exp2(lg(rng)));
    const auto rep = cov_functional(fam, lambda, w, p);
    const double ratio = rep.lhs / rep.rhs;
    o.put("cov_constant", std::max(ratio, 1.0 / ratio));
    if (singleton) o.put("cov_singleton_rel", std::abs(rep.lhs - rep.rhs) / rep.rhs);
    if (std::max(ratio, 1.0 / ratio) > calibration::kCovConstant ||
        (singleton && std::abs(rep.lhs - rep.rhs) > 1e-12 * rep.rhs)) {
      o.fail({{"instance", i}, {"p", p}, {"family", family_json(fam)}, {"weight", to_json(w)}});
    }
    return o;
  });
  const auto s = summarize(outcomes);
  auto r = make_report("cov", seed, s, t0);
  r.checks.push_back(make_check("suite-wide C", s.max("cov_constant"), 1.0, calibration::kCovConstant));
  r.checks.push_back(make_check("singleton lhs = rhs (relative)", s.max("cov_singleton_rel"), 0.0, 1e-12));
  return r;
}

ExperimentReport run_duality_suite(std::uint64_t seed, const SuiteSizes& sizes, int jobs) {
  const auto t0 = Clock::now();
  struct Case {
    std::string label;
    double p;
    std::function<StepFunction()> make;
  };
  std::vector<Case> cases;
  for (const double p : {1.25, 1.5, 1.75}) {
    for (const int n : {10, 30}) {
      cases.push_back({"small-p N=" + std::to_string(n), p,
                       [=] { return build_weight_small_p(n, p).weight; }});
    }
  }
  for (const double p : {2.0, 3.0}) {
    for (const int n : {16, 40}) {
      cases.push_back({"large-p N=" + std::to_string(n), p,
                       [=] { return build_weight_large_p(n, p).weight; }});
    }
    for (const double eps : {0.25, 1.0 / 256.0}) {
      cases.push_back({"power eps=" + std::to_string(eps), p,
                       [=] { return build_power_weight(eps).weight; }});
    }
  }
  const std::size_t fixed = cases.size();
  const int total = static_cast<int>(fixed) + sizes.random_weights;
  const auto outcomes = run_instances(total, jobs, [&](std::size_t i) {
    Outcome o;
    StepFunction w = StepFunction::constant(1.0, Interval(0.0, 1.0));
    double p = 2.0;
    std::string label;
    if (i < fixed) {
      w = cases[i].make();
      p = cases[i].p;
      label = cases[i].label;
    } else {
      auto rng = instance_rng(seed, 8, i);
      std::uniform_real_distribution<double> up(1.1, 4.0);
      p = up(rng);
      w = random_mesh_function(unit_lattice(), kRoot, 1 + static_cast<int>(rng() % 7), rng);
      label = "random";
    }
    const auto rep = ap_duality_check(w, Exponent(p));
    o.put("duality_discrepancy", rep.max_discrepancy);
    if (!(rep.max_discrepancy <= 1e-9)) {
      o.fail({{"instance", i}, {"label", label}, {"p", p}, {"weight", to_json(w)},
              {"report", to_json(rep)}});
    }
    return o;
  });
  const auto s = summarize(outcomes);
  auto r = make_report("duality", seed, s, t0);
  r.checks.push_back(make_check("max relative per-interval discrepancy", s.max("duality_discrepancy"),
                                0.0, 1e-9));
  return r;
}

ExperimentReport run_oracle_suite(std::uint64_t seed, const SuiteSizes& sizes, int jobs) {
  const auto t0 = Clock::now();
  const auto outcomes = run_instances(sizes.oracle, jobs, [&](std::size_t i) {
    Outcome o;
    auto rng = instance_rng(seed, 9, i);
    oracle_instance(rng, i, o);
    return o;
  });
  const auto s = summarize(outcomes);
  auto r = make_report("oracles", seed, s, t0);
  r.checks.push_back(make_check("dyadic_maximal relative error", s.max("dyadic_maximal_rel"), 0.0, 1e-10));
  r.checks.push_back(make_check("cg_maximal relative error", s.max("cg_maximal_rel"), 0.0, 1e-10));
  r.checks.push_back(make_check("weak_lp_quasinorm relative error", s.max("weak_norm_rel"), 0.0, 1e-10));
  return r;
}

std::vector<ExperimentReport> run_property_suites(std::uint64_t seed, const SuiteSizes& sizes,
                                                  int jobs) {
  return {run_sparse_suite(seed, sizes, jobs), run_matrix_suite(seed, sizes, jobs),
          run_cov_suite(seed, sizes, jobs), run_duality_suite(seed, sizes, jobs),
          run_oracle_suite(seed, sizes, jobs)};
}

}  // namespace sharpweights
