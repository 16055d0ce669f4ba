// SPDX-License-Identifier: MIT
#include "sharpweights/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "sharpweights/error.hpp"

namespace sharpweights {

namespace {

void require_line(const DyadicLattice& lattice, const char* who) {
  if (lattice.dimension() != 1) {
    throw InvalidArgument(std::string(who) + ": only one-dimensional lattices are supported");
  }
}

void require_member(const DyadicLattice& lattice, const DyadicCube& cube, const char* who) {
  if (cube.lattice_id != lattice.id()) {
    throw InvalidArgument(std::string(who) + ": cube " + cube.id() + " belongs to another lattice");
  }
}

// Order: left end ascending, longer first; ancestors precede descendants.
std::vector<std::size_t> containment_order(const std::vector<Interval>& iv) {
  std::vector<std::size_t> order(iv.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (iv[x].a() != iv[y].a()) return iv[x].a() < iv[y].a();
    return iv[x].length() > iv[y].length();
  });
  return order;
}

// Q minus the given disjoint sorted sub-intervals.
std::vector<Interval> complement_in(const Interval& q, const std::vector<Interval>& holes) {
  std::vector<Interval> out;
  double cursor = q.a();
  for (const auto& h : holes) {
    if (h.a() > cursor) out.emplace_back(cursor, h.a());
    cursor = std::max(cursor, h.b());
  }
  if (cursor < q.b()) out.emplace_back(cursor, q.b());
  return out;
}

double total_length(const std::vector<Interval>& ivs) {
  double s = 0.0;
  for (const auto& iv : ivs) s += iv.length();
  return s;
}

double integrate_over(const StepFunction& f, const std::vector<Interval>& ivs) {
  double s = 0.0;
  for (const auto& iv : ivs) s += f.integrate(iv);
  return s;
}

std::vector<Interval> child_intervals(const CubeForest& forest, std::size_t i) {
  std::vector<Interval> out;
  for (int c : forest.children[i]) out.push_back(forest.intervals[static_cast<std::size_t>(c)]);
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.a() < b.a(); });
  return out;
}

// Maximal members of a cube set (none contained in another).
std::vector<DyadicCube> maximal_members(const DyadicLattice& lattice,
                                        const std::vector<DyadicCube>& cubes) {
  const auto forest = build_forest(lattice, cubes);
  std::vector<DyadicCube> out;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (forest.parent[i] < 0) out.push_back(cubes[i]);
  }
  return out;
}

}  // namespace

CubeForest build_forest(const DyadicLattice& lattice, std::span<const DyadicCube> cubes) {
  require_line(lattice, "build_forest");
  CubeForest forest;
  const std::size_t n = cubes.size();
  forest.intervals.reserve(n);
  for (const auto& c : cubes) {
    require_member(lattice, c, "build_forest");
    forest.intervals.push_back(lattice.interval(c));
  }
  forest.parent.assign(n, -1);
  forest.children.assign(n, {});
  forest.depth.assign(n, 0);
  const auto order = containment_order(forest.intervals);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    const auto& iv = forest.intervals[i];
    while (!stack.empty() && !forest.intervals[stack.back()].contains(iv)) stack.pop_back();
    if (!stack.empty() && forest.intervals[stack.back()] == iv) {
      throw InvalidArgument("build_forest: cube " + cubes[i].id() + " appears twice");
    }
    if (!stack.empty()) {
      const std::size_t p = stack.back();
      forest.parent[i] = static_cast<int>(p);
      forest.children[p].push_back(static_cast<int>(i));
      forest.depth[i] = forest.depth[p] + 1;
    }
    stack.push_back(i);
  }
  return forest;
}

double verify_sparseness(std::span<const DyadicCube> cubes, const DyadicLattice& lattice) {
  const auto forest = build_forest(lattice, cubes);
  double eta = 1.0;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const auto& q = forest.intervals[i];
    const double covered = total_length(child_intervals(forest, i));
    eta = std::min(eta, (q.length() - covered) / q.length());
  }
  return eta;
}

SparseFamily::SparseFamily(DyadicLattice lattice, std::vector<DyadicCube> cubes, double eta)
    : lattice_(std::move(lattice)), eta_(eta), measured_eta_(1.0) {
  require_line(lattice_, "SparseFamily");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("SparseFamily: eta must lie in (0, 1]");
  std::vector<Interval> iv;
  iv.reserve(cubes.size());
  for (const auto& c : cubes) {
    require_member(lattice_, c, "SparseFamily");
    iv.push_back(lattice_.interval(c));
  }
  const auto order = containment_order(iv);
  cubes_.reserve(cubes.size());
  for (std::size_t i : order) cubes_.push_back(std::move(cubes[i]));
  forest_ = build_forest(lattice_, cubes_);
  cores_.resize(cubes_.size());
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    const auto& q = forest_.intervals[i];
    cores_[i] = complement_in(q, child_intervals(forest_, i));
    const double ratio = total_length(cores_[i]) / q.length();
    measured_eta_ = std::min(measured_eta_, ratio);
    if (ratio < eta_ * (1.0 - 1e-12)) {
      throw VerificationError("SparseFamily: cube " + cubes_[i].id() + " keeps only " +
                              std::to_string(ratio) + " of its measure, below eta = " +
                              std::to_string(eta_));
    }
  }
}

int SparseFamily::find(const DyadicCube& cube) const {
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    if (cubes_[i] == cube) return static_cast<int>(i);
  }
  return -1;
}

StepFunction cube_sum(std::span<const Interval> cubes, std::span<const double> coefficients,
                      std::span<const StepFunction* const> multipliers) {
  if (cubes.size() != coefficients.size() ||
      (!multipliers.empty() && multipliers.size() != cubes.size())) {
    throw InvalidArgument("cube_sum: mismatched argument lengths");
  }
  if (cubes.empty()) return StepFunction({0.0, 1.0}, {0.0});
  std::vector<double> mesh;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    mesh.push_back(cubes[i].a());
    mesh.push_back(cubes[i].b());
    if (!multipliers.empty() && multipliers[i]) {
      for (const auto& s : multipliers[i]->segments(cubes[i])) mesh.push_back(s.a);
    }
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  std::vector<double> values(mesh.size() - 1, 0.0);
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (coefficients[i] == 0.0) continue;
    auto lo = static_cast<std::size_t>(
        std::lower_bound(mesh.begin(), mesh.end(), cubes[i].a()) - mesh.begin());
    auto hi = static_cast<std::size_t>(
        std::lower_bound(mesh.begin(), mesh.end(), cubes[i].b()) - mesh.begin());
    const StepFunction* m = multipliers.empty() ? nullptr : multipliers[i];
    for (std::size_t c = lo; c < hi; ++c) {
      const double factor = m ? (*m)(0.5 * (mesh[c] + mesh[c + 1])) : 1.0;
      values[c] += coefficients[i] * factor;
    }
  }
  return StepFunction(std::move(mesh), std::move(values), 0.0);
}

double split_sparseness_bound(double eta, int m) {
  if (!(eta > 0.0 && eta <= 1.0) || m < 1) {
    throw InvalidArgument("split_sparseness_bound: need 0 < eta <= 1 and m >= 1");
  }
  return m / (m + 1.0 / eta - 1.0);
}

std::vector<SparseFamily> split_sparse(const SparseFamily& family, int m) {
  if (m < 2) throw InvalidArgument("split_sparse: m must be >= 2");
  const double bound = split_sparseness_bound(family.eta(), m);
  const auto& forest = family.forest();
  const auto cubes = family.cubes();
  const auto& lattice = family.lattice();
  std::vector<std::vector<DyadicCube>> parts(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    parts[static_cast<std::size_t>(forest.depth[i] % m)].push_back(cubes[i]);
  }
  bool ok = true;
  for (const auto& part : parts) ok = ok && verify_sparseness(part, lattice) >= bound * (1 - 1e-12);
  if (!ok) {
    // Greedy fallback: place cubes top-down into the first family (starting at
    // the residue class) that stays above the bound.
    for (auto& part : parts) part.clear();
    std::vector<std::size_t> order(cubes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return forest.depth[x] < forest.depth[y]; });
    for (std::size_t i : order) {
      bool placed = false;
      for (int t = 0; t < m && !placed; ++t) {
        auto& part = parts[static_cast<std::size_t>((forest.depth[i] + t) % m)];
        part.push_back(cubes[i]);
        if (verify_sparseness(part, lattice) >= bound * (1 - 1e-12)) {
          placed = true;
        } else {
          part.pop_back();
        }
      }
      if (!placed) {
        throw VerificationError("split_sparse: no family can take cube " + cubes[i].id() +
                                " at sparseness " + std::to_string(bound));
      }
    }
  }
  std::vector<SparseFamily> out;
  out.reserve(parts.size());
  for (auto& part : parts) out.emplace_back(lattice, std::move(part), bound);
  return out;
}

std::vector<SelectedCube> sppr_select(const SparseFamily& family, const StepFunction& phi,
                                      double gamma) {
  if (family.measured_eta() < 0.875) {
    throw InvalidArgument("sppr_select: family must be at least 7/8-sparse, measured " +
                          std::to_string(family.measured_eta()));
  }
  if (!(gamma > 0.0)) throw InvalidArgument("sppr_select: gamma must be positive");
  std::vector<DyadicCube> selected;
  std::vector<double> masses;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& q = family.interval(i);
    const double mass = phi.integrate(q);
    const double avg = mass / q.length();
    if (gamma <= avg && avg <= 4.0 * gamma) {
      selected.push_back(family.cubes()[i]);
      masses.push_back(mass);
    }
  }
  const auto& lattice = family.lattice();
  const auto forest = build_forest(lattice, selected);
  std::vector<SelectedCube> out;
  out.reserve(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    SelectedCube sc{selected[i], forest.intervals[i], {}, masses[i], 0.0};
    sc.kept = complement_in(sc.interval, child_intervals(forest, i));
    sc.kept_mass = integrate_over(phi, sc.kept);
    out.push_back(std::move(sc));
  }
  return out;
}

CZDecomposition cz_decompose(const StepFunction& psi, double gamma, const DyadicLattice& lattice,
                             const DyadicCube& window) {
  require_line(lattice, "cz_decompose");
  require_member(lattice, window, "cz_decompose");
  const Interval top = lattice.interval(window);
  const auto top_segs = psi.segments(top);
  for (const auto& s : top_segs) {
    if (s.value < 0) throw DomainError("cz_decompose: psi must be nonnegative");
  }
  if (!(gamma > psi.integrate(top) / top.length())) {
    throw InvalidArgument("cz_decompose: gamma must exceed the average over the window");
  }
  CZDecomposition cz{gamma, window, {}, {}, StepFunction({0.0, 1.0}, {0.0}),
                     StepFunction({0.0, 1.0}, {0.0})};
  std::vector<DyadicCube> stack{window};
  while (!stack.empty()) {
    const DyadicCube cube = stack.back();
    stack.pop_back();
    const Interval iv = lattice.interval(cube);
    if (psi.segments(iv).size() == 1) continue;  // constant: no finer cube exceeds gamma
    auto kids = lattice.children(cube);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      const Interval civ = lattice.interval(*it);
      if (psi.integrate(civ) / civ.length() > gamma) {
        cz.cubes.push_back(*it);
        cz.intervals.push_back(civ);
      } else {
        stack.push_back(*it);
      }
    }
  }
  std::vector<std::size_t> order(cz.cubes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return cz.intervals[x].a() < cz.intervals[y].a(); });
  std::vector<DyadicCube> cubes;
  std::vector<Interval> ivs;
  for (std::size_t i : order) {
    cubes.push_back(cz.cubes[i]);
    ivs.push_back(cz.intervals[i]);
  }
  cz.cubes = std::move(cubes);
  cz.intervals = std::move(ivs);

  // g and b on the mesh of psi within the window, refined at cube ends.
  std::vector<double> mesh;
  for (const auto& s : top_segs) mesh.push_back(s.a);
  mesh.push_back(top.b());
  for (const auto& iv : cz.intervals) {
    mesh.push_back(iv.a());
    mesh.push_back(iv.b());
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  std::vector<double> good(mesh.size() - 1);
  std::vector<double> bad(mesh.size() - 1);
  std::vector<double> averages;
  for (const auto& iv : cz.intervals) averages.push_back(psi.integrate(iv) / iv.length());
  for (std::size_t c = 0; c + 1 < mesh.size(); ++c) {
    const double mid = 0.5 * (mesh[c] + mesh[c + 1]);
    const double v = psi(mid);
    auto it = std::upper_bound(cz.intervals.begin(), cz.intervals.end(), mid,
                               [](double x, const Interval& iv) { return x < iv.a(); });
    if (it != cz.intervals.begin() && std::prev(it)->contains(mid)) {
      const double avg = averages[static_cast<std::size_t>(std::prev(it) - cz.intervals.begin())];
      good[c] = avg;
      bad[c] = v - avg;
    } else {
      good[c] = v;
      bad[c] = 0.0;
    }
  }
  cz.good = StepFunction(mesh, std::move(good), 0.0);
  cz.bad = StepFunction(std::move(mesh), std::move(bad), 0.0);
  return cz;
}

VanishingReport vanishing_check(const CubeFunctions& lambda, const SparseFamily& family,
                                const CZDecomposition& cz) {
  if (cz.window.lattice_id != family.lattice().id()) {
    throw InvalidArgument("vanishing_check: family and decomposition use different lattices");
  }
  VanishingReport out;
  if (family.empty()) return out;
  std::vector<Interval> cubes;
  std::vector<double> coeff;
  std::vector<double> coeff_abs;
  std::vector<const StepFunction*> mult;
  const StepFunction abs_b = cz.bad.map_values([](double v) { return std::abs(v); });
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto it = lambda.find(family.cubes()[i]);
    if (it == lambda.end()) {
      throw InvalidArgument("vanishing_check: no multiplier for cube " + family.cubes()[i].id());
    }
    const auto& q = family.interval(i);
    cubes.push_back(q);
    coeff.push_back(cz.bad.integrate(q) / q.length());
    coeff_abs.push_back(abs_b.integrate(q) / q.length());
    mult.push_back(&it->second);
  }
  const StepFunction tb = cube_sum(cubes, coeff, mult);
  const StepFunction tabs = cube_sum(cubes, coeff_abs, mult);
  auto in_omega = [&](double x) {
    return std::any_of(cz.intervals.begin(), cz.intervals.end(),
                       [x](const Interval& iv) { return iv.contains(x); });
  };
  const auto bp = tb.breakpoints();
  const auto vals = tb.values();
  for (std::size_t c = 0; c < vals.size(); ++c) {
    const double mid = 0.5 * (bp[c] + bp[c + 1]);
    if (in_omega(mid)) continue;
    out.max_abs = std::max(out.max_abs, std::abs(vals[c]));
    out.scale = std::max(out.scale, std::abs(tabs(mid)));
  }
  out.vanishes = out.max_abs <= 1e-12 * out.scale;
  return out;
}

LevelPartition level_families(const SparseFamily& family, const StepFunction& phi, double base) {
  if (!(base > 1.0)) throw InvalidArgument("level_families: base must exceed 1");
  std::map<int, std::vector<DyadicCube>> levels;
  LevelPartition out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& q = family.interval(i);
    const double avg = phi.integrate(q) / q.length();
    if (avg < 0) throw DomainError("level_families: phi must be nonnegative");
    if (avg == 0.0) {
      out.zero_average.push_back(family.cubes()[i]);
      continue;
    }
    // base^{-k-1} < avg <= base^{-k}
    int k = static_cast<int>(std::ceil(-std::log(avg) / std::log(base)));
    while (std::pow(base, -k) < avg) --k;
    while (std::pow(base, -k - 1) >= avg) ++k;
    levels[k].push_back(family.cubes()[i]);
  }
  for (auto& [k, cubes] : levels) {
    LevelFamily lf{k, cubes, maximal_members(family.lattice(), cubes)};
    out.families.push_back(std::move(lf));
  }
  return out;
}

std::vector<double> overlap_distribution(std::span<const DyadicCube> cubes,
                                         const DyadicLattice& lattice, const DyadicCube& root) {
  require_line(lattice, "overlap_distribution");
  const Interval r = lattice.interval(root);
  std::vector<Interval> inside;
  for (const auto& c : cubes) {
    require_member(lattice, c, "overlap_distribution");
    const Interval iv = lattice.interval(c);
    if (r.contains(iv)) inside.push_back(iv);
  }
  if (inside.empty()) return {};
  const std::vector<double> ones(inside.size(), 1.0);
  const StepFunction count = cube_sum(inside, ones);
  const auto bp = count.breakpoints();
  const auto vals = count.values();
  std::size_t max_count = 0;
  for (double v : vals) max_count = std::max(max_count, static_cast<std::size_t>(std::lround(v)));
  std::vector<double> out(max_count, 0.0);
  for (std::size_t c = 0; c < vals.size(); ++c) {
    const auto k = static_cast<std::size_t>(std::lround(vals[c]));
    for (std::size_t m = 0; m < k; ++m) out[m] += bp[c + 1] - bp[c];
  }
  return out;
}

SparseFamily random_sparse_family(const DyadicLattice& lattice, const DyadicCube& root,
                                  const RandomFamilyConfig& config, std::mt19937_64& rng) {
  require_line(lattice, "random_sparse_family");
  if (!(config.eta > 0.0 && config.eta < 1.0)) {
    throw InvalidArgument("random_sparse_family: eta must lie in (0, 1)");
  }
  // Smallest gap t with at least one admissible descendant: (1 - eta) 2^t >= 1.
  int min_gap = 1;
  while ((1.0 - config.eta) * std::ldexp(1.0, min_gap) < 1.0) ++min_gap;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DyadicCube> out{root};
  std::vector<DyadicCube> frontier{root};
  while (!frontier.empty() && out.size() < config.max_cubes) {
    const DyadicCube q = frontier.front();
    frontier.erase(frontier.begin());
    if (unit(rng) > config.descend_probability) continue;
    const int gap = min_gap + static_cast<int>(rng() % 2);
    if (q.generation + gap - root.generation > config.max_depth) continue;
    const auto budget =
        static_cast<std::uint64_t>(std::floor((1.0 - config.eta) * std::ldexp(1.0, gap)));
    const std::uint64_t count = 1 + rng() % budget;
    const std::uint64_t slots = std::uint64_t{1} << gap;
    std::set<std::uint64_t> picks;
    while (picks.size() < count) picks.insert(rng() % slots);
    const Interval qi = lattice.interval(q);
    const double h = qi.length() / static_cast<double>(slots);
    for (std::uint64_t s : picks) {
      const double mid = qi.a() + (static_cast<double>(s) + 0.5) * h;
      DyadicCube c = lattice.cube_containing(mid, q.generation + gap);
      if (out.size() >= config.max_cubes) break;
      out.push_back(c);
      frontier.push_back(c);
    }
  }
  return SparseFamily(lattice, std::move(out), config.eta);
}

StepFunction random_mesh_function(const DyadicLattice& lattice, const DyadicCube& root, int depth,
                                  std::mt19937_64& rng, double zero_fraction) {
  require_line(lattice, "random_mesh_function");
  if (depth < 0 || depth > 20) throw InvalidArgument("random_mesh_function: depth must be in [0, 20]");
  const Interval r = lattice.interval(root);
  const std::size_t pieces = std::size_t{1} << depth;
  std::vector<double> bp(pieces + 1);
  std::vector<double> vals(pieces);
  const double h = r.length() / static_cast<double>(pieces);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i <= pieces; ++i) bp[i] = r.a() + h * static_cast<double>(i);
  bp.back() = r.b();
  for (auto& v : vals) {
    // log-uniform on [2^-4, 2^4]
    v = unit(rng) < zero_fraction ? 0.0 : std::exp2(8.0 * unit(rng) - 4.0);
  }
  return StepFunction(std::move(bp), std::move(vals), 0.0);
}

}  // namespace sharpweights
