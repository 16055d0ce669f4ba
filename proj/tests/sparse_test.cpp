#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "sharpweights/error.hpp"
#include "sharpweights/operators.hpp"
#include "sharpweights/sparse.hpp"

using namespace sharpweights;

namespace {

const DyadicLattice& unit_lattice() {
  static const DyadicLattice lat = DyadicLattice::standard(Interval(0.0, 1.0));
  return lat;
}

const DyadicCube kTop{0, 0, {0}};

std::vector<DyadicCube> halves_chain(int depth) {
  std::vector<DyadicCube> chain;
  for (int j = 0; j < depth; ++j) chain.push_back(DyadicCube{0, j, {0}});
  return chain;
}

}  // namespace

TEST(VerifySparseness, BasicFamilies) {
  const auto& lat = unit_lattice();
  EXPECT_DOUBLE_EQ(verify_sparseness(std::vector<DyadicCube>{kTop}, lat), 1.0);
  EXPECT_DOUBLE_EQ(verify_sparseness(halves_chain(6), lat), 0.5);
  const auto kids = lat.children(kTop);
  EXPECT_DOUBLE_EQ(verify_sparseness(std::vector<DyadicCube>{kTop, kids[0], kids[1]}, lat), 0.0);
  EXPECT_DOUBLE_EQ(verify_sparseness(std::vector<DyadicCube>{}, lat), 1.0);
}

TEST(VerifySparseness, MixedLatticesRejected) {
  const auto& lat = unit_lattice();
  const std::vector<DyadicCube> mixed{kTop, DyadicCube{1, 1, {0}}};
  EXPECT_THROW(verify_sparseness(mixed, lat), InvalidArgument);
}

TEST(SparseFamily, CorruptedFamilyFailsVerification) {
  const auto& lat = unit_lattice();
  const auto kids = lat.children(kTop);
  EXPECT_THROW(SparseFamily(lat, {kTop, kids[0], kids[1]}, 0.5), VerificationError);
  EXPECT_THROW(SparseFamily(lat, halves_chain(4), 0.75), VerificationError);
}

TEST(SparseFamily, CoresDisjointAndLargeEnough) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto fam = random_sparse_family(unit_lattice(), kTop, {}, rng);
    double total = 0.0;
    std::vector<Interval> all;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      double core = 0.0;
      for (const auto& iv : fam.core(i)) {
        core += iv.length();
        all.push_back(iv);
      }
      EXPECT_GE(core, fam.eta() * fam.interval(i).length() * (1 - 1e-12));
      total += core;
    }
    EXPECT_LE(total, 1.0 + 1e-12);
    std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.a() < b.a(); });
    for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LE(all[i - 1].b(), all[i].a() + 1e-15);
  }
}

TEST(SplitSparse, SingleCube) {
  const SparseFamily one(unit_lattice(), {kTop}, 0.5);
  const auto parts = split_sparse(one, 2);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].size() + parts[1].size(), 1u);
}

TEST(SplitSparse, ChainOfHalves) {
  const SparseFamily chain(unit_lattice(), halves_chain(8), 0.5);
  EXPECT_NEAR(split_sparseness_bound(0.5, 2), 2.0 / 3.0, 1e-15);
  const auto parts = split_sparse(chain, 2);
  ASSERT_EQ(parts.size(), 2u);
  for (const auto& f : parts) {
    EXPECT_GE(verify_sparseness(f.cubes(), unit_lattice()), 2.0 / 3.0 - 1e-12);
  }
}

TEST(SplitSparse, RandomFamiliesPartitionAndBound) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    const auto fam = random_sparse_family(unit_lattice(), kTop, {}, rng);
    for (int m : {2, 3}) {
      const auto parts = split_sparse(fam, m);
      ASSERT_EQ(parts.size(), static_cast<std::size_t>(m));
      std::multiset<DyadicCube> seen;
      for (const auto& f : parts) {
        seen.insert(f.cubes().begin(), f.cubes().end());
        EXPECT_GE(verify_sparseness(f.cubes(), unit_lattice()),
                  split_sparseness_bound(fam.eta(), m) - 1e-12);
      }
      EXPECT_EQ(seen, std::multiset<DyadicCube>(fam.cubes().begin(), fam.cubes().end()));
    }
  }
}

TEST(SpprSelect, SingletonKeepsWholeCube) {
  const SparseFamily one(unit_lattice(), {kTop}, 0.875);
  const auto phi = StepFunction::indicator(Interval(0.0, 1.0));
  const auto sel = sppr_select(one, phi, 0.5);
  ASSERT_EQ(sel.size(), 1u);
  ASSERT_EQ(sel[0].kept.size(), 1u);
  EXPECT_EQ(sel[0].kept[0], Interval(0.0, 1.0));
  EXPECT_LE(sel[0].mass, 8.0 * sel[0].kept_mass);
}

TEST(SpprSelect, RequiresSevenEighths) {
  const SparseFamily chain(unit_lattice(), halves_chain(3), 0.5);
  EXPECT_THROW(sppr_select(chain, StepFunction::indicator(Interval(0.0, 1.0)), 0.5), InvalidArgument);
}

TEST(SpprSelect, RandomInequality) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int t = 0; t < 100; ++t) {
    const auto fam = random_sparse_family(unit_lattice(), kTop, {}, rng);
    const auto phi = random_mesh_function(unit_lattice(), kTop, 10, rng, 0.3);
    const double gamma = u(rng) * phi.integrate(Interval(0.0, 1.0));
    for (const auto& s : sppr_select(fam, phi, gamma)) {
      const double avg = s.mass / s.interval.length();
      EXPECT_GE(avg, gamma * (1 - 1e-12));
      EXPECT_LE(avg, 4.0 * gamma * (1 + 1e-12));
      EXPECT_LE(s.mass, 8.0 * s.kept_mass * (1 + 1e-12));
    }
  }
}

TEST(CzDecompose, WorkedExample) {
  const StepFunction psi({0.0, 0.125, 0.25, 1.0}, {6.0, 2.0, 0.0});
  const auto cz = cz_decompose(psi, 3.0, unit_lattice(), kTop);
  ASSERT_EQ(cz.intervals.size(), 1u);
  EXPECT_EQ(cz.intervals[0], Interval(0.0, 0.25));
  EXPECT_DOUBLE_EQ(cz.bad(0.05), 2.0);
  EXPECT_DOUBLE_EQ(cz.bad(0.2), -2.0);
  EXPECT_DOUBLE_EQ(cz.bad(0.5), 0.0);
  EXPECT_DOUBLE_EQ(cz.good(0.05), 4.0);
  EXPECT_DOUBLE_EQ(cz.good(0.2), 4.0);
  EXPECT_DOUBLE_EQ(cz.good(0.5), 0.0);
}

TEST(CzDecompose, NothingAboveThreshold) {
  const auto psi = StepFunction::constant(1.0, Interval(0.0, 1.0));
  const auto cz = cz_decompose(psi, 2.0, unit_lattice(), kTop);
  EXPECT_TRUE(cz.cubes.empty());
  for (double x = 0.01; x < 1.0; x += 0.1) EXPECT_EQ(cz.bad(x), 0.0);
  EXPECT_THROW(cz_decompose(psi, 1.0, unit_lattice(), kTop), InvalidArgument);
}

TEST(CzDecompose, RandomInvariants) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(1.1, 6.0);
  const auto& lat = unit_lattice();
  for (int t = 0; t < 100; ++t) {
    const auto psi = random_mesh_function(lat, kTop, 9, rng, 0.4);
    const double total = psi.integrate(Interval(0.0, 1.0));
    const double gamma = u(rng) * total;
    const auto cz = cz_decompose(psi, gamma, lat, kTop);
    double covered = 0.0;
    for (std::size_t j = 0; j < cz.cubes.size(); ++j) {
      const auto& iv = cz.intervals[j];
      covered += iv.length();
      EXPECT_NEAR(cz.bad.integrate(iv), 0.0, 1e-12 * std::max(1.0, psi.integrate(iv)));
      EXPECT_GT(psi.integrate(iv) / iv.length(), gamma);
      if (cz.cubes[j].generation > 0) {
        const auto par = lat.interval(lat.parent(cz.cubes[j]));
        EXPECT_LE(psi.integrate(par) / par.length(), gamma * (1 + 1e-12));
      }
      if (j > 0) EXPECT_LE(cz.intervals[j - 1].b(), iv.a());
    }
    EXPECT_LE(covered * gamma, total * (1 + 1e-12));
    for (double x = 0.0005; x < 1.0; x += 0.001) {
      EXPECT_LE(cz.good(x), 2.0 * gamma * (1 + 1e-12));
      EXPECT_NEAR(cz.good(x) + cz.bad(x), psi(x), 1e-12 * std::max(1.0, psi(x)));
    }
  }
}

TEST(Vanishing, ZeroAndParent) {
  const auto& lat = unit_lattice();
  const auto psi = StepFunction::constant(1.0, Interval(0.0, 1.0));
  const auto cz0 = cz_decompose(psi, 2.0, lat, kTop);
  const SparseFamily one(lat, {kTop}, 0.5);
  CubeFunctions lam{{kTop, StepFunction::indicator(Interval(0.0, 1.0))}};
  EXPECT_EQ(vanishing_check(lam, one, cz0).max_abs, 0.0);

  const StepFunction spike({0.0, 0.125, 1.0}, {16.0, 0.0});
  const auto cz = cz_decompose(spike, 4.0, lat, kTop);
  ASSERT_EQ(cz.cubes.size(), 1u);
  const auto parent = lat.parent(cz.cubes[0]);
  const SparseFamily fam(lat, {parent}, 0.5);
  CubeFunctions lp{{parent, StepFunction::indicator(lat.interval(parent), 3.0)}};
  const auto rep = vanishing_check(lp, fam, cz);
  EXPECT_TRUE(rep.vanishes);
  EXPECT_LE(rep.max_abs, 1e-12 * std::max(1.0, rep.scale));
}

TEST(Vanishing, RandomFamilies) {
  std::mt19937_64 rng(31);
  const auto& lat = unit_lattice();
  for (int t = 0; t < 50; ++t) {
    const auto fam = random_sparse_family(lat, kTop, {}, rng);
    const auto psi = random_mesh_function(lat, kTop, 10, rng, 0.5);
    const auto cz = cz_decompose(psi, 2.5 * psi.integrate(Interval(0.0, 1.0)), lat, kTop);
    CubeFunctions lam;
    for (const auto& c : fam.cubes()) {
      lam.emplace(c, random_mesh_function(lat, c, 3, rng));
    }
    EXPECT_TRUE(vanishing_check(lam, fam, cz).vanishes);
  }
}

TEST(LevelFamilies, Conventions) {
  const auto& lat = unit_lattice();
  const SparseFamily one(lat, {kTop}, 0.5);
  const auto lp = level_families(one, StepFunction::indicator(Interval(0.0, 1.0)));
  ASSERT_EQ(lp.families.size(), 1u);
  EXPECT_EQ(lp.families[0].k, 0);
  EXPECT_EQ(lp.families[0].cubes, std::vector<DyadicCube>{kTop});

  const auto exact = level_families(one, StepFunction::constant(0.0625, Interval(0.0, 1.0)));
  ASSERT_EQ(exact.families.size(), 1u);
  EXPECT_EQ(exact.families[0].k, 2);

  const auto zero = level_families(one, StepFunction::constant(0.0, Interval(0.0, 1.0)));
  EXPECT_TRUE(zero.families.empty());
  EXPECT_EQ(zero.zero_average.size(), 1u);
}

TEST(LevelFamilies, PartitionOfPositiveAverages) {
  std::mt19937_64 rng(37);
  const auto& lat = unit_lattice();
  for (int t = 0; t < 50; ++t) {
    const auto fam = random_sparse_family(lat, kTop, {}, rng);
    const auto phi = random_mesh_function(lat, kTop, 12, rng, 0.5).map_values(
        [](double v) { return 0.2 * v; });
    const auto lp = level_families(fam, phi);
    std::multiset<DyadicCube> seen(lp.zero_average.begin(), lp.zero_average.end());
    for (const auto& f : lp.families) {
      for (const auto& c : f.cubes) {
        seen.insert(c);
        const auto iv = lat.interval(c);
        const double avg = phi.integrate(iv) / iv.length();
        EXPECT_GT(avg, std::pow(4.0, -f.k - 1));
        EXPECT_LE(avg, std::pow(4.0, -f.k));
      }
      for (std::size_t i = 0; i < f.maximal.size(); ++i) {
        for (std::size_t j = i + 1; j < f.maximal.size(); ++j) {
          EXPECT_EQ(lat.interval(f.maximal[i]).overlap(lat.interval(f.maximal[j])), 0.0);
        }
      }
    }
    EXPECT_EQ(seen, std::multiset<DyadicCube>(fam.cubes().begin(), fam.cubes().end()));
  }
}

TEST(OverlapDistribution, ChainAndDisjoint) {
  const auto& lat = unit_lattice();
  const auto chain = halves_chain(6);
  const auto m = overlap_distribution(chain, lat, kTop);
  ASSERT_EQ(m.size(), 6u);
  for (int j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(m[j], std::ldexp(1.0, -j));

  const auto kids = lat.children(kTop);
  const auto d = overlap_distribution(kids, lat, kTop);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0], 1.0);
}

TEST(OverlapDistribution, GeometricDecayForSevenEighths) {
  std::mt19937_64 rng(41);
  const auto& lat = unit_lattice();
  for (int t = 0; t < 50; ++t) {
    const auto fam = random_sparse_family(lat, kTop, {}, rng);
    const auto m = overlap_distribution(fam.cubes(), lat, kTop);
    for (std::size_t k = 0; k < m.size(); ++k) {
      EXPECT_LE(m[k], std::pow(0.125, static_cast<double>(k)) * (1 + 1e-12));
    }
  }
}
