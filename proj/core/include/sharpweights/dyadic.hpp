// SPDX-License-Identifier: MIT
//
// Dyadic lattices realised as shifted standard grids.
//
// Lattice t (t in {0,1,2}^d) at generation g has side h = base * 2^-g and
// cubes prod_i [h (m_i + s_g t_i / 3), h (m_i + 1 + s_g t_i / 3)) with the
// sign s_g = (-1)^g. The alternating sign makes consecutive generations nest
// exactly, and the union of the three shifts puts a cube boundary every h/3,
// which is what gives the 3^d covering bound.
#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sharpweights/step_function.hpp"

namespace sharpweights {

struct DyadicCube {
  int lattice_id = 0;
  int generation = 0;
  std::vector<std::int64_t> index;

  // "L{lattice}/g{generation}/i{index}", index components joined by ','.
  [[nodiscard]] std::string id() const;
  static DyadicCube parse(const std::string& id);

  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

class DyadicLattice {
 public:
  static constexpr int kDefaultGenerationCap = 60;

  DyadicLattice(int id, std::vector<int> shift, double base_scale = 1.0,
                double origin = 0.0, int generation_cap = kDefaultGenerationCap);

  // Unshifted one-dimensional lattice whose generation-0 cube is `top`.
  static DyadicLattice standard(const Interval& top, int id = 0,
                                int generation_cap = kDefaultGenerationCap);

  [[nodiscard]] int id() const { return id_; }
  [[nodiscard]] int dimension() const { return static_cast<int>(shift_.size()); }
  [[nodiscard]] std::span<const int> shift() const { return shift_; }
  [[nodiscard]] double base_scale() const { return base_; }
  [[nodiscard]] double origin() const { return origin_; }
  [[nodiscard]] int generation_cap() const { return cap_; }

  [[nodiscard]] double side_length(int generation) const;
  [[nodiscard]] Interval extent(const DyadicCube& cube, int axis) const;
  // One-dimensional lattices only.
  [[nodiscard]] Interval interval(const DyadicCube& cube) const;
  [[nodiscard]] double volume(const DyadicCube& cube) const;

  [[nodiscard]] DyadicCube cube_containing(std::span<const double> x, int generation) const;
  [[nodiscard]] DyadicCube cube_containing(double x, int generation) const;

  [[nodiscard]] std::vector<DyadicCube> children(const DyadicCube& cube) const;
  [[nodiscard]] DyadicCube parent(const DyadicCube& cube) const;
  // Every cube is an ancestor of itself.
  [[nodiscard]] bool is_ancestor(const DyadicCube& outer, const DyadicCube& inner) const;

  // Cubes of the given generation meeting the box (one interval per axis).
  [[nodiscard]] std::vector<DyadicCube> cubes_meeting(std::span<const Interval> box,
                                                      int generation) const;

 private:
  [[nodiscard]] double offset(int generation, int axis) const;
  void check_generation(int generation) const;
  void check_member(const DyadicCube& cube) const;

  int id_;
  std::vector<int> shift_;
  double base_;
  double origin_;
  int cap_;
};

// The 3^d shifted lattices of the covering lemma, ids 0 .. 3^d - 1.
std::vector<DyadicLattice> three_lattices(int d, double base_scale = 1.0, double origin = 0.0);

struct CoverResult {
  int lattice_id;
  DyadicCube cube;
  double volume_ratio;  // |R| / |Q|
};

// Smallest cube R (over all supplied lattices) containing the box; ties go to
// the lowest lattice id.
CoverResult dyadic_cover(std::span<const Interval> box, std::span<const DyadicLattice> lattices);
CoverResult dyadic_cover(const Interval& q, std::span<const DyadicLattice> lattices);

}  // namespace sharpweights
