// SPDX-License-Identifier: MIT
#include "sharpweights/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sharpweights/error.hpp"

namespace sharpweights {

std::string DyadicCube::id() const {
  std::ostringstream os;
  os << 'L' << lattice_id << "/g" << generation << "/i";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i) os << ',';
    os << index[i];
  }
  return os.str();
}

DyadicCube DyadicCube::parse(const std::string& id) {
  DyadicCube c;
  std::istringstream is(id);
  char ch = 0;
  auto expect = [&](char want) {
    if (!(is >> ch) || ch != want) throw InvalidArgument("malformed cube id: " + id);
  };
  expect('L');
  if (!(is >> c.lattice_id)) throw InvalidArgument("malformed cube id: " + id);
  expect('/');
  expect('g');
  if (!(is >> c.generation)) throw InvalidArgument("malformed cube id: " + id);
  expect('/');
  expect('i');
  std::int64_t v = 0;
  while (is >> v) {
    c.index.push_back(v);
    if (!(is >> ch)) break;
    if (ch != ',') throw InvalidArgument("malformed cube id: " + id);
  }
  if (c.index.empty()) throw InvalidArgument("malformed cube id: " + id);
  return c;
}

DyadicLattice::DyadicLattice(int id, std::vector<int> shift, double base_scale,
                             double origin, int generation_cap)
    : id_(id), shift_(std::move(shift)), base_(base_scale), origin_(origin), cap_(generation_cap) {
  if (shift_.empty()) throw InvalidArgument("DyadicLattice: dimension must be >= 1");
  for (int t : shift_) {
    if (t < 0 || t > 2) throw InvalidArgument("DyadicLattice: shifts must be in {0,1,2}");
  }
  if (!(base_ > 0) || !std::isfinite(base_)) {
    throw InvalidArgument("DyadicLattice: base scale must be positive");
  }
  if (cap_ < 1 || cap_ > 1000) throw InvalidArgument("DyadicLattice: bad generation cap");
}

DyadicLattice DyadicLattice::standard(const Interval& top, int id, int generation_cap) {
  return DyadicLattice(id, {0}, top.length(), top.a(), generation_cap);
}

void DyadicLattice::check_generation(int generation) const {
  if (generation > cap_ || generation < -cap_) {
    throw InvalidArgument("dyadic generation " + std::to_string(generation) +
                          " exceeds the cap " + std::to_string(cap_));
  }
}

void DyadicLattice::check_member(const DyadicCube& cube) const {
  if (cube.lattice_id != id_) {
    throw InvalidArgument("cube " + cube.id() + " does not belong to lattice " +
                          std::to_string(id_));
  }
  if (static_cast<int>(cube.index.size()) != dimension()) {
    throw InvalidArgument("cube " + cube.id() + " has the wrong dimension");
  }
  check_generation(cube.generation);
}

double DyadicLattice::side_length(int generation) const {
  check_generation(generation);
  return std::ldexp(base_, -generation);
}

double DyadicLattice::offset(int generation, int axis) const {
  const double t = static_cast<double>(shift_[static_cast<std::size_t>(axis)]) / 3.0;
  return (generation % 2 == 0) ? t : -t;
}

Interval DyadicLattice::extent(const DyadicCube& cube, int axis) const {
  check_member(cube);
  const double h = side_length(cube.generation);
  const double m = static_cast<double>(cube.index[static_cast<std::size_t>(axis)]);
  const double off = offset(cube.generation, axis);
  const double a = origin_ + h * m + h * off;
  const double b = origin_ + h * (m + 1.0) + h * off;
  return {a, b};
}

Interval DyadicLattice::interval(const DyadicCube& cube) const {
  if (dimension() != 1) throw InvalidArgument("interval(): lattice is not one-dimensional");
  return extent(cube, 0);
}

double DyadicLattice::volume(const DyadicCube& cube) const {
  return std::pow(side_length(cube.generation), dimension());
}

DyadicCube DyadicLattice::cube_containing(std::span<const double> x, int generation) const {
  if (static_cast<int>(x.size()) != dimension()) {
    throw InvalidArgument("cube_containing: point has the wrong dimension");
  }
  const double h = side_length(generation);
  DyadicCube c{id_, generation, {}};
  c.index.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double off = offset(generation, static_cast<int>(i));
    auto m = static_cast<std::int64_t>(std::floor((x[i] - origin_) / h - off));
    // Guard the floor against rounding at cube boundaries.
    const double a = origin_ + h * static_cast<double>(m) + h * off;
    if (x[i] < a) --m;
    else if (x[i] >= origin_ + h * static_cast<double>(m + 1) + h * off) ++m;
    c.index[i] = m;
  }
  return c;
}

DyadicCube DyadicLattice::cube_containing(double x, int generation) const {
  return cube_containing(std::span<const double>(&x, 1), generation);
}

std::vector<DyadicCube> DyadicLattice::children(const DyadicCube& cube) const {
  check_member(cube);
  check_generation(cube.generation + 1);
  const auto d = static_cast<std::size_t>(dimension());
  std::vector<DyadicCube> out;
  out.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    DyadicCube c{id_, cube.generation + 1, std::vector<std::int64_t>(d)};
    for (std::size_t i = 0; i < d; ++i) {
      // Left child index is 2m + s_g t_i, where s_g is the parent's sign.
      const std::int64_t t = shift_[i];
      const std::int64_t left = 2 * cube.index[i] + (cube.generation % 2 == 0 ? t : -t);
      c.index[i] = left + static_cast<std::int64_t>((mask >> i) & 1U);
    }
    out.push_back(std::move(c));
  }
  return out;
}

DyadicCube DyadicLattice::parent(const DyadicCube& cube) const {
  check_member(cube);
  check_generation(cube.generation - 1);
  const int pg = cube.generation - 1;
  DyadicCube p{id_, pg, std::vector<std::int64_t>(cube.index.size())};
  for (std::size_t i = 0; i < cube.index.size(); ++i) {
    const std::int64_t t = shift_[i];
    const std::int64_t shifted = cube.index[i] - (pg % 2 == 0 ? t : -t);
    // floor division by 2
    p.index[i] = shifted >= 0 ? shifted / 2 : -((-shifted + 1) / 2);
  }
  return p;
}

bool DyadicLattice::is_ancestor(const DyadicCube& outer, const DyadicCube& inner) const {
  check_member(outer);
  check_member(inner);
  if (inner.generation < outer.generation) return false;
  DyadicCube c = inner;
  while (c.generation > outer.generation) c = parent(c);
  return c.index == outer.index;
}

std::vector<DyadicCube> DyadicLattice::cubes_meeting(std::span<const Interval> box,
                                                     int generation) const {
  if (static_cast<int>(box.size()) != dimension()) {
    throw InvalidArgument("cubes_meeting: box has the wrong dimension");
  }
  const double h = side_length(generation);
  std::vector<std::int64_t> lo(box.size());
  std::vector<std::int64_t> hi(box.size());
  std::size_t total = 1;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double off = offset(generation, static_cast<int>(i));
    lo[i] = static_cast<std::int64_t>(std::floor((box[i].a() - origin_) / h - off));
    hi[i] = static_cast<std::int64_t>(std::ceil((box[i].b() - origin_) / h - off)) - 1;
    total *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
    if (total > (std::size_t{1} << 24)) throw InvalidArgument("cubes_meeting: too many cubes");
  }
  std::vector<DyadicCube> out;
  out.reserve(total);
  std::vector<std::int64_t> cur = lo;
  while (true) {
    DyadicCube c{id_, generation, cur};
    bool meets = true;
    for (std::size_t i = 0; i < box.size() && meets; ++i) {
      meets = extent(c, static_cast<int>(i)).overlap(box[i]) > 0;
    }
    if (meets) out.push_back(c);
    std::size_t axis = 0;
    while (axis < cur.size() && ++cur[axis] > hi[axis]) {
      cur[axis] = lo[axis];
      ++axis;
    }
    if (axis == cur.size()) break;
  }
  return out;
}

std::vector<DyadicLattice> three_lattices(int d, double base_scale, double origin) {
  if (d < 1 || d > 12) throw InvalidArgument("three_lattices: dimension must be in [1, 12]");
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) count *= 3;
  std::vector<DyadicLattice> out;
  out.reserve(count);
  for (std::size_t id = 0; id < count; ++id) {
    std::vector<int> shift(static_cast<std::size_t>(d));
    std::size_t r = id;
    for (auto& t : shift) {
      t = static_cast<int>(r % 3);
      r /= 3;
    }
    out.emplace_back(static_cast<int>(id), std::move(shift), base_scale, origin);
  }
  return out;
}

CoverResult dyadic_cover(std::span<const Interval> box, std::span<const DyadicLattice> lattices) {
  if (lattices.empty()) throw InvalidArgument("dyadic_cover: no lattices");
  const auto& first = lattices.front();
  if (static_cast<int>(box.size()) != first.dimension()) {
    throw InvalidArgument("dyadic_cover: box has the wrong dimension");
  }
  double side = 0.0;
  double volume = 1.0;
  std::vector<double> corner(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    side = std::max(side, box[i].length());
    volume *= box[i].length();
    corner[i] = box[i].a();
  }
  // Finest generation whose side is at least the longest box side.
  int g = static_cast<int>(std::floor(std::log2(first.base_scale() / side)));
  while (g > -first.generation_cap() && std::ldexp(first.base_scale(), -g) < side) --g;
  for (; g >= -first.generation_cap(); --g) {
    for (const auto& lattice : lattices) {
      const DyadicCube c = lattice.cube_containing(corner, g);
      bool inside = true;
      for (std::size_t i = 0; i < box.size() && inside; ++i) {
        inside = lattice.extent(c, static_cast<int>(i)).contains(box[i]);
      }
      if (inside) return {lattice.id(), c, lattice.volume(c) / volume};
    }
  }
  throw InvalidArgument("dyadic_cover: no covering cube within the generation cap");
}

CoverResult dyadic_cover(const Interval& q, std::span<const DyadicLattice> lattices) {
  return dyadic_cover(std::span<const Interval>(&q, 1), lattices);
}

}  // namespace sharpweights
