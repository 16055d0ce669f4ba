// SPDX-License-Identifier: MIT
#include "sharpweights/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "sharpweights/error.hpp"

namespace sharpweights {

namespace {

struct Piece {
  double a;
  double b;
  double value;
};

// Mirrors pieces of [0, 2^{N+1}) about 2^{N+1} and returns the periodic weight
// on [0, 2^{N+2}).
StepFunction mirror_periodic(const std::vector<Piece>& half, int N) {
  const double top = std::ldexp(1.0, N + 2);
  std::vector<double> bp;
  std::vector<double> vals;
  bp.reserve(2 * half.size() + 1);
  vals.reserve(2 * half.size());
  for (const auto& pc : half) {
    bp.push_back(pc.a);
    vals.push_back(pc.value);
  }
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    bp.push_back(top - it->b);
    vals.push_back(it->value);
  }
  bp.push_back(top);
  return StepFunction::periodic(std::move(bp), std::move(vals));
}

// Appends the pieces of J_k in order: I_k, (L^-)^k..(L^-)^1, (L^+)^1..(L^+)^k.
template <class LevelFn>
void append_block(std::vector<Piece>& out, const JkPartition& part, double scale,
                  double head_level, LevelFn&& level) {
  out.push_back({part.head.a(), part.head.b(), scale * head_level});
  for (int j = part.k; j >= 1; --j) {
    const auto& iv = part.left[static_cast<std::size_t>(j - 1)];
    out.push_back({iv.a(), iv.b(), scale * level(j)});
  }
  for (int j = 1; j <= part.k; ++j) {
    const auto& iv = part.right[static_cast<std::size_t>(j - 1)];
    out.push_back({iv.a(), iv.b(), scale * level(j)});
  }
}

}  // namespace

void WeightFamilyParams::validate() const {
  switch (family) {
    case WeightFamily::kSmallP:
      if (!(p > 1.0 && p < 2.0)) throw InvalidArgument("small-p family requires 1 < p < 2");
      if (N < 5 || N > 40) throw InvalidArgument("small-p family requires 5 <= N <= 40");
      break;
    case WeightFamily::kLargeP:
      if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidArgument("large-p family requires p >= 2");
      if (N <= k0(p) + 2 || N > 48) {
        throw InvalidArgument("large-p family requires k0(p) + 2 < N <= 48 (k0 = " +
                              std::to_string(k0(p)) + ")");
      }
      break;
    case WeightFamily::kPower:
      if (!(eps > 0.0 && eps <= 0.5)) throw InvalidArgument("power family requires 0 < eps <= 1/2");
      if (!(cutoff >= 1024.0) || !std::isfinite(cutoff)) {
        throw InvalidArgument("power family requires cutoff >= 2^10");
      }
      break;
  }
}

double JkPartition::level_length(int j) const {
  if (j < 1 || j > k) throw InvalidArgument("level_length: j out of range");
  const auto idx = static_cast<std::size_t>(j - 1);
  return left[idx].length() + right[idx].length();
}

std::vector<Interval> JkPartition::tiles() const {
  std::vector<Interval> out;
  out.reserve(2 * left.size() + 1);
  out.push_back(head);
  for (auto it = left.rbegin(); it != left.rend(); ++it) out.push_back(*it);
  for (const auto& iv : right) out.push_back(iv);
  return out;
}

JkPartition partition_Jk(int k, double head_length) {
  if (k < 2 || k > 60) throw InvalidArgument("partition_Jk: k must be in [2, 60]");
  const double start = std::ldexp(1.0, k);
  const double end = std::ldexp(1.0, k + 1);
  if (!(head_length > 0.0) || !(head_length < start)) {
    throw InvalidArgument("partition_Jk: head length must lie in (0, 2^k)");
  }
  const double rest = start - head_length;  // |L_k|
  const double half = 0.5 * rest;           // |L_k^-| = |L_k^+|
  const double mid = start + head_length + half;
  JkPartition part;
  part.k = k;
  part.head = Interval(start, start + head_length);
  // Boundaries mid -/+ half (1 - 2^{-j}), j = 0..k-1; the terminal pieces
  // close the gap to I_k and to 2^{k+1}.
  auto inner = [&](int j) { return half * (1.0 - std::ldexp(1.0, -j)); };
  for (int j = 1; j <= k; ++j) {
    const double outer_left = (j == k) ? start + head_length : mid - inner(j);
    const double outer_right = (j == k) ? end : mid + inner(j);
    part.left.emplace_back(outer_left, mid - inner(j - 1));
    part.right.emplace_back(mid + inner(j - 1), outer_right);
  }
  return part;
}

int k0(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("k0: p must be > 1");
  for (int k = 1; k < 4096; ++k) {
    if (std::pow(static_cast<double>(k), p - 1.0) < std::ldexp(1.0, k - 1)) return k;
  }
  throw InvalidArgument("k0: no admissible k below 4096");
}

int guarded_floor(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::floor(x));
}

ExtremalWeight build_weight_small_p(int N, double p) {
  WeightFamilyParams{WeightFamily::kSmallP, N, p}.validate();
  std::vector<Piece> half{{0.0, 8.0, 1.0}};
  ExtremalWeight out{StepFunction({0.0, 1.0}, {1.0}), p, N, 3, {}, {}};
  for (int k = 3; k <= N; ++k) {
    const auto part = partition_Jk(k, static_cast<double>(k));
    const double scale = std::exp2(static_cast<double>(k + 1) * (p - 1.0));
    // floor(log2 k) for integer k
    const int threshold = std::bit_width(static_cast<unsigned>(k)) - 1;
    append_block(half, part, scale, std::ldexp(1.0, k + 1), [&](int j) {
      return j >= threshold ? std::ldexp(1.0, j) : static_cast<double>(k);
    });
    out.heads.push_back(part.head);
    out.blocks.emplace_back(std::ldexp(1.0, k), std::ldexp(1.0, k + 1));
  }
  out.weight = mirror_periodic(half, N);
  return out;
}

ExtremalWeight build_weight_large_p(int N, double p) {
  WeightFamilyParams{WeightFamily::kLargeP, N, p}.validate();
  const int kz = k0(p);
  std::vector<Piece> half{{0.0, std::ldexp(1.0, kz + 1), 1.0}};
  ExtremalWeight out{StepFunction({0.0, 1.0}, {1.0}), p, N, kz + 1, {}, {}};
  for (int k = kz + 1; k <= N; ++k) {
    const double head = std::pow(static_cast<double>(k), p - 1.0);
    const auto part = partition_Jk(k, head);
    const double scale = std::exp2(static_cast<double>(k + 1) * (p - 1.0));
    const int threshold = guarded_floor((p - 1.0) * std::log2(static_cast<double>(k)));
    append_block(half, part, scale, std::ldexp(1.0, k + 1), [&](int j) {
      return j >= threshold ? std::ldexp(1.0, j) : head;
    });
    out.heads.push_back(part.head);
    out.blocks.emplace_back(std::ldexp(1.0, k), std::ldexp(1.0, k + 1));
  }
  out.weight = mirror_periodic(half, N);
  return out;
}

PowerWeight build_power_weight(double eps, double cutoff, double ratio) {
  WeightFamilyParams params{WeightFamily::kPower};
  params.eps = eps;
  params.cutoff = cutoff;
  params.validate();
  if (!(ratio > 1.0) || !(ratio <= 2.0)) {
    throw InvalidArgument("build_power_weight: mesh ratio must lie in (1, 2]");
  }
  // Mesh 1 = x_0 < x_1 < ... with x_i = ratio^i, snapped to 2^{i/m} when the
  // ratio is an m-th root of two so that powers of two are hit exactly.
  const double step = std::log2(ratio);
  const double per_octave = 1.0 / step;
  const double m = std::round(per_octave);
  const bool octave_aligned = std::abs(per_octave - m) < 1e-9;
  std::vector<double> tail{1.0};
  for (int i = 1;; ++i) {
    const double x = octave_aligned ? std::exp2(static_cast<double>(i) / m)
                                    : std::exp2(static_cast<double>(i) * step);
    if (x >= cutoff * (1.0 - 1e-12)) break;
    tail.push_back(x);
  }
  tail.push_back(cutoff);

  auto average = [eps](double a, double b) {
    // (b^eps - a^eps) / (eps (b - a)) without cancellation for small eps
    return std::pow(a, eps) * std::expm1(eps * std::log(b / a)) / (eps * (b - a));
  };
  std::vector<double> bp;
  std::vector<double> vals;
  for (std::size_t i = tail.size(); i-- > 1;) {
    bp.push_back(-tail[i]);
    vals.push_back(average(tail[i - 1], tail[i]));
  }
  bp.push_back(-1.0);
  vals.push_back(1.0 / eps);
  for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
    bp.push_back(tail[i]);
    vals.push_back(average(tail[i], tail[i + 1]));
  }
  bp.push_back(cutoff);
  const double outside = std::pow(cutoff, eps - 1.0);
  return {StepFunction(std::move(bp), std::move(vals), outside), eps, cutoff, ratio};
}

StepFunction build_weight(const WeightFamilyParams& params) {
  params.validate();
  switch (params.family) {
    case WeightFamily::kSmallP: return build_weight_small_p(params.N, params.p).weight;
    case WeightFamily::kLargeP: return build_weight_large_p(params.N, params.p).weight;
    case WeightFamily::kPower: return build_power_weight(params.eps, params.cutoff).weight;
  }
  throw InvalidArgument("build_weight: unknown family");
}

}  // namespace sharpweights
