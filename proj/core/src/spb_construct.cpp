// SPDX-License-Identifier: MIT
#include "sharpweights/spb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sharpweights/detail/parallel.hpp"
#include "sharpweights/error.hpp"

namespace sharpweights {

namespace {

struct Block {
  int gen;
  std::int64_t index;
};

struct Context {
  const MatrixWeight& w;
  std::vector<Matrix> wp;
  std::vector<Vector> g;  // W^{-1/p} f per piece

  [[nodiscard]] std::size_t first(const Block& b) const {
    return static_cast<std::size_t>(b.index) << (w.depth() - b.gen);
  }
  [[nodiscard]] std::size_t size(const Block& b) const {
    return std::size_t{1} << (w.depth() - b.gen);
  }
};

Context make_context(const MatrixWeight& w, double p, const VectorField& f) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("exponent must satisfy 1 < p < inf");
  if (f.size() != w.piece_count()) throw InvalidArgument("vector field does not match the mesh");
  for (const auto& v : f) {
    if (v.size() != w.n()) throw InvalidArgument("vector field has the wrong dimension");
  }
  Context ctx{w, w.powers(1.0 / p), {}};
  const auto wm = w.powers(-1.0 / p);
  ctx.g.reserve(f.size());
  for (std::size_t y = 0; y < f.size(); ++y) ctx.g.push_back(wm[y] * f[y]);
  return ctx;
}

Block check_cube(const DyadicCube& q, const MatrixWeight& w) {
  if (q.lattice_id != 0 || q.index.size() != 1) {
    throw InvalidArgument("cube must belong to the weight's standard lattice");
  }
  if (q.generation < 0 || q.generation > w.depth()) {
    throw InvalidArgument("cube generation lies outside 0..mesh depth");
  }
  if (q.index[0] < 0 || q.index[0] >= (std::int64_t{1} << q.generation)) {
    throw InvalidArgument("cube lies outside the base interval");
  }
  return {q.generation, q.index[0]};
}

double local_max(const Context& ctx, const Block& q, std::size_t k) {
  double best = 0.0;
  for (int gen = q.gen; gen <= ctx.w.depth(); ++gen) {
    const std::size_t len = std::size_t{1} << (ctx.w.depth() - gen);
    const std::size_t lo = (k / len) * len;
    double acc = 0.0;
    for (std::size_t y = lo; y < lo + len; ++y) acc += (ctx.wp[k] * ctx.g[y]).norm();
    best = std::max(best, acc / static_cast<double>(len));
  }
  return best;
}

struct Node {
  Block block;
  ReducingOperator op;
  double average;  // avg_R |V_R^{-1} W^{-1/p} f|
};

// Maximal sub-blocks of `b` (strictly inside) whose phi-average exceeds thr.
void stopping_blocks(const Block& b, const std::vector<double>& prefix, std::size_t origin,
                     double thr, int depth, std::vector<Block>& out) {
  if (b.gen >= depth) return;
  for (std::int64_t c = 2 * b.index; c < 2 * b.index + 2; ++c) {
    const Block child{b.gen + 1, c};
    const std::size_t len = std::size_t{1} << (depth - child.gen);
    const std::size_t lo = (static_cast<std::size_t>(c) << (depth - child.gen)) - origin;
    const double avg = (prefix[lo + len] - prefix[lo]) / static_cast<double>(len);
    if (avg > thr) {
      out.push_back(child);
    } else {
      stopping_blocks(child, prefix, origin, thr, depth, out);
    }
  }
}

}  // namespace

double local_cg_maximal(const MatrixWeight& w, double p, const VectorField& f,
                        const DyadicCube& q, std::size_t k) {
  const Block b = check_cube(q, w);
  const auto ctx = make_context(w, p, f);
  if (k < ctx.first(b) || k >= ctx.first(b) + ctx.size(b)) {
    throw InvalidArgument("local_cg_maximal: piece lies outside the cube");
  }
  return local_max(ctx, b, k);
}

SpbResult spb_construct(const DyadicCube& q, const MatrixWeight& w, double p,
                        const VectorField& f, const SpbConfig& config) {
  const Block top = check_cube(q, w);
  const auto ctx = make_context(w, p, f);
  const DyadicLattice lattice = w.lattice();
  const int depth = w.depth();

  std::vector<Node> nodes;
  std::vector<Block> pending{top};
  double worst_fraction = 0.0;
  while (!pending.empty()) {
    const Block b = pending.back();
    pending.pop_back();
    if (b.gen > depth) throw VerificationError("spb_construct: iteration exceeded the mesh depth");
    const DyadicCube cube{0, b.gen, {b.index}};
    const Interval iv = lattice.interval(cube);
    const auto op = reducing_operator(iv, p, w, config.directions, config.seed);
    const Matrix vinv = op.a.inverse();  // any invertible V gives the bound
    const std::size_t lo = ctx.first(b);
    const std::size_t len = ctx.size(b);
    std::vector<double> prefix(len + 1, 0.0);
    for (std::size_t y = 0; y < len; ++y) prefix[y + 1] = prefix[y] + (vinv * ctx.g[lo + y]).norm();
    const double avg = prefix[len] / static_cast<double>(len);

    std::vector<Block> stops;
    stopping_blocks(b, prefix, lo, 2.0 * avg, depth, stops);
    std::size_t covered = 0;
    for (const auto& s : stops) covered += ctx.size(s);
    if (2 * covered > len) {
      throw VerificationError("spb_construct: stopping set covers more than half of a cube");
    }
    worst_fraction = std::max(worst_fraction, static_cast<double>(covered) / static_cast<double>(len));
    nodes.push_back({b, op, avg});
    pending.insert(pending.end(), stops.rbegin(), stops.rend());
  }

  std::vector<DyadicCube> cubes;
  std::map<DyadicCube, ReducingOperator> operators;
  cubes.reserve(nodes.size());
  for (const auto& node : nodes) cubes.push_back({0, node.block.gen, {node.block.index}});
  SparseFamily family(lattice, cubes, 0.5);

  DominationReport report;
  report.exponents = config.exponents;
  if (std::find(report.exponents.begin(), report.exponents.end(), p) == report.exponents.end()) {
    report.exponents.push_back(p);
  }
  for (const double r : report.exponents) {
    if (!(r > 0.0)) throw InvalidArgument("spb_construct: exponents must be positive");
  }
  report.max_stopping_fraction = worst_fraction;

  std::vector<std::size_t> sample_pieces;
  const std::size_t q_lo = ctx.first(top);
  const std::size_t q_len = ctx.size(top);
  if (config.samples <= 0) {
    for (std::size_t k = q_lo; k < q_lo + q_len; ++k) sample_pieces.push_back(k);
  } else {
    std::mt19937_64 rng(config.seed ^ 0x5bd1e995ULL);
    const Interval qi = lattice.interval(cubes.front());
    std::uniform_real_distribution<double> pos(qi.a(), qi.b());
    for (int s = 0; s < config.samples; ++s) {
      const double x = pos(rng);
      sample_pieces.push_back(std::clamp(w.piece_index(x), q_lo, q_lo + q_len - 1));
    }
  }
  report.samples = static_cast<int>(sample_pieces.size());

  const std::size_t nr = report.exponents.size();
  const std::size_t chunks = detail::chunk_count(sample_pieces.size(), config.jobs);
  std::vector<std::vector<double>> ratio(chunks, std::vector<double>(nr, 0.0));
  std::vector<std::vector<int>> bad(chunks, std::vector<int>(nr, 0));
  detail::parallel_chunks(sample_pieces.size(), config.jobs,
                          [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const std::size_t k = sample_pieces[s];
      const double lhs = local_max(ctx, top, k);
      std::vector<double> rhs(nr, 0.0);
      for (const auto& node : nodes) {
        const std::size_t lo = ctx.first(node.block);
        if (k < lo || k >= lo + ctx.size(node.block)) continue;
        const double term = operator_norm(ctx.wp[k] * node.op.a) * node.average;
        for (std::size_t i = 0; i < nr; ++i) {
          rhs[i] += std::pow(2.0 * term, report.exponents[i]);
        }
      }
      for (std::size_t i = 0; i < nr; ++i) {
        const double l = std::pow(lhs, report.exponents[i]);
        if (l == 0.0) continue;
        ratio[c][i] = std::max(ratio[c][i], rhs[i] > 0.0 ? l / rhs[i]
                                                         : std::numeric_limits<double>::infinity());
        if (l > rhs[i] * (1.0 + 1e-12)) ++bad[c][i];
      }
    }
  });
  report.max_ratio.assign(nr, 0.0);
  report.violations.assign(nr, 0);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t i = 0; i < nr; ++i) {
      report.max_ratio[i] = std::max(report.max_ratio[i], ratio[c][i]);
      report.violations[i] += bad[c][i];
    }
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    operators.emplace(cubes[i], nodes[i].op);
  }
  return {std::move(family), std::move(operators), std::move(report)};
}

}  // namespace sharpweights
