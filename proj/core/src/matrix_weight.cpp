// SPDX-License-Identifier: MIT
#include "sharpweights/matrix_weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sharpweights/detail/mvee.hpp"
#include "sharpweights/error.hpp"
#include "sharpweights/functionals.hpp"

namespace sharpweights {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_spd_shape(const Matrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidArgument(std::string(who) + ": matrix is not square");
  }
  if (!a.allFinite()) throw DomainError(std::string(who) + ": non-finite entry");
  const double scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError(std::string(who) + ": matrix is not symmetric");
  }
}

std::size_t mesh_size(int depth) { return std::size_t{1} << depth; }

// Prefix sums of per-piece values, for block averages.
std::vector<double> prefix_of(const std::vector<double>& h) {
  std::vector<double> s(h.size() + 1, 0.0);
  for (std::size_t i = 0; i < h.size(); ++i) s[i + 1] = s[i] + h[i];
  return s;
}

void check_field(const MatrixWeight& w, const VectorField& f) {
  if (f.size() != w.piece_count()) {
    throw InvalidArgument("vector field has " + std::to_string(f.size()) + " pieces, weight has " +
                          std::to_string(w.piece_count()));
  }
  for (const auto& v : f) {
    if (v.size() != w.n()) throw InvalidArgument("vector field has the wrong dimension");
    if (!v.allFinite()) throw DomainError("vector field has a non-finite entry");
  }
}

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("exponent must satisfy 1 < p < inf");
}

double rho_with(const std::vector<std::pair<std::size_t, double>>& on,
                const std::vector<Matrix>& wm, double pc, const Vector& u) {
  double acc = 0.0;
  for (const auto& [k, frac] : on) acc += frac * std::pow((wm[k] * u).norm(), pc);
  return std::pow(acc, 1.0 / pc);
}

}  // namespace

Matrix matrix_power(const Matrix& a, double s) {
  check_spd_shape(a, "matrix_power");
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) throw DomainError("matrix_power: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("matrix_power: matrix is not positive");
  const Vector d = es.eigenvalues().array().pow(s).matrix();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double operator_norm(const Matrix& a) {
  const Matrix g = a.transpose() * a;
  if (g.rows() == 1) return std::sqrt(g(0, 0));
  if (g.rows() == 2) {
    const double tr = g(0, 0) + g(1, 1);
    const double diff = g(0, 0) - g(1, 1);
    const double disc = std::sqrt(diff * diff + 4.0 * g(0, 1) * g(1, 0));
    return std::sqrt(std::max(0.0, 0.5 * (tr + disc)));
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

MatrixWeight::MatrixWeight(Interval base, int depth, std::vector<Matrix> pieces)
    : base_(base), depth_(depth), n_(0), pieces_(std::move(pieces)) {
  if (depth < 0 || depth > kMaxMeshDepth) {
    throw InvalidArgument("mesh depth must lie in [0, " + std::to_string(kMaxMeshDepth) + "]");
  }
  if (pieces_.size() != mesh_size(depth)) {
    throw InvalidArgument("matrix weight needs 2^depth pieces");
  }
  n_ = static_cast<int>(pieces_.front().rows());
  if (n_ < 1 || n_ > kMaxMatrixDimension) {
    throw InvalidArgument("matrix dimension must lie in [1, " +
                          std::to_string(kMaxMatrixDimension) + "]");
  }
  condition_.reserve(pieces_.size());
  for (auto& m : pieces_) {
    if (m.rows() != n_) throw InvalidArgument("matrix weight pieces differ in size");
    check_spd_shape(m, "MatrixWeight");
    m = 0.5 * (m + m.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw DomainError("MatrixWeight: piece is not positive definite");
    const double kappa = hi / lo;
    if (kappa > kMaxConditionNumber) {
      throw DomainError("MatrixWeight: piece condition number exceeds 1e10");
    }
    condition_.push_back(kappa);
  }
}

MatrixWeight MatrixWeight::constant(Interval base, int depth, const Matrix& value) {
  if (depth < 0 || depth > kMaxMeshDepth) throw InvalidArgument("mesh depth out of range");
  return {base, depth, std::vector<Matrix>(mesh_size(depth), value)};
}

MatrixWeight MatrixWeight::from_scalar(const StepFunction& w, Interval base, int depth) {
  if (depth < 0 || depth > kMaxMeshDepth) throw InvalidArgument("mesh depth out of range");
  const std::size_t count = mesh_size(depth);
  std::vector<Matrix> pieces;
  pieces.reserve(count);
  const double h = base.length() / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = base.a() + (static_cast<double>(i) + 0.5) * h;
    pieces.push_back(Matrix::Constant(1, 1, w(x)));
  }
  return {base, depth, std::move(pieces)};
}

Interval MatrixWeight::piece_interval(std::size_t i) const {
  const double h = base_.length() / static_cast<double>(pieces_.size());
  const double a = base_.a() + h * static_cast<double>(i);
  const double b = (i + 1 == pieces_.size()) ? base_.b() : base_.a() + h * static_cast<double>(i + 1);
  return {a, b};
}

std::size_t MatrixWeight::piece_index(double x) const {
  if (!base_.contains(x)) throw InvalidArgument("point lies outside the weight's base interval");
  const double t = (x - base_.a()) / base_.length() * static_cast<double>(pieces_.size());
  auto k = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0,
                                               static_cast<double>(pieces_.size() - 1)));
  if (k > 0 && x < piece_interval(k).a()) --k;
  else if (k + 1 < pieces_.size() && x >= piece_interval(k).b()) ++k;
  return k;
}

std::vector<Matrix> MatrixWeight::powers(double s) const {
  std::vector<Matrix> out;
  out.reserve(pieces_.size());
  for (const auto& m : pieces_) out.push_back(matrix_power(m, s));
  return out;
}

DyadicLattice MatrixWeight::lattice() const { return DyadicLattice::standard(base_); }

std::vector<std::pair<std::size_t, double>> MatrixWeight::weights_on(const Interval& iv) const {
  const double p = static_cast<double>(pieces_.size());
  const double lo = (std::max(iv.a(), base_.a()) - base_.a()) / base_.length() * p;
  const double hi = (std::min(iv.b(), base_.b()) - base_.a()) / base_.length() * p;
  std::vector<std::pair<std::size_t, double>> out;
  if (!(hi > lo)) return out;
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(lo) - 1.0));
  const auto last = std::min(pieces_.size(), static_cast<std::size_t>(std::ceil(hi)) + 1);
  for (std::size_t k = first; k < last; ++k) {
    const double ov = piece_interval(k).overlap(iv);
    if (ov > 0.0) out.emplace_back(k, ov / iv.length());
  }
  return out;
}

std::vector<Interval> mesh_candidates(const MatrixWeight& w, bool shifted) {
  std::vector<DyadicLattice> lattices;
  if (shifted) {
    lattices = three_lattices(1, w.base().length(), w.base().a());
  } else {
    lattices.push_back(w.lattice());
  }
  std::vector<Interval> out;
  const Interval box = w.base();
  for (const auto& lat : lattices) {
    for (int g = 0; g <= w.depth(); ++g) {
      for (const auto& c : lat.cubes_meeting(std::span<const Interval>(&box, 1), g)) {
        const Interval iv = lat.interval(c);
        if (box.contains(iv)) out.push_back(iv);
      }
    }
  }
  return out;
}

double rho_eval(const Interval& cube, double p, const MatrixWeight& w, const Vector& u) {
  check_p(p);
  if (u.size() != w.n()) throw InvalidArgument("rho_eval: vector has the wrong dimension");
  const auto on = w.weights_on(cube);
  if (on.empty()) throw InvalidArgument("rho_eval: cube misses the base interval");
  const double pc = p / (p - 1.0);
  double acc = 0.0;
  for (const auto& [k, frac] : on) {
    acc += frac * std::pow((matrix_power(w.piece(k), -1.0 / p) * u).norm(), pc);
  }
  return std::pow(acc, 1.0 / pc);
}

ReducingOperator reducing_operator(const Interval& cube, double p, const MatrixWeight& w,
                                   int directions, std::uint64_t seed) {
  check_p(p);
  if (directions < 4) throw InvalidArgument("reducing_operator: need at least 4 directions");
  const auto on = w.weights_on(cube);
  if (on.empty() || !w.base().contains(cube)) {
    throw InvalidArgument("reducing_operator: cube must lie in the base interval");
  }
  const int n = w.n();
  const double pc = p / (p - 1.0);
  std::vector<Matrix> wm(w.piece_count());
  for (const auto& [k, frac] : on) wm[k] = matrix_power(w.piece(k), -1.0 / p);

  ReducingOperator out;
  out.cube = cube;
  out.p = p;
  out.directions = directions;

  if (n == 1) {
    out.a = Matrix::Constant(1, 1, rho_with(on, wm, pc, Vector::Ones(1)));
    out.exact = true;
    return out;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto gaussian_unit = [&] {
    Vector u(n);
    for (int i = 0; i < n; ++i) u(i) = normal(rng);
    return Vector(u / u.norm());
  };
  auto angle_unit = [](double t) {
    Vector u(2);
    u << std::cos(t), std::sin(t);
    return u;
  };

  if (p == 2.0) {
    Matrix m = Matrix::Zero(n, n);
    for (const auto& [k, frac] : on) m += frac * wm[k] * wm[k];
    out.a = matrix_power(0.5 * (m + m.transpose()), 0.5);
    out.exact = true;
  } else {
    std::vector<Vector> pts;
    pts.reserve(static_cast<std::size_t>(directions));
    for (int k = 0; k < directions; ++k) {
      const Vector u = n == 2 ? angle_unit(kPi * k / directions) : gaussian_unit();
      pts.push_back(u / rho_with(on, wm, pc, u));
    }
    const auto e = detail::mvee_centered(pts);
    if (!e.converged) throw VerificationError("reducing_operator: ellipsoid iteration did not converge");
    out.a = matrix_power(0.5 * (e.shape + e.shape.transpose()), 0.5);
  }

  // Two-sided constants on directions not used for the fit.
  const int fresh = 4 * directions;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int k = 0; k < fresh; ++k) {
    const Vector u = n == 2 ? angle_unit(kPi * (k + 0.5) / fresh) : gaussian_unit();
    const double r = (out.a * u).norm() / rho_with(on, wm, pc, u);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.c_low = lo;
  out.c_high = hi;
  return out;
}

namespace {

// Pairwise ||A_x B_y||^q with a dense table for small meshes.
class PairNorms {
 public:
  PairNorms(std::vector<Matrix> left, std::vector<Matrix> right, double q)
      : left_(std::move(left)), right_(std::move(right)), q_(q), size_(left_.size()) {
    if (size_ <= 1024) {
      table_.resize(size_ * size_);
      for (std::size_t x = 0; x < size_; ++x) {
        for (std::size_t y = 0; y < size_; ++y) table_[x * size_ + y] = compute(x, y);
      }
    }
  }

  double operator()(std::size_t x, std::size_t y) const {
    return table_.empty() ? compute(x, y) : table_[x * size_ + y];
  }

 private:
  double compute(std::size_t x, std::size_t y) const {
    return std::pow(operator_norm(left_[x] * right_[y]), q_);
  }

  std::vector<Matrix> left_;
  std::vector<Matrix> right_;
  double q_;
  std::size_t size_;
  std::vector<double> table_;
};

}  // namespace

std::pair<double, Interval> matrix_ap_argmax(const MatrixWeight& w, double p,
                                             std::span<const Interval> candidates) {
  check_p(p);
  if (candidates.empty()) throw InvalidArgument("matrix_ap: no candidate intervals");
  const double pc = p / (p - 1.0);
  const PairNorms norms(w.powers(1.0 / p), w.powers(-1.0 / p), pc);
  double best = -1.0;
  Interval arg = candidates.front();
  for (const auto& iv : candidates) {
    const auto on = w.weights_on(iv);
    if (on.empty()) throw InvalidArgument("matrix_ap: candidate misses the base interval");
    double outer = 0.0;
    for (const auto& [x, fx] : on) {
      double inner = 0.0;
      for (const auto& [y, fy] : on) inner += fy * norms(x, y);
      outer += fx * std::pow(inner, p / pc);
    }
    if (outer > best) {
      best = outer;
      arg = iv;
    }
  }
  return {best, arg};
}

double matrix_ap(const MatrixWeight& w, double p, std::span<const Interval> candidates) {
  return matrix_ap_argmax(w, p, candidates).first;
}

double matrix_a1(const MatrixWeight& w, std::span<const Interval> candidates) {
  if (candidates.empty()) throw InvalidArgument("matrix_a1: no candidate intervals");
  std::vector<Matrix> inv;
  inv.reserve(w.piece_count());
  for (const auto& m : w.pieces()) inv.push_back(m.inverse());
  const PairNorms norms(std::vector<Matrix>(w.pieces().begin(), w.pieces().end()), inv, 1.0);
  double best = 0.0;
  for (const auto& iv : candidates) {
    const auto on = w.weights_on(iv);
    for (const auto& [y, fy] : on) {
      double s = 0.0;
      for (const auto& [x, fx] : on) s += fx * norms(x, y);
      best = std::max(best, s);
    }
  }
  return best;
}

namespace {

struct CgContext {
  std::vector<Matrix> wp;
  std::vector<Vector> g;  // W^{-1/p} f per piece
};

CgContext cg_context(const MatrixWeight& w, double p, const VectorField& f) {
  check_p(p);
  check_field(w, f);
  CgContext ctx;
  ctx.wp = w.powers(1.0 / p);
  const auto wm = w.powers(-1.0 / p);
  ctx.g.reserve(f.size());
  for (std::size_t y = 0; y < f.size(); ++y) ctx.g.push_back(wm[y] * f[y]);
  return ctx;
}

double cg_at_piece(const MatrixWeight& w, const CgContext& ctx, std::size_t k, CgMode mode) {
  const std::size_t count = w.piece_count();
  std::vector<double> h(count);
  for (std::size_t y = 0; y < count; ++y) h[y] = (ctx.wp[k] * ctx.g[y]).norm();
  const auto s = prefix_of(h);
  double best = 0.0;
  if (mode == CgMode::kDyadicLocal) {
    for (int gen = 0; gen <= w.depth(); ++gen) {
      const std::size_t block = count >> gen;
      const std::size_t i = (k / block) * block;
      best = std::max(best, (s[i + block] - s[i]) / static_cast<double>(block));
    }
  } else {
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = k + 1; j <= count; ++j) {
        best = std::max(best, (s[j] - s[i]) / static_cast<double>(j - i));
      }
    }
  }
  return best;
}

}  // namespace

double cg_maximal(const MatrixWeight& w, double p, const VectorField& f, double x, CgMode mode) {
  const std::size_t k = w.piece_index(x);
  return cg_at_piece(w, cg_context(w, p, f), k, mode);
}

std::vector<double> cg_maximal_pieces(const MatrixWeight& w, double p, const VectorField& f,
                                      CgMode mode) {
  const auto ctx = cg_context(w, p, f);
  std::vector<double> out(w.piece_count());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cg_at_piece(w, ctx, k, mode);
  return out;
}

Pr1Check prop_pr1_check(const Interval& cube, double p, const MatrixWeight& w,
                        const VectorField& f, const ReducingOperator& v) {
  check_p(p);
  check_field(w, f);
  const auto on = w.weights_on(cube);
  if (on.empty()) throw InvalidArgument("prop_pr1_check: cube misses the base interval");
  const Matrix vinv = v.a.inverse();
  double num = 0.0;
  double den = 0.0;
  for (const auto& [y, fy] : on) {
    num += fy * (vinv * matrix_power(w.piece(y), -1.0 / p) * f[y]).norm();
    den += fy * std::pow(f[y].norm(), p);
  }
  if (!(den > 0.0)) throw InvalidArgument("prop_pr1_check: f vanishes on the cube");
  return {num / std::pow(den, 1.0 / p), static_cast<double>(w.n()) / v.c_low};
}

namespace {

double pr2_moment(const std::vector<std::pair<std::size_t, double>>& on,
                  const std::vector<double>& norms, double exponent) {
  double acc = 0.0;
  for (const auto& [x, fx] : on) acc += fx * std::pow(norms[x], exponent);
  return acc;
}

std::vector<double> pr2_norms(const std::vector<std::pair<std::size_t, double>>& on, double p,
                              const MatrixWeight& w, const ReducingOperator& v) {
  std::vector<double> norms(w.piece_count(), 0.0);
  for (const auto& [x, fx] : on) norms[x] = operator_norm(matrix_power(w.piece(x), 1.0 / p) * v.a);
  return norms;
}

}  // namespace

Pr2Check prop_pr2_check(const Interval& cube, double p, const MatrixWeight& w, double s,
                        const ReducingOperator& v, double ap) {
  check_p(p);
  if (!(s >= 1.0)) throw InvalidArgument("prop_pr2_check: s must be at least 1");
  if (!(ap > 0.0)) throw InvalidArgument("prop_pr2_check: A_p constant must be positive");
  const auto on = w.weights_on(cube);
  if (on.empty()) throw InvalidArgument("prop_pr2_check: cube misses the base interval");
  const auto norms = pr2_norms(on, p, w, v);
  Pr2Check out;
  out.s = s;
  out.ap = ap;
  out.lhs = std::pow(pr2_moment(on, norms, s * p), 1.0 / s);
  out.ratio = out.lhs / ap;
  return out;
}

double prop_pr2_probe(const Interval& cube, double p, const MatrixWeight& w,
                      const ReducingOperator& v) {
  check_p(p);
  const auto on = w.weights_on(cube);
  if (on.empty()) throw InvalidArgument("prop_pr2_probe: cube misses the base interval");
  const auto norms = pr2_norms(on, p, w, v);
  const double base = pr2_moment(on, norms, p);
  for (int j = 0; j <= 20; ++j) {
    const double s = 1.0 + std::ldexp(1.0, -j);
    if (std::pow(pr2_moment(on, norms, s * p), 1.0 / s) <= 2.0 * base) return s;
  }
  return 1.0;
}

StepFunction direction_weight(const MatrixWeight& w, double p, const Vector& u) {
  check_p(p);
  if (u.size() != w.n()) throw InvalidArgument("direction_weight: vector has the wrong dimension");
  if (!(u.norm() > 0.0)) throw InvalidArgument("direction_weight: zero direction");
  std::vector<double> bp;
  std::vector<double> vals;
  bp.reserve(w.piece_count() + 1);
  vals.reserve(w.piece_count());
  for (std::size_t k = 0; k < w.piece_count(); ++k) {
    bp.push_back(w.piece_interval(k).a());
    vals.push_back(std::pow((matrix_power(w.piece(k), 1.0 / p) * u).norm(), p));
  }
  bp.push_back(w.base().b());
  return {std::move(bp), std::move(vals), 0.0};
}

ScapCheck scap_check(const MatrixWeight& w, double p, const Vector& u,
                     std::span<const Interval> candidates) {
  const auto wu = direction_weight(w, p, u);
  const Exponent e(p);
  ScapCheck out;
  out.scalar_ap = 0.0;
  for (const auto& iv : candidates) out.scalar_ap = std::max(out.scalar_ap, ap_functional(wu, e, iv));
  out.matrix_ap = matrix_ap(w, p, candidates);
  out.holds = out.scalar_ap <= out.matrix_ap * (1.0 + 1e-9);
  return out;
}

double cg_strong_norm_estimate(const MatrixWeight& w, double p, std::span<const VectorField> probes,
                               CgMode mode) {
  check_p(p);
  if (probes.empty()) throw InvalidArgument("cg_strong_norm_estimate: no probes");
  double best = 0.0;
  for (const auto& f : probes) {
    const auto m = cg_maximal_pieces(w, p, f, mode);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      num += std::pow(m[k], p);
      den += std::pow(f[k].norm(), p);
    }
    if (!(den > 0.0)) throw InvalidArgument("cg_strong_norm_estimate: zero probe");
    best = std::max(best, std::pow(num / den, 1.0 / p));
  }
  return best;
}

std::vector<VectorField> coordinate_probes(const MatrixWeight& w) {
  const std::size_t count = w.piece_count();
  std::vector<int> gens{0, 1, 2, w.depth() / 2, w.depth()};
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<VectorField> out;
  for (int j = 0; j < w.n(); ++j) {
    for (const int g : gens) {
      if (g > w.depth()) continue;
      const std::size_t block = count >> g;
      const std::size_t blocks = count / block;
      for (const std::size_t b : {std::size_t{0}, blocks / 2, blocks - 1}) {
        VectorField f(count, Vector::Zero(w.n()));
        for (std::size_t k = b * block; k < (b + 1) * block; ++k) f[k](j) = 1.0;
        out.push_back(std::move(f));
        if (blocks == 1) break;
      }
    }
  }
  return out;
}

MatrixWeight random_matrix_weight(int n, int depth, std::mt19937_64& rng, double spread,
                                  Interval base) {
  if (n < 1 || n > kMaxMatrixDimension) throw InvalidArgument("random_matrix_weight: bad dimension");
  if (depth < 0 || depth > kMaxMeshDepth) throw InvalidArgument("random_matrix_weight: bad depth");
  if (!(spread >= 0.0) || spread > 10.0) throw InvalidArgument("random_matrix_weight: bad spread");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> level(-spread, spread);
  std::vector<Matrix> pieces;
  pieces.reserve(mesh_size(depth));
  for (std::size_t k = 0; k < mesh_size(depth); ++k) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
    }
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = std::exp(level(rng));
    const Matrix m = q * d.asDiagonal() * q.transpose();
    pieces.push_back(0.5 * (m + m.transpose()));
  }
  return {base, depth, std::move(pieces)};
}

VectorField random_vector_field(const MatrixWeight& w, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  VectorField f(w.piece_count(), Vector::Zero(w.n()));
  for (auto& v : f) {
    for (int i = 0; i < w.n(); ++i) v(i) = normal(rng);
  }
  return f;
}

}  // namespace sharpweights
