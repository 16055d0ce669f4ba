// SPDX-License-Identifier: MIT
//
// Minimum-volume centred ellipsoid through the dual problem
//   max log det X(pi),  X(pi) = sum_i pi_i x_i x_i^T,  pi in the simplex.
// Khachiyan steps with Todd-Yildirim away steps find the support; between
// them a Newton solve restricted to the current support polishes the weights.
// The polish matters here: the points come from a body that is nearly an
// ellipsoid already, and plain Khachiyan crawls on such inputs.
#include "sharpweights/detail/mvee.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharpweights/error.hpp"

namespace sharpweights::detail {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd scatter(const std::vector<VectorXd>& pts, const std::vector<double>& pi) {
  const auto n = pts.front().size();
  MatrixXd x = MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pi[i] > 0.0) x.noalias() += pi[i] * pts[i] * pts[i].transpose();
  }
  return x;
}

double log_det(const MatrixXd& x) {
  const Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Damped Newton on the face of the simplex spanned by the support; drops
// points whose weight is driven to zero. Returns false if nothing improved.
bool polish(const std::vector<VectorXd>& pts, std::vector<double>& pi, int steps) {
  bool improved = false;
  for (int s = 0; s < steps; ++s) {
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      if (pi[i] > 0.0) sup.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(sup.size());
    // Large supports come from the uniform start; there the KKT solve costs
    // more than the Khachiyan steps it would save.
    if (k < 2 || k > 128) return improved;
    const MatrixXd x = scatter(pts, pi);
    const Eigen::LLT<MatrixXd> llt(x);
    if (llt.info() != Eigen::Success) return improved;
    MatrixXd y(pts.front().size(), k);
    for (Eigen::Index a = 0; a < k; ++a) y.col(a) = pts[sup[a]];
    const MatrixXd z = llt.solve(y);
    const MatrixXd gram = y.transpose() * z;  // x_i^T X^{-1} x_j
    VectorXd g = gram.diagonal();
    MatrixXd m = gram.array().square().matrix();
    m.diagonal().array() += 1e-12 * m.diagonal().maxCoeff();

    // [M 1; 1^T 0] [d; -nu] = [g; 0]
    MatrixXd kkt = MatrixXd::Zero(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = m;
    kkt.block(0, k, k, 1).setOnes();
    kkt.block(k, 0, 1, k).setOnes();
    VectorXd rhs = VectorXd::Zero(k + 1);
    rhs.head(k) = g;
    const VectorXd sol = kkt.partialPivLu().solve(rhs);
    const VectorXd d = sol.head(k);
    if (!d.allFinite() || d.lpNorm<Eigen::Infinity>() < 1e-15) return improved;

    double tmax = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index a = 0; a < k; ++a) {
      if (d[a] < 0.0 && -pi[sup[a]] / d[a] < tmax) {
        tmax = -pi[sup[a]] / d[a];
        blocking = a;
      }
    }
    const double f0 = log_det(x);
    double t = tmax;
    std::vector<double> trial = pi;
    bool accepted = false;
    for (int b = 0; b < 40; ++b) {
      for (Eigen::Index a = 0; a < k; ++a) trial[sup[a]] = std::max(0.0, pi[sup[a]] + t * d[a]);
      if (blocking >= 0 && t == tmax) trial[sup[blocking]] = 0.0;
      if (log_det(scatter(pts, trial)) > f0) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return improved;
    double total = 0.0;
    for (double v : trial) total += v;
    for (auto& v : trial) v /= total;
    pi.swap(trial);
    improved = true;
  }
  return improved;
}

}  // namespace

MveeResult mvee_centered(const std::vector<VectorXd>& points, double tol, int max_iterations) {
  if (points.empty()) throw InvalidArgument("mvee_centered: no points");
  const auto n = points.front().size();
  const std::size_t m = points.size();
  const double dn = static_cast<double>(n);
  std::vector<double> pi(m, 1.0 / static_cast<double>(m));
  std::vector<double> g(m);

  MveeResult out;
  MatrixXd x = scatter(points, pi);
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::LLT<MatrixXd> llt(x);
    if (llt.info() != Eigen::Success) {
      throw DomainError("mvee_centered: points do not span the space");
    }
    std::size_t up = 0;
    std::size_t down = m;
    for (std::size_t i = 0; i < m; ++i) {
      g[i] = points[i].dot(llt.solve(points[i]));
      if (g[i] > g[up]) up = i;
      if (pi[i] > 0 && (down == m || g[i] < g[down])) down = i;
    }
    out.iterations = it;
    out.gap = g[up] / dn - 1.0;
    if (out.gap <= tol) {
      out.converged = true;
      break;
    }
    if (it % 16 == 15 && polish(points, pi, 25)) {
      x = scatter(points, pi);
      continue;
    }
    const double rise = g[up] - dn;
    const double fall = down == m ? 0.0 : dn - g[down];
    if (rise >= fall) {
      const double alpha = (g[up] / dn - 1.0) / (g[up] - 1.0);
      for (auto& v : pi) v *= 1.0 - alpha;
      pi[up] += alpha;
      x = (1.0 - alpha) * x + alpha * points[up] * points[up].transpose();
    } else {
      const double kappa = g[down];
      const double cap = pi[down] / (1.0 - pi[down]);
      const double beta = kappa > 1.0 ? std::min((1.0 - kappa / dn) / (kappa - 1.0), cap) : cap;
      for (auto& v : pi) v *= 1.0 + beta;
      pi[down] -= beta;
      if (pi[down] < 1e-300) pi[down] = 0.0;
      x = (1.0 + beta) * x - beta * points[down] * points[down].transpose();
    }
    if (it % 256 == 255) x = scatter(points, pi);  // limit drift of the rank-one updates
  }
  out.shape = (dn * x).inverse();
  return out;
}

}  // namespace sharpweights::detail
