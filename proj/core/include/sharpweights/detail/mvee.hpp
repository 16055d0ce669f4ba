// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include <Eigen/Dense>

namespace sharpweights::detail {

struct MveeResult {
  Eigen::MatrixXd shape;  // ellipsoid {x : x^T shape x <= 1}
  int iterations = 0;
  double gap = 0.0;       // max_i x_i^T X^{-1} x_i / n - 1 at exit
  bool converged = false;
};

// Minimum-volume origin-centred ellipsoid containing +-x_i (Khachiyan
// iteration with Todd-Yildirim away steps). Converged when every point
// satisfies x^T X^{-1} x <= n (1 + tol).
MveeResult mvee_centered(const std::vector<Eigen::VectorXd>& points, double tol = 1e-8,
                         int max_iterations = 200000);

}  // namespace sharpweights::detail
