#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "geoschwarz/manifold.hpp"

namespace geoschwarz {

struct ShootingConfig {
  double tol = 1e-9;  // on ||Exp_p(v) - q||_F
  int max_iters = 100;
  double fd_step_scale = std::sqrt(std::numeric_limits<double>::epsilon());
  int max_step_halvings = 20;
};

struct ShootingResult {
  Matrix v;
  double residual_norm = 0.0;
  int iters = 0;
  bool converged = false;
  /// Residual norm of every accepted iterate, entry 0 is the initial guess.
  std::vector<double> trace;
};

/// Called once for the initial guess (iter 0) and after each accepted step.
using ShootingObserver =
    std::function<void(int iter, const Matrix& v, const Matrix& residual)>;

/// Single shooting for Log_p(q): Gauss-Newton on the endpoint residual
/// Exp_p(sum_k a_k b_k) - q over the coefficients of an orthonormal tangent
/// basis, with a forward-difference Jacobian, a QR least-squares step and
/// step halving until the residual decreases.
///
/// The default initial guess is the projected chord P_p(q - p). Throws
/// ShootingDidNotConverge (with the residual trace) after max_iters or when
/// the halvings are exhausted.
ShootingResult shoot_log(const Manifold& m, const Matrix& p, const Matrix& q,
                         const std::optional<Matrix>& v0 = std::nullopt,
                         const ShootingConfig& cfg = {},
                         const ShootingObserver& observer = {});

}  // namespace geoschwarz
