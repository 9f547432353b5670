#pragma once

#include <functional>
#include <vector>

#include "geoschwarz/manifold.hpp"

namespace geoschwarz {

using LinearOperator = std::function<Vector(const Vector&)>;

struct GmresOptions {
  double rel_tol = 1e-8;  // on ||b - A x|| / ||b||
  int max_iters = 200;    // total inner iterations over all cycles
  int restart = 50;
};

struct GmresResult {
  Vector x;
  int iters = 0;
  bool converged = false;
  /// Relative residual estimate after every inner iteration, entry 0 is 1.
  std::vector<double> history;
};

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations, started
/// from x = 0. Does not throw on non-convergence; callers decide.
GmresResult gmres(const LinearOperator& op, const Vector& b,
                  const GmresOptions& opts = {});

}  // namespace geoschwarz
