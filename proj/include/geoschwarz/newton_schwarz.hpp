#pragma once

#include <vector>

#include "geoschwarz/krylov.hpp"
#include "geoschwarz/leapfrog.hpp"

namespace geoschwarz {

enum class JacobianMode { dense_analytic, dense_fd, matrix_free };

struct NewtonConfig {
  double tol = 1e-10;  // on ||F||_inf
  int max_iters = 50;
  JacobianMode jacobian_mode = JacobianMode::dense_analytic;
  /// Relative finite-difference step; the absolute step on a unit direction
  /// is fd_step * (1 + ||X||).
  double fd_step = 1e-7;
  double krylov_tol = 1e-8;
  int krylov_max = 200;
  int krylov_restart = 50;
  int safeguard_halvings = 10;
  /// Central-difference step for the dense_fd blocks.
  double dense_fd_step = 1e-6;
};

/// J_F = I - J_G for F(X) = X - G(X): identity diagonal blocks and negated
/// midpoint derivatives on the off-diagonals. lower[0] and upper.back() are
/// empty (the endpoints are fixed).
struct BlockTridiagonalJacobian {
  Eigen::Index block_size = 0;
  std::vector<Matrix> lower;  // row r: -dM(X_{r-1}, X_{r+1}) / dX_{r-1}
  std::vector<Matrix> upper;  // row r: -dM(X_{r-1}, X_{r+1}) / dX_{r+1}

  int blocks() const { return static_cast<int>(lower.size()); }
  Vector apply(const Vector& x) const;
  Matrix dense() const;
  /// Block Thomas elimination with partially pivoted LU on the pivot blocks.
  /// Throws SingularJacobian.
  Vector solve(const Vector& rhs) const;
};

/// Dense Jacobian of F at w. dense_analytic needs a geometry implementing
/// MidpointDerivatives; dense_fd uses central differences of the ambient
/// extension (x, y) -> M(normalize(x), normalize(y)).
BlockTridiagonalJacobian assemble_jacobian(const Manifold& m,
                                           const Waypoints& w,
                                           JacobianMode mode,
                                           double fd_step = 1e-6);

/// Matrix-free J_F v ~ (F(R_W(h v)) - F(W)) / h. `v` is projected onto the
/// tangent spaces first; `f0` must be F(w) evaluated with the same solver.
Vector apply_jacobian_fd(MidpointSolver& solver, const Waypoints& w,
                         const Residual& f0, const Vector& v,
                         double fd_step = 1e-7);
Vector apply_jacobian_fd(const Manifold& m, const Waypoints& w,
                         const Vector& v, double fd_step = 1e-7);

/// Stacked tangent projection / retraction helpers over interior points.
Vector project_stacked(const Manifold& m, const Waypoints& w, const Vector& v);
Waypoints retract_stacked(const Manifold& m, const Waypoints& w,
                          const Vector& v);

struct NewtonStepDiagnostics {
  double residual_before = 0.0;  // ||F||_2
  double residual_after = 0.0;
  int krylov_iters = 0;
  int halvings = 0;
  bool safeguard_flagged = false;  // full step accepted despite increase
};

struct NewtonStepResult {
  Waypoints waypoints;
  Residual residual;  // F at the new waypoints
  NewtonStepDiagnostics diagnostics;
};

/// One modified Newton step: solve J_F delta = -F, project delta onto the
/// tangent spaces, retract, then halve the step while ||F||_2 increases.
NewtonStepResult newton_step(MidpointSolver& solver, const Waypoints& w,
                             const Residual& f, const NewtonConfig& cfg);
NewtonStepResult newton_step(const Manifold& m, const Waypoints& w,
                             const NewtonConfig& cfg);

SolveResult run_preconditioned_leapfrog(const Manifold& m, const Matrix& p,
                                        const Matrix& q, int count,
                                        const NewtonConfig& cfg,
                                        const InitMode& init = InitMode::chord(),
                                        const ErrorFunction& error = {},
                                        bool track_length = true);

SolveResult run_preconditioned_leapfrog(const Manifold& m, Waypoints start,
                                        const NewtonConfig& cfg,
                                        const ErrorFunction& error = {},
                                        bool track_length = true);

}  // namespace geoschwarz
