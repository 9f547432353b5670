#include "geoschwarz/newton_schwarz.hpp"

#include <cmath>
#include <sstream>

#include "record_builder.hpp"

namespace geoschwarz {

namespace {

Matrix as_block(const Vector& v, Eigen::Index offset, const Matrix& shape) {
  return Eigen::Map<const Matrix>(v.data() + offset, shape.rows(),
                                  shape.cols());
}

double interior_norm(const Waypoints& w) {
  double sq = 0.0;
  for (int i = 1; i < w.m() - 1; ++i) sq += w.points[i].squaredNorm();
  return std::sqrt(sq);
}

// Ambient extension of the midpoint map.
Matrix extended_midpoint(const Manifold& m, const Matrix& x, const Matrix& y) {
  return midpoint(m, m.normalize(x), m.normalize(y));
}

Matrix fd_block(const Manifold& m, const Matrix& x, const Matrix& y,
                bool wrt_first, double h) {
  const Eigen::Index d = x.size();
  Matrix block(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Matrix plus = wrt_first ? x : y;
    Matrix minus = plus;
    plus(k) += h;
    minus(k) -= h;
    const Matrix fp = wrt_first ? extended_midpoint(m, plus, y)
                                : extended_midpoint(m, x, plus);
    const Matrix fm = wrt_first ? extended_midpoint(m, minus, y)
                                : extended_midpoint(m, x, minus);
    const Matrix diff = (fp - fm) / (2.0 * h);
    block.col(k) = Eigen::Map<const Vector>(diff.data(), d);
  }
  return block;
}

}  // namespace

Vector BlockTridiagonalJacobian::apply(const Vector& x) const {
  const Eigen::Index b = block_size;
  Vector y = x;
  for (int r = 0; r < blocks(); ++r) {
    if (r > 0) y.segment(r * b, b) += lower[r] * x.segment((r - 1) * b, b);
    if (r + 1 < blocks())
      y.segment(r * b, b) += upper[r] * x.segment((r + 1) * b, b);
  }
  return y;
}

Matrix BlockTridiagonalJacobian::dense() const {
  const Eigen::Index b = block_size;
  Matrix out = Matrix::Identity(b * blocks(), b * blocks());
  for (int r = 0; r < blocks(); ++r) {
    if (r > 0) out.block(r * b, (r - 1) * b, b, b) = lower[r];
    if (r + 1 < blocks()) out.block(r * b, (r + 1) * b, b, b) = upper[r];
  }
  return out;
}

Vector BlockTridiagonalJacobian::solve(const Vector& rhs) const {
  const Eigen::Index b = block_size;
  const int n = blocks();
  std::vector<Eigen::PartialPivLU<Matrix>> pivots;
  pivots.reserve(n);
  Vector y = rhs;
  const Matrix eye = Matrix::Identity(b, b);
  for (int r = 0; r < n; ++r) {
    Matrix diag = eye;
    if (r > 0) {
      // Eliminate lower[r] against the previous pivot row.
      const Matrix w = lower[r] * pivots[r - 1].inverse();
      diag -= w * upper[r - 1];
      y.segment(r * b, b) -= w * y.segment((r - 1) * b, b);
    }
    pivots.emplace_back(diag);
    const double rcond = pivots.back().rcond();
    if (!(rcond > 1e-14)) {
      std::ostringstream msg;
      msg << "block tridiagonal solve: singular pivot block " << r
          << " (rcond " << rcond << ")";
      throw SingularJacobian(msg.str(), r, rcond);
    }
  }
  Vector x(y.size());
  for (int r = n - 1; r >= 0; --r) {
    Vector rhs_r = y.segment(r * b, b);
    if (r + 1 < n) rhs_r -= upper[r] * x.segment((r + 1) * b, b);
    x.segment(r * b, b) = pivots[r].solve(rhs_r);
  }
  return x;
}

BlockTridiagonalJacobian assemble_jacobian(const Manifold& m,
                                           const Waypoints& w,
                                           JacobianMode mode, double fd_step) {
  if (mode == JacobianMode::matrix_free)
    throw std::invalid_argument("assemble_jacobian: dense mode required");
  const auto* analytic = dynamic_cast<const MidpointDerivatives*>(&m);
  if (mode == JacobianMode::dense_analytic && analytic == nullptr)
    throw std::invalid_argument(
        "assemble_jacobian: geometry has no analytic midpoint derivatives");

  BlockTridiagonalJacobian jac;
  jac.block_size = w.points.front().size();
  const int n = w.interior();
  jac.lower.resize(n);
  jac.upper.resize(n);
  for (int r = 0; r < n; ++r) {
    const int i = r + 1;
    const Matrix& left = w.points[i - 1];
    const Matrix& right = w.points[i + 1];
    try {
      if (mode == JacobianMode::dense_analytic) {
        MidpointJacobianBlocks g = analytic->midpoint_jacobian(left, right);
        if (r > 0) jac.lower[r] = -g.g_first;
        if (r + 1 < n) jac.upper[r] = -g.g_second;
      } else {
        if (r > 0) jac.lower[r] = -fd_block(m, left, right, true, fd_step);
        if (r + 1 < n) jac.upper[r] = -fd_block(m, left, right, false, fd_step);
      }
    } catch (const GeodesicError& e) {
      throw SegmentError("jacobian block for waypoint " + std::to_string(i) +
                             " failed: " + e.what(),
                         i, std::current_exception());
    }
  }
  return jac;
}

Vector project_stacked(const Manifold& m, const Waypoints& w,
                       const Vector& v) {
  Vector out(v.size());
  const Eigen::Index b = w.points.front().size();
  for (int i = 1; i < w.m() - 1; ++i) {
    const Matrix& x = w.points[i];
    const Matrix t = m.project(x, as_block(v, (i - 1) * b, x));
    out.segment((i - 1) * b, b) = Eigen::Map<const Vector>(t.data(), b);
  }
  return out;
}

Waypoints retract_stacked(const Manifold& m, const Waypoints& w,
                          const Vector& v) {
  Waypoints out = w;
  const Eigen::Index b = w.points.front().size();
  for (int i = 1; i < w.m() - 1; ++i)
    out.points[i] = m.retract(w.points[i], as_block(v, (i - 1) * b, w.points[i]));
  return out;
}

Vector apply_jacobian_fd(MidpointSolver& solver, const Waypoints& w,
                         const Residual& f0, const Vector& v, double fd_step) {
  const Manifold& m = solver.manifold();
  const Vector t = project_stacked(m, w, v);
  const double nt = t.norm();
  if (nt == 0.0) return Vector::Zero(v.size());
  // Step along the unit direction, then rescale.
  const double h = fd_step * (1.0 + interior_norm(w));
  const Waypoints shifted = retract_stacked(m, w, (h / nt) * t);
  Waypoints mapped = shifted;
  for (int i = 1; i < w.m() - 1; ++i)
    mapped.points[i] =
        solver(i, shifted.points[i - 1], shifted.points[i + 1], false);
  Vector out(v.size());
  const Eigen::Index b = w.points.front().size();
  for (int i = 1; i < w.m() - 1; ++i) {
    const Matrix diff = shifted.points[i] - mapped.points[i];
    out.segment((i - 1) * b, b) = Eigen::Map<const Vector>(diff.data(), b);
  }
  return (out - f0.stacked) * (nt / h);
}

Vector apply_jacobian_fd(const Manifold& m, const Waypoints& w,
                         const Vector& v, double fd_step) {
  MidpointSolver solver(m);
  const Residual f0 = residual_F(solver, w);
  return apply_jacobian_fd(solver, w, f0, v, fd_step);
}

NewtonStepResult newton_step(MidpointSolver& solver, const Waypoints& w,
                             const Residual& f, const NewtonConfig& cfg) {
  const Manifold& m = solver.manifold();
  NewtonStepResult out;
  out.diagnostics.residual_before = f.norm2;
  if (f.norm2 == 0.0) {
    out.waypoints = w;
    out.residual = f;
    return out;
  }

  Vector xi;
  if (cfg.jacobian_mode == JacobianMode::matrix_free) {
    const Vector rhs = -project_stacked(m, w, f.stacked);
    LinearOperator op = [&](const Vector& v) {
      return project_stacked(m, w,
                             apply_jacobian_fd(solver, w, f, v, cfg.fd_step));
    };
    GmresOptions opts{cfg.krylov_tol, cfg.krylov_max, cfg.krylov_restart};
    GmresResult sol = gmres(op, rhs, opts);
    out.diagnostics.krylov_iters = sol.iters;
    if (!sol.converged) {
      std::ostringstream msg;
      msg << "GMRES did not reach " << cfg.krylov_tol << " in " << sol.iters
          << " iterations (last " << sol.history.back() << ")";
      throw KrylovDidNotConverge(msg.str(), sol.history);
    }
    xi = project_stacked(m, w, sol.x);
  } else {
    const BlockTridiagonalJacobian jac =
        assemble_jacobian(m, w, cfg.jacobian_mode, cfg.dense_fd_step);
    const Vector delta = jac.solve(-f.stacked);
    xi = project_stacked(m, w, delta);
  }

  Waypoints full = retract_stacked(m, w, xi);
  Residual full_f = residual_F(solver, full);
  if (full_f.norm2 <= f.norm2) {
    out.waypoints = std::move(full);
    out.residual = std::move(full_f);
  } else {
    bool accepted = false;
    double scale = 1.0;
    for (int k = 1; k <= cfg.safeguard_halvings; ++k) {
      scale *= 0.5;
      Waypoints trial = retract_stacked(m, w, scale * xi);
      Residual trial_f = residual_F(solver, trial);
      out.diagnostics.halvings = k;
      if (trial_f.norm2 <= f.norm2) {
        out.waypoints = std::move(trial);
        out.residual = std::move(trial_f);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.diagnostics.safeguard_flagged = true;
      out.waypoints = std::move(full);
      out.residual = std::move(full_f);
    }
  }
  out.diagnostics.residual_after = out.residual.norm2;
  return out;
}

NewtonStepResult newton_step(const Manifold& m, const Waypoints& w,
                             const NewtonConfig& cfg) {
  MidpointSolver solver(m);
  const Residual f = residual_F(solver, w);
  return newton_step(solver, w, f, cfg);
}

SolveResult run_preconditioned_leapfrog(const Manifold& m, const Matrix& p,
                                        const Matrix& q, int count,
                                        const NewtonConfig& cfg,
                                        const InitMode& init,
                                        const ErrorFunction& error,
                                        bool track_length) {
  return run_preconditioned_leapfrog(m, init_waypoints(m, p, q, count, init),
                                     cfg, error, track_length);
}

SolveResult run_preconditioned_leapfrog(const Manifold& m, Waypoints start,
                                        const NewtonConfig& cfg,
                                        const ErrorFunction& error,
                                        bool track_length) {
  MidpointSolver solver(m);
  detail::RecordBuilder builder(m, error, track_length, solver);
  Waypoints w = std::move(start);
  ConvergenceRecord& record = builder.record;
  try {
    Residual f = residual_F(solver, w);
    builder.add(0, w, f);
    int k = 0;
    bool flagged = false;
    while (f.norm_inf > cfg.tol && k < cfg.max_iters) {
      NewtonStepResult step = newton_step(solver, w, f, cfg);
      flagged = flagged || step.diagnostics.safeguard_flagged;
      w = std::move(step.waypoints);
      f = std::move(step.residual);
      ++k;
      builder.add(k, w, f, step.diagnostics.krylov_iters);
    }
    record.converged = f.norm_inf <= cfg.tol;
    record.status = record.converged ? "converged" : "max_iters";
    if (flagged) record.status += "; safeguard flagged";
  } catch (const GeodesicError& e) {
    record.converged = false;
    record.status = std::string("failed: ") + e.what();
  }
  return {std::move(w), std::move(builder.record)};
}

}  // namespace geoschwarz
