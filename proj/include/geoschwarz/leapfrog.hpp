#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geoschwarz/manifold.hpp"

namespace geoschwarz {

/// Ordered waypoints (X_0, ..., X_{m-1}) on an implicit uniform time grid
/// t_i = i / (m - 1). X_0 and X_{m-1} stay fixed during a solve.
struct Waypoints {
  std::vector<Matrix> points;

  int m() const { return static_cast<int>(points.size()); }
  int interior() const { return m() - 2; }
  double time(int i) const { return double(i) / double(m() - 1); }
};

/// Midpoint evaluations with per-slot warm starts for iterative logarithms
/// and a running count of Log solves. Slot i is the midpoint that replaces
/// waypoint i. Not thread-safe; give each solve its own instance.
class MidpointSolver {
 public:
  explicit MidpointSolver(const Manifold& m) : manifold_(m) {}

  const Manifold& manifold() const { return manifold_; }

  /// M(x, y) for slot i. With remember=false the warm start is read but not
  /// overwritten (used for finite-difference probes).
  Matrix operator()(int slot, const Matrix& x, const Matrix& y,
                    bool remember = true);

  long calls() const { return calls_; }

 private:
  const Manifold& manifold_;
  std::vector<std::optional<Matrix>> warm_;
  long calls_ = 0;
};

struct InitMode {
  enum class Kind { chord, perturbed };
  Kind kind = Kind::chord;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  static InitMode chord() { return {}; }
  static InitMode perturbed(double sigma, std::uint64_t seed) {
    return {Kind::perturbed, sigma, seed};
  }
};

/// Chord initialization X_i = normalize((1 - s_i) p + s_i q), s_i = i/(m-1);
/// the perturbed mode then retracts each interior point along a random
/// tangent of norm sigma. Throws DegenerateInitialization.
Waypoints init_waypoints(const Manifold& m, const Matrix& p, const Matrix& q,
                         int count, const InitMode& mode = InitMode::chord());

/// Equispaced points of the geodesic c(t) = Exp_p(t v), i.e. the fixed point.
Waypoints geodesic_waypoints(const Manifold& m, const Matrix& p,
                             const Matrix& v, int count);

/// Jacobi map G: every interior point becomes the midpoint of its old
/// neighbours. Midpoint failures are rethrown as SegmentError.
Waypoints jacobi_map_G(MidpointSolver& solver, const Waypoints& w);
Waypoints jacobi_map_G(const Manifold& m, const Waypoints& w);

/// One leapfrog sweep: in-order update using the already updated left
/// neighbour.
Waypoints gauss_seidel_sweep(MidpointSolver& solver, const Waypoints& w);
Waypoints gauss_seidel_sweep(const Manifold& m, const Waypoints& w);

/// F(X) = X - G(X), stacked over interior points (column-major blocks).
struct Residual {
  Vector stacked;
  double norm2 = 0.0;
  double norm_inf = 0.0;
  Waypoints mapped;  // G(X)
};

Residual residual_F(MidpointSolver& solver, const Waypoints& w);
Residual residual_F(const Manifold& m, const Waypoints& w);

/// Sum of segment distances. `warm` (size m-1) carries per-segment
/// logarithms between calls when provided.
double piecewise_length(const Manifold& m, const Waypoints& w,
                        std::vector<std::optional<Matrix>>* warm = nullptr);

struct IterationRow {
  int iter = 0;
  double residual_2 = 0.0;
  double residual_inf = 0.0;
  std::optional<double> piecewise_length;
  std::optional<double> error_to_reference;
  double wall_time_ms = 0.0;
  std::optional<long> inner_solver_calls;  // Log solves in this iteration
  int krylov_iters = 0;
};

struct ConvergenceRecord {
  std::vector<IterationRow> rows;  // row 0 is the initial state
  bool converged = false;
  std::string status;  // "converged", "max_iters" or "failed: ..."

  int iterations() const { return rows.empty() ? 0 : int(rows.size()) - 1; }
  /// First iteration whose residual_inf is <= tol.
  std::optional<int> first_iter_below(double tol) const;
};

using ErrorFunction = std::function<double(const Waypoints&)>;

/// max_i ||X_i - c(t_i)||_F against a reference geodesic.
ErrorFunction reference_error(const Manifold& m, const Geodesic& reference);

struct SolveResult {
  Waypoints waypoints;
  ConvergenceRecord record;
};

enum class LeapfrogVariant { gauss_seidel, jacobi };

struct LeapfrogOptions {
  LeapfrogVariant variant = LeapfrogVariant::gauss_seidel;
  double tol = 1e-10;  // on ||F||_inf
  int max_iters = 10000;
  InitMode init = InitMode::chord();
  ErrorFunction error;  // optional
  bool track_length = true;
};

SolveResult run_leapfrog(const Manifold& m, const Matrix& p, const Matrix& q,
                         int count, const LeapfrogOptions& opts = {});

/// Same loop from explicit starting waypoints.
SolveResult run_leapfrog(const Manifold& m, Waypoints start,
                         const LeapfrogOptions& opts = {});

}  // namespace geoschwarz
