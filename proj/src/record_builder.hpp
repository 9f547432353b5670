#pragma once

#include <chrono>

#include "geoschwarz/leapfrog.hpp"

namespace geoschwarz::detail {

// Appends convergence rows with cumulative wall time and per-iteration
// inner solver call counts.
class RecordBuilder {
 public:
  RecordBuilder(const Manifold& m, const ErrorFunction& error,
                bool track_length, const MidpointSolver& solver)
      : manifold_(m),
        error_(error),
        track_length_(track_length),
        solver_(solver),
        start_(std::chrono::steady_clock::now()),
        segment_warm_(0) {}

  void add(int iter, const Waypoints& w, const Residual& f,
           int krylov_iters = 0) {
    IterationRow row;
    row.iter = iter;
    row.residual_2 = f.norm2;
    row.residual_inf = f.norm_inf;
    row.inner_solver_calls = solver_.calls() - last_calls_;
    last_calls_ = solver_.calls();
    row.krylov_iters = krylov_iters;
    if (track_length_) {
      if (segment_warm_.empty()) segment_warm_.resize(w.m() - 1);
      try {
        row.piecewise_length = piecewise_length(manifold_, w, &segment_warm_);
      } catch (const GeodesicError&) {
        row.piecewise_length.reset();
      }
    }
    if (error_) row.error_to_reference = error_(w);
    row.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
    record.rows.push_back(row);
  }

  ConvergenceRecord record;

 private:
  const Manifold& manifold_;
  const ErrorFunction& error_;
  bool track_length_;
  const MidpointSolver& solver_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::optional<Matrix>> segment_warm_;
  long last_calls_ = 0;
};

}  // namespace geoschwarz::detail
