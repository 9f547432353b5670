#include "geoschwarz/leapfrog.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "record_builder.hpp"

namespace geoschwarz {

namespace {

[[noreturn]] void rethrow_for_segment(int index) {
  std::ostringstream msg;
  try {
    throw;
  } catch (const std::exception& e) {
    msg << "midpoint for waypoint " << index << " failed: " << e.what();
  }
  throw SegmentError(msg.str(), index, std::current_exception());
}

Matrix gaussian_like(const Matrix& shape, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(shape.rows(), shape.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  return z;
}

}  // namespace

Matrix MidpointSolver::operator()(int slot, const Matrix& x, const Matrix& y,
                                  bool remember) {
  if (slot >= int(warm_.size())) warm_.resize(slot + 1);
  auto& warm = warm_[slot];
  Matrix log;
  ++calls_;
  Matrix mid = midpoint(manifold_, x, y, warm ? &*warm : nullptr, &log);
  if (remember) warm = std::move(log);
  return mid;
}

Waypoints init_waypoints(const Manifold& m, const Matrix& p, const Matrix& q,
                         int count, const InitMode& mode) {
  if (count < 3)
    throw std::invalid_argument("init_waypoints: need at least 3 points");
  Waypoints w;
  w.points.reserve(count);
  w.points.push_back(p);
  for (int i = 1; i < count - 1; ++i) {
    const double s = double(i) / double(count - 1);
    try {
      w.points.push_back(m.normalize((1.0 - s) * p + s * q));
    } catch (const GeodesicError& e) {
      throw DegenerateInitialization(
          "init_waypoints: degenerate chord combination at waypoint " +
          std::to_string(i) + ": " + e.what());
    }
  }
  w.points.push_back(q);

  if (mode.kind == InitMode::Kind::perturbed && mode.sigma != 0.0) {
    std::mt19937_64 rng(mode.seed);
    for (int i = 1; i < count - 1; ++i) {
      Matrix& x = w.points[i];
      Matrix t = m.project(x, gaussian_like(x, rng));
      const double nt = t.norm();
      if (nt == 0.0) continue;
      x = m.retract(x, (mode.sigma / nt) * t);
    }
  }
  return w;
}

Waypoints geodesic_waypoints(const Manifold& m, const Matrix& p,
                             const Matrix& v, int count) {
  Waypoints w;
  w.points.push_back(p);
  for (int i = 1; i < count; ++i)
    w.points.push_back(m.exp(p, (double(i) / double(count - 1)) * v));
  return w;
}

Waypoints jacobi_map_G(MidpointSolver& solver, const Waypoints& w) {
  Waypoints out = w;
  for (int i = 1; i < w.m() - 1; ++i) {
    try {
      out.points[i] = solver(i, w.points[i - 1], w.points[i + 1]);
    } catch (const GeodesicError&) {
      rethrow_for_segment(i);
    }
  }
  return out;
}

Waypoints jacobi_map_G(const Manifold& m, const Waypoints& w) {
  MidpointSolver solver(m);
  return jacobi_map_G(solver, w);
}

Waypoints gauss_seidel_sweep(MidpointSolver& solver, const Waypoints& w) {
  Waypoints out = w;
  for (int i = 1; i < w.m() - 1; ++i) {
    try {
      out.points[i] = solver(i, out.points[i - 1], out.points[i + 1]);
    } catch (const GeodesicError&) {
      rethrow_for_segment(i);
    }
  }
  return out;
}

Waypoints gauss_seidel_sweep(const Manifold& m, const Waypoints& w) {
  MidpointSolver solver(m);
  return gauss_seidel_sweep(solver, w);
}

Residual residual_F(MidpointSolver& solver, const Waypoints& w) {
  Residual r;
  r.mapped = jacobi_map_G(solver, w);
  const auto block = w.points.front().size();
  r.stacked.resize(block * w.interior());
  for (int i = 1; i < w.m() - 1; ++i) {
    const Matrix diff = w.points[i] - r.mapped.points[i];
    r.stacked.segment((i - 1) * block, block) =
        Eigen::Map<const Vector>(diff.data(), block);
  }
  r.norm2 = r.stacked.norm();
  r.norm_inf = r.stacked.size() ? r.stacked.cwiseAbs().maxCoeff() : 0.0;
  return r;
}

Residual residual_F(const Manifold& m, const Waypoints& w) {
  MidpointSolver solver(m);
  return residual_F(solver, w);
}

double piecewise_length(const Manifold& m, const Waypoints& w,
                        std::vector<std::optional<Matrix>>* warm) {
  double total = 0.0;
  for (int i = 0; i + 1 < w.m(); ++i) {
    const Matrix* start = nullptr;
    if (warm && (*warm)[i]) start = &*(*warm)[i];
    Matrix v = m.log(w.points[i], w.points[i + 1], start);
    total += v.norm();
    if (warm) (*warm)[i] = std::move(v);
  }
  return total;
}

std::optional<int> ConvergenceRecord::first_iter_below(double tol) const {
  for (const auto& row : rows)
    if (row.residual_inf <= tol) return row.iter;
  return std::nullopt;
}

ErrorFunction reference_error(const Manifold& m, const Geodesic& reference) {
  return [&m, reference](const Waypoints& w) {
    double worst = 0.0;
    for (int i = 1; i < w.m() - 1; ++i)
      worst = std::max(worst,
                       (w.points[i] - reference.at(m, w.time(i))).norm());
    return worst;
  };
}

SolveResult run_leapfrog(const Manifold& m, const Matrix& p, const Matrix& q,
                         int count, const LeapfrogOptions& opts) {
  return run_leapfrog(m, init_waypoints(m, p, q, count, opts.init), opts);
}

SolveResult run_leapfrog(const Manifold& m, Waypoints start,
                         const LeapfrogOptions& opts) {
  MidpointSolver solver(m);
  detail::RecordBuilder builder(m, opts.error, opts.track_length, solver);
  Waypoints w = std::move(start);
  ConvergenceRecord& record = builder.record;
  try {
    Residual f = residual_F(solver, w);
    builder.add(0, w, f);
    int k = 0;
    while (f.norm_inf > opts.tol && k < opts.max_iters) {
      if (opts.variant == LeapfrogVariant::jacobi)
        w = std::move(f.mapped);  // G(X^k) is already available
      else
        w = gauss_seidel_sweep(solver, w);
      ++k;
      f = residual_F(solver, w);
      builder.add(k, w, f);
    }
    record.converged = f.norm_inf <= opts.tol;
    record.status = record.converged ? "converged" : "max_iters";
  } catch (const GeodesicError& e) {
    record.converged = false;
    record.status = std::string("failed: ") + e.what();
  }
  return {std::move(w), std::move(builder.record)};
}

}  // namespace geoschwarz
