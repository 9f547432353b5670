#include "geoschwarz/bench.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "geoschwarz/csv.hpp"
#include "geoschwarz/sphere.hpp"
#include "geoschwarz/stiefel.hpp"

namespace geoschwarz {

std::string to_string(Method method) {
  switch (method) {
    case Method::leapfrog_gs: return "leapfrog_gs";
    case Method::leapfrog_jacobi: return "leapfrog_jacobi";
    case Method::newton_schwarz: return "newton_schwarz";
    case Method::global_shooting: return "global_shooting";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::leapfrog_gs, Method::leapfrog_jacobi,
                   Method::newton_schwarz, Method::global_shooting})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string ManifoldSpec::name() const {
  return kind == Kind::sphere ? "sphere" : "stiefel";
}

std::string ManifoldSpec::dims() const {
  return kind == Kind::sphere ? std::to_string(d)
                              : std::to_string(n) + "x" + std::to_string(p);
}

std::unique_ptr<Manifold> ManifoldSpec::make(const ShootingConfig& inner) const {
  if (kind == Kind::sphere) return std::make_unique<SphereGeometry>(d);
  return std::make_unique<StiefelGeometry>(n, p, inner);
}

double ExperimentConfig::resolved_tol() const {
  if (tol) return *tol;
  return manifold.kind == ManifoldSpec::Kind::sphere ? 1e-10 : 1e-8;
}

JacobianMode ExperimentConfig::resolved_jacobian() const {
  if (jacobian) return *jacobian;
  return manifold.kind == ManifoldSpec::Kind::sphere
             ? JacobianMode::dense_analytic
             : JacobianMode::matrix_free;
}

void ExperimentConfig::validate() const {
  if (m < 3) throw std::invalid_argument("m must be >= 3");
  if (!(distance > 0.0)) throw std::invalid_argument("distance must be > 0");
  if (manifold.kind == ManifoldSpec::Kind::sphere) {
    if (manifold.d < 2) throw std::invalid_argument("sphere needs d >= 2");
    if (!(distance < std::numbers::pi))
      throw std::invalid_argument("sphere distance must be < pi");
  } else if (!(manifold.n >= manifold.p && manifold.p >= 1)) {
    throw std::invalid_argument("stiefel needs n >= p >= 1");
  }
  if (methods.empty()) throw std::invalid_argument("no methods selected");
  if (!(resolved_tol() > 0.0)) throw std::invalid_argument("tol must be > 0");
}

EndpointPair gen_endpoint_pair(const Manifold& m, double distance,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EndpointPair pair;
  pair.p = m.random_point(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  Matrix u = m.project(pair.p, z);
  u /= u.norm();
  pair.direction = u;
  pair.q = distance == 0.0 ? pair.p : m.exp(pair.p, distance * u);
  return pair;
}

std::optional<ReferenceSolution> reference_solution(const Manifold& m,
                                                    const EndpointPair& pair,
                                                    double distance) {
  if (dynamic_cast<const SphereGeometry*>(&m) != nullptr) {
    try {
      return ReferenceSolution{Geodesic{pair.p, m.log(pair.p, pair.q)},
                               ReferenceSolution::Source::closed_form};
    } catch (const GeodesicError&) {
      return std::nullopt;
    }
  }
  ShootingConfig cfg;
  cfg.tol = 1e-11;
  try {
    ShootingResult r =
        shoot_log(m, pair.p, pair.q, Matrix(distance * pair.direction), cfg);
    return ReferenceSolution{Geodesic{pair.p, r.v},
                             ReferenceSolution::Source::high_accuracy_shooting};
  } catch (const GeodesicError&) {
    return std::nullopt;
  }
}

ConvergenceRecord global_shooting_baseline(
    const Manifold& m, const Matrix& p, const Matrix& q,
    const ShootingConfig& cfg,
    const std::optional<ReferenceSolution>& reference) {
  ConvergenceRecord record;
  const auto start = std::chrono::steady_clock::now();
  auto observer = [&](int iter, const Matrix& v, const Matrix& r) {
    IterationRow row;
    row.iter = iter;
    row.residual_2 = r.norm();
    row.residual_inf = r.cwiseAbs().maxCoeff();
    row.piecewise_length = v.norm();
    if (reference) row.error_to_reference = (v - reference->geodesic.velocity).norm();
    row.inner_solver_calls = iter == 0 ? 0 : 1;
    row.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    record.rows.push_back(row);
  };
  try {
    shoot_log(m, p, q, std::nullopt, cfg, observer);
    record.converged = true;
    record.status = "converged";
  } catch (const GeodesicError& e) {
    record.status = std::string("failed: ") + e.what();
  }
  return record;
}

std::vector<RunOutput> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ShootingConfig inner;
  inner.tol = cfg.inner_tol;
  const std::unique_ptr<Manifold> manifold = cfg.manifold.make(inner);
  const Manifold& m = *manifold;
  const double tol = cfg.resolved_tol();

  const EndpointPair pair = gen_endpoint_pair(m, cfg.distance, cfg.seed);
  const std::optional<ReferenceSolution> reference =
      reference_solution(m, pair, cfg.distance);
  ErrorFunction error;
  if (reference) error = reference_error(m, reference->geodesic);

  std::vector<RunOutput> outputs;
  for (Method method : cfg.methods) {
    ConvergenceRecord record;
    try {
      switch (method) {
        case Method::leapfrog_gs:
        case Method::leapfrog_jacobi: {
          LeapfrogOptions opts;
          opts.variant = method == Method::leapfrog_gs
                             ? LeapfrogVariant::gauss_seidel
                             : LeapfrogVariant::jacobi;
          opts.tol = tol;
          opts.max_iters = cfg.max_iters;
          opts.init = cfg.init;
          opts.error = error;
          record = run_leapfrog(m, pair.p, pair.q, cfg.m, opts).record;
          break;
        }
        case Method::newton_schwarz: {
          NewtonConfig ncfg;
          ncfg.tol = tol;
          ncfg.max_iters = cfg.newton_max_iters;
          ncfg.jacobian_mode = cfg.resolved_jacobian();
          record = run_preconditioned_leapfrog(m, pair.p, pair.q, cfg.m, ncfg,
                                               cfg.init, error)
                       .record;
          break;
        }
        case Method::global_shooting: {
          ShootingConfig scfg;
          scfg.tol = tol;
          scfg.max_iters = cfg.shooting_max_iters;
          record = global_shooting_baseline(m, pair.p, pair.q, scfg, reference);
          break;
        }
      }
    } catch (const std::exception& e) {
      // Initialization failures and the like: keep going with other methods.
      record.converged = false;
      record.status = std::string("failed: ") + e.what();
    }

    CsvRunInfo info{cfg.experiment_id, to_string(method),
                    cfg.manifold.name(), cfg.manifold.dims(),
                    cfg.m, cfg.distance, cfg.seed, cfg.record_timing};
    const auto path =
        cfg.output_dir / (cfg.experiment_id + "__" + to_string(method) + ".csv");
    write_record_csv(path, info, record);
    outputs.push_back({method, path, std::move(record)});
  }
  return outputs;
}

}  // namespace geoschwarz
