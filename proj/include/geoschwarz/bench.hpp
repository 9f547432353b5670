#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geoschwarz/leapfrog.hpp"
#include "geoschwarz/newton_schwarz.hpp"
#include "geoschwarz/shooting.hpp"

namespace geoschwarz {

enum class Method { leapfrog_gs, leapfrog_jacobi, newton_schwarz, global_shooting };

std::string to_string(Method method);
/// Throws std::invalid_argument on unknown names.
Method parse_method(const std::string& name);

struct ManifoldSpec {
  enum class Kind { sphere, stiefel };
  Kind kind = Kind::sphere;
  int d = 3;  // sphere ambient dimension
  int n = 3;  // stiefel rows
  int p = 1;  // stiefel columns

  static ManifoldSpec sphere(int d) { return {Kind::sphere, d, 0, 0}; }
  static ManifoldSpec stiefel(int n, int p) { return {Kind::stiefel, 0, n, p}; }

  std::string name() const;
  std::string dims() const;
  /// `inner` configures iterative logarithms (ignored by the sphere).
  std::unique_ptr<Manifold> make(const ShootingConfig& inner = {}) const;
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  ManifoldSpec manifold;
  int m = 4;
  double distance = 1.0;  // radians / metric units
  std::vector<Method> methods{Method::leapfrog_gs, Method::newton_schwarz};
  std::uint64_t seed = 1;
  std::optional<double> tol;  // default: 1e-10 sphere, 1e-8 stiefel
  int max_iters = 10000;      // leapfrog variants
  int newton_max_iters = 50;
  int shooting_max_iters = 100;
  InitMode init = InitMode::chord();
  std::optional<JacobianMode> jacobian;  // default: dense_analytic sphere, matrix_free stiefel
  double inner_tol = 1e-11;              // iterative Log tolerance inside solvers
  std::filesystem::path output_dir = "out";
  bool record_timing = true;

  double resolved_tol() const;
  JacobianMode resolved_jacobian() const;
  /// Throws std::invalid_argument when the configuration is unusable.
  void validate() const;
};

struct EndpointPair {
  Matrix p;
  Matrix q;
  Matrix direction;  // unit tangent at p with q = Exp_p(distance * direction)
};

/// Seeded endpoints: p random on the manifold, u a random unit tangent,
/// q = Exp_p(distance * u).
EndpointPair gen_endpoint_pair(const Manifold& m, double distance,
                               std::uint64_t seed);

struct ReferenceSolution {
  enum class Source { closed_form, high_accuracy_shooting };
  Geodesic geodesic;
  Source source = Source::closed_form;
};

/// Closed-form Log when the geometry has one, otherwise shooting at tol
/// 1e-11 warm-started from the generating tangent. Empty when it fails.
std::optional<ReferenceSolution> reference_solution(const Manifold& m,
                                                    const EndpointPair& pair,
                                                    double distance);

/// Runs single shooting between the endpoints and records one row per
/// Gauss-Newton iteration in the shared record layout.
ConvergenceRecord global_shooting_baseline(
    const Manifold& m, const Matrix& p, const Matrix& q,
    const ShootingConfig& cfg,
    const std::optional<ReferenceSolution>& reference = std::nullopt);

struct RunOutput {
  Method method;
  std::filesystem::path csv_path;
  ConvergenceRecord record;
};

/// Runs every requested method and writes one CSV per method to
/// output_dir/<experiment_id>__<method>.csv. Solver failures end up in the
/// status column; the remaining methods still run.
std::vector<RunOutput> run_experiment(const ExperimentConfig& cfg);

/// Expands parameter sweeps: one config per combination.
std::vector<ExperimentConfig> load_config_file(const std::filesystem::path& path);
std::vector<ExperimentConfig> parse_config_text(const std::string& text);

/// fig2, fig3, fig4, fig4-desk. Throws std::invalid_argument otherwise.
std::vector<ExperimentConfig> preset(const std::string& name);

}  // namespace geoschwarz
