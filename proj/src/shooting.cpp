#include "geoschwarz/shooting.hpp"

#include <cmath>
#include <sstream>

namespace geoschwarz {

namespace {

Matrix combine(const Matrix& basis, const Vector& coeffs, Eigen::Index rows,
               Eigen::Index cols) {
  Vector flat = basis * coeffs;
  return Eigen::Map<const Matrix>(flat.data(), rows, cols);
}

}  // namespace

ShootingResult shoot_log(const Manifold& m, const Matrix& p, const Matrix& q,
                         const std::optional<Matrix>& v0,
                         const ShootingConfig& cfg,
                         const ShootingObserver& observer) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  const Eigen::Index ambient = rows * cols;

  const std::vector<Matrix> tangents = m.tangent_basis(p);
  const auto k = static_cast<Eigen::Index>(tangents.size());
  Matrix basis(ambient, k);
  for (Eigen::Index j = 0; j < k; ++j)
    basis.col(j) = Eigen::Map<const Vector>(tangents[j].data(), ambient);

  const Matrix start = v0 ? *v0 : m.project(p, q - p);
  Vector alpha = basis.transpose() *
                 Eigen::Map<const Vector>(start.data(), ambient);

  ShootingResult out;
  Matrix v = combine(basis, alpha, rows, cols);
  Matrix r = m.exp(p, v) - q;
  double rn = r.norm();
  out.trace.push_back(rn);
  if (observer) observer(0, v, r);

  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg << "shooting did not converge (" << why << ") after " << out.iters
        << " iterations, residual " << rn;
    throw ShootingDidNotConverge(msg.str(), out.trace);
  };

  Matrix jac(ambient, k);
  while (rn > cfg.tol) {
    if (out.iters >= cfg.max_iters) fail("iteration limit");
    const Matrix base = r + q;  // Exp_p(v)
    const double h = cfg.fd_step_scale * (1.0 + alpha.norm());
    for (Eigen::Index j = 0; j < k; ++j) {
      Matrix shifted = m.exp(p, v + h * tangents[j]);
      jac.col(j) = Eigen::Map<const Vector>(
                       Matrix(shifted - base).data(), ambient) / h;
    }
    const Vector rhs = -Eigen::Map<const Vector>(r.data(), ambient);
    const Vector step = jac.colPivHouseholderQr().solve(rhs);

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= cfg.max_step_halvings; ++halving) {
      const Vector trial_alpha = alpha + lambda * step;
      Matrix trial_v = combine(basis, trial_alpha, rows, cols);
      Matrix trial_r = m.exp(p, trial_v) - q;
      const double trial_rn = trial_r.norm();
      if (trial_rn < rn) {
        alpha = trial_alpha;
        v = std::move(trial_v);
        r = std::move(trial_r);
        rn = trial_rn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++out.iters;
    if (!accepted) fail("step halvings exhausted");
    out.trace.push_back(rn);
    if (observer) observer(out.iters, v, r);
  }

  out.v = std::move(v);
  out.residual_norm = rn;
  out.converged = true;
  return out;
}

}  // namespace geoschwarz
