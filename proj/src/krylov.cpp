#include "geoschwarz/krylov.hpp"

#include <cmath>

namespace geoschwarz {

GmresResult gmres(const LinearOperator& op, const Vector& b,
                  const GmresOptions& opts) {
  GmresResult out;
  out.x = Vector::Zero(b.size());
  out.history.push_back(1.0);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }

  const int restart = std::max(1, opts.restart);
  Vector r = b;
  while (out.iters < opts.max_iters) {
    const double beta = r.norm();
    if (beta / bnorm <= opts.rel_tol) {
      out.converged = true;
      return out;
    }
    std::vector<Vector> basis;
    basis.push_back(r / beta);
    Matrix hess = Matrix::Zero(restart + 1, restart);
    Vector cs = Vector::Zero(restart), sn = Vector::Zero(restart);
    Vector g = Vector::Zero(restart + 1);
    g(0) = beta;

    int j = 0;
    bool reached = false;
    for (; j < restart && out.iters < opts.max_iters; ++j) {
      Vector w = op(basis[j]);
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = basis[i].dot(w);
        w -= hess(i, j) * basis[i];
      }
      hess(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * hess(i, j) + sn(i) * hess(i + 1, j);
        hess(i + 1, j) = -sn(i) * hess(i, j) + cs(i) * hess(i + 1, j);
        hess(i, j) = t;
      }
      const double denom = std::hypot(hess(j, j), hess(j + 1, j));
      cs(j) = denom == 0.0 ? 1.0 : hess(j, j) / denom;
      sn(j) = denom == 0.0 ? 0.0 : hess(j + 1, j) / denom;
      const double h_next = hess(j + 1, j);
      hess(j, j) = denom;
      hess(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);
      ++out.iters;
      const double rel = std::abs(g(j + 1)) / bnorm;
      out.history.push_back(rel);
      if (rel <= opts.rel_tol || h_next == 0.0) {
        reached = true;
        ++j;
        break;
      }
      basis.push_back(w / h_next);
    }

    const Vector y = hess.topLeftCorner(j, j)
                         .triangularView<Eigen::Upper>()
                         .solve(g.head(j));
    for (int i = 0; i < j; ++i) out.x += y(i) * basis[i];
    // Trust the Arnoldi estimate at the end of a cycle; the true residual
    // is only formed to restart.
    if (reached) {
      out.converged = true;
      return out;
    }
    if (out.iters >= opts.max_iters) break;
    r = b - op(out.x);
  }
  return out;
}

}  // namespace geoschwarz
