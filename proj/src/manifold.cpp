#include "geoschwarz/manifold.hpp"

#include <cmath>
#include <stdexcept>

namespace geoschwarz {

Matrix Manifold::random_point(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(rows(), cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  return normalize(z);
}

std::vector<Matrix> Manifold::tangent_basis(const Matrix& x) const {
  return tangent_basis_by_projection(*this, x);
}

double Manifold::inner(const Matrix& x, const Matrix& u,
                       const Matrix& v) const {
  if (!same_shape(x) || u.rows() != x.rows() || u.cols() != x.cols() ||
      v.rows() != x.rows() || v.cols() != x.cols())
    throw std::invalid_argument("inner: shape mismatch with base point");
  // A vector tangent at another base point is (generically) not tangent here.
  const double tol = 1e-8;
  if (tangency_residual(x, u) > tol * (1.0 + u.norm()) ||
      tangency_residual(x, v) > tol * (1.0 + v.norm()))
    throw std::invalid_argument("inner: vector not tangent at base point");
  return (u.array() * v.array()).sum();
}

double Manifold::norm(const Matrix& x, const Matrix& v) const {
  return std::sqrt(inner(x, v, v));
}

std::vector<Matrix> tangent_basis_by_projection(const Manifold& m,
                                                const Matrix& x,
                                                double rank_tol) {
  const Eigen::Index target = m.dimension();
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(target));
  for (Eigen::Index j = 0; j < m.cols() && Eigen::Index(basis.size()) < target;
       ++j) {
    for (Eigen::Index i = 0;
         i < m.rows() && Eigen::Index(basis.size()) < target; ++i) {
      Matrix e = Matrix::Zero(m.rows(), m.cols());
      e(i, j) = 1.0;
      Matrix b = m.project(x, e);
      // Modified Gram-Schmidt, two passes.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) b -= (q.array() * b.array()).sum() * q;
      const double nb = b.norm();
      if (nb > rank_tol) basis.push_back(b / nb);
    }
  }
  return basis;
}

Matrix Geodesic::at(const Manifold& m, double t) const {
  if (t == 0.0) return base;
  return m.exp(base, t * velocity);
}

Geodesic connecting_geodesic(const Manifold& m, const Matrix& p,
                             const Matrix& q, const Matrix* warm) {
  return Geodesic{p, m.log(p, q, warm)};
}

double dist(const Manifold& m, const Matrix& p, const Matrix& q,
            const Matrix* warm) {
  return m.log(p, q, warm).norm();
}

Matrix geodesic_point(const Manifold& m, const Matrix& p, const Matrix& q,
                      double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("geodesic_point: t must lie in [0, 1]");
  if (t == 0.0) return p;
  return m.exp(p, t * m.log(p, q));
}

Matrix midpoint(const Manifold& m, const Matrix& x, const Matrix& y) {
  return geodesic_point(m, x, y, 0.5);
}

Matrix midpoint(const Manifold& m, const Matrix& x, const Matrix& y,
                const Matrix* warm, Matrix* log_out) {
  Matrix v = m.log(x, y, warm);
  Matrix mid = m.exp(x, 0.5 * v);
  if (log_out) *log_out = std::move(v);
  return mid;
}

}  // namespace geoschwarz
