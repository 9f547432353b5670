#include "geoschwarz/stiefel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace geoschwarz {

Matrix qf(const Matrix& z) {
  const Eigen::Index n = z.rows();
  const Eigen::Index p = z.cols();
  Eigen::HouseholderQR<Matrix> qr(z);
  const Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const double scale = r.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0) ||
      r.diagonal().cwiseAbs().minCoeff() < 1e-14 * std::max(1.0, scale))
    throw DegenerateRetraction("qf: matrix is rank deficient");
  Matrix q = qr.householderQ() * Matrix::Identity(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

StiefelGeometry::StiefelGeometry(Eigen::Index n, Eigen::Index p,
                                 ShootingConfig shooting)
    : n_(n), p_(p), shooting_(shooting) {
  if (!(n >= p && p >= 1))
    throw std::invalid_argument("stiefel: requires n >= p >= 1");
}

std::string StiefelGeometry::dims() const {
  return std::to_string(n_) + "x" + std::to_string(p_);
}

Matrix StiefelGeometry::exp(const Matrix& y, const Matrix& v) const {
  if (v.isZero(0.0)) return y;
  const Eigen::Index p = p_;
  const Matrix yt_v = y.transpose() * v;
  const Matrix a = 0.5 * (yt_v - yt_v.transpose());
  Matrix block(2 * p, 2 * p);
  block.topLeftCorner(p, p) = a;
  block.topRightCorner(p, p) = -(v.transpose() * v);
  block.bottomLeftCorner(p, p) = Matrix::Identity(p, p);
  block.bottomRightCorner(p, p) = a;
  const Matrix e = block.exp();
  const Matrix right = (-a).exp();
  return (y * e.topLeftCorner(p, p) + v * e.bottomLeftCorner(p, p)) * right;
}

Matrix StiefelGeometry::log(const Matrix& y0, const Matrix& y1,
                            const Matrix* warm) const {
  if (y0 == y1) return Matrix::Zero(n_, p_);
  std::optional<Matrix> start;
  if (warm) start = *warm;
  return shoot_log(*this, y0, y1, start, shooting_).v;
}

Matrix StiefelGeometry::project(const Matrix& y, const Matrix& z) const {
  const Matrix yt_z = y.transpose() * z;
  return z - y * (0.5 * (yt_z + yt_z.transpose()));
}

Matrix StiefelGeometry::retract(const Matrix& y, const Matrix& v) const {
  if (v.isZero(0.0)) return y;
  return qf(y + v);
}

Matrix StiefelGeometry::normalize(const Matrix& z) const {
  try {
    return qf(z);
  } catch (const DegenerateRetraction&) {
    throw DegenerateInitialization("stiefel: cannot normalize rank-deficient matrix");
  }
}

double StiefelGeometry::constraint_residual(const Matrix& y) const {
  return (y.transpose() * y - Matrix::Identity(p_, p_)).norm();
}

double StiefelGeometry::tangency_residual(const Matrix& y,
                                          const Matrix& v) const {
  const Matrix yt_v = y.transpose() * v;
  return (yt_v + yt_v.transpose()).norm();
}

std::vector<Matrix> StiefelGeometry::tangent_basis(const Matrix& y) const {
  // Complete Y to an orthonormal basis of R^n.
  Eigen::HouseholderQR<Matrix> qr(y);
  const Matrix full = qr.householderQ();
  const Matrix perp = full.rightCols(n_ - p_);

  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(dimension()));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < p_; ++i) {
    for (Eigen::Index j = i + 1; j < p_; ++j) {
      Matrix b = Matrix::Zero(n_, p_);
      b.col(j) += inv_sqrt2 * y.col(i);
      b.col(i) -= inv_sqrt2 * y.col(j);
      basis.push_back(std::move(b));
    }
  }
  for (Eigen::Index j = 0; j < p_; ++j) {
    for (Eigen::Index k = 0; k < n_ - p_; ++k) {
      Matrix b = Matrix::Zero(n_, p_);
      b.col(j) = perp.col(k);
      basis.push_back(std::move(b));
    }
  }
  return basis;
}

}  // namespace geoschwarz
