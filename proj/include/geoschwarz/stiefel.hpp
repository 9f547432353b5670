#pragma once

#include "geoschwarz/manifold.hpp"
#include "geoschwarz/shooting.hpp"

namespace geoschwarz {

/// Stiefel manifold St(n, p) = {Q in R^{n x p} : Q^T Q = I_p} with the
/// embedded (Frobenius) metric. Geodesics solve c'' + c (c'^T c') = 0.
class StiefelGeometry : public Manifold {
 public:
  StiefelGeometry(Eigen::Index n, Eigen::Index p, ShootingConfig shooting = {});

  std::string name() const override { return "stiefel"; }
  std::string dims() const override;
  Eigen::Index rows() const override { return n_; }
  Eigen::Index cols() const override { return p_; }
  Eigen::Index dimension() const override { return n_ * p_ - p_ * (p_ + 1) / 2; }

  /// Closed-form geodesic endpoint
  ///   [Y V] expm([[A, -S], [I, A]]) [I; 0] expm(-A),  A = Y^T V, S = V^T V.
  Matrix exp(const Matrix& y, const Matrix& v) const override;
  /// Single shooting; throws ShootingDidNotConverge.
  Matrix log(const Matrix& y0, const Matrix& y1,
             const Matrix* warm = nullptr) const override;
  /// Z - Y sym(Y^T Z).
  Matrix project(const Matrix& y, const Matrix& z) const override;
  /// Q factor of the thin QR of Y + V with positive diagonal R.
  Matrix retract(const Matrix& y, const Matrix& v) const override;
  Matrix normalize(const Matrix& z) const override;
  double constraint_residual(const Matrix& y) const override;
  double tangency_residual(const Matrix& y, const Matrix& v) const override;

  /// Closed-form orthonormal basis {Y (E_ij - E_ji)/sqrt(2)} u {Y_perp E_kj}.
  std::vector<Matrix> tangent_basis(const Matrix& y) const override;

  const ShootingConfig& shooting_config() const { return shooting_; }

 private:
  Eigen::Index n_;
  Eigen::Index p_;
  ShootingConfig shooting_;
};

/// Thin QR Q factor with R_ii > 0; throws DegenerateRetraction when z is
/// (numerically) rank deficient.
Matrix qf(const Matrix& z);

}  // namespace geoschwarz
