#pragma once

#include "geoschwarz/manifold.hpp"

namespace geoschwarz {

/// Unit sphere S^{d-1} in R^d. Points are d x 1 matrices.
class SphereGeometry : public Manifold, public MidpointDerivatives {
 public:
  /// Antipodality threshold on 1 + <x, y>.
  static constexpr double kAntipodalEps = 1e-8;

  explicit SphereGeometry(Eigen::Index d);

  std::string name() const override { return "sphere"; }
  std::string dims() const override { return std::to_string(d_); }
  Eigen::Index rows() const override { return d_; }
  Eigen::Index cols() const override { return 1; }
  Eigen::Index dimension() const override { return d_ - 1; }

  Matrix exp(const Matrix& x, const Matrix& v) const override;
  /// Closed-form logarithm; throws NonUniqueGeodesic for (near) antipodes.
  Matrix log(const Matrix& x, const Matrix& y,
             const Matrix* warm = nullptr) const override;
  Matrix project(const Matrix& x, const Matrix& z) const override;
  /// (x + v) / ||x + v||; throws DegenerateRetraction when x + v vanishes.
  Matrix retract(const Matrix& x, const Matrix& v) const override;
  Matrix normalize(const Matrix& z) const override;
  double constraint_residual(const Matrix& x) const override;
  double tangency_residual(const Matrix& x, const Matrix& v) const override;

  /// Exact derivative blocks of the ambient extension
  /// (x, y) -> M(x/||x||, y/||y||) of the midpoint map.
  MidpointJacobianBlocks midpoint_jacobian(const Matrix& xi,
                                           const Matrix& xj) const override;

 private:
  Eigen::Index d_;
};

}  // namespace geoschwarz
