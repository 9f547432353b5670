#pragma once

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "geoschwarz/errors.hpp"

namespace geoschwarz {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A Riemannian submanifold of a matrix space R^{rows x cols} with the metric
/// inherited from the ambient Frobenius inner product.
///
/// Points and tangent vectors are plain ambient arrays; a sphere point is a
/// d x 1 matrix. Implementations must be pure: every method is const, free of
/// shared mutable state and bitwise deterministic.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  /// Short dimension label, e.g. "100" or "40x2".
  virtual std::string dims() const = 0;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  /// Intrinsic dimension of the manifold.
  virtual Eigen::Index dimension() const = 0;

  virtual Matrix exp(const Matrix& x, const Matrix& v) const = 0;

  /// Riemannian logarithm Log_x(y). May be iterative; `warm` is an optional
  /// starting tangent at x. Throws a GeodesicError on failure, never returns
  /// an unconverged value.
  virtual Matrix log(const Matrix& x, const Matrix& y,
                     const Matrix* warm = nullptr) const = 0;

  /// Orthogonal projection of an ambient array onto T_x M.
  virtual Matrix project(const Matrix& x, const Matrix& z) const = 0;
  virtual Matrix retract(const Matrix& x, const Matrix& v) const = 0;

  /// Maps an ambient array near the manifold onto it. Used for chord
  /// initialization and for the ambient extension of the midpoint map.
  virtual Matrix normalize(const Matrix& z) const = 0;

  virtual double constraint_residual(const Matrix& x) const = 0;
  virtual double tangency_residual(const Matrix& x, const Matrix& v) const = 0;

  virtual Matrix random_point(std::mt19937_64& rng) const;

  /// Orthonormal basis of T_x M. The default projects the ambient canonical
  /// basis and orthonormalizes it; geometries may override with a closed form.
  virtual std::vector<Matrix> tangent_basis(const Matrix& x) const;

  /// Metric on T_x M. Throws std::invalid_argument when u or v has the wrong
  /// shape or is not tangent at x.
  double inner(const Matrix& x, const Matrix& u, const Matrix& v) const;
  double norm(const Matrix& x, const Matrix& v) const;

  bool same_shape(const Matrix& a) const {
    return a.rows() == rows() && a.cols() == cols();
  }
};

/// Derivatives of the midpoint map with respect to its two arguments.
struct MidpointJacobianBlocks {
  Matrix g_first;   // d M(x, y) / dx
  Matrix g_second;  // d M(x, y) / dy
};

/// Geometries whose midpoint map has closed-form derivative blocks.
class MidpointDerivatives {
 public:
  virtual ~MidpointDerivatives() = default;
  virtual MidpointJacobianBlocks midpoint_jacobian(const Matrix& xi,
                                                   const Matrix& xj) const = 0;
};

/// Projected-canonical-basis construction behind Manifold::tangent_basis,
/// exposed so that closed-form overrides can be checked against it.
std::vector<Matrix> tangent_basis_by_projection(const Manifold& m,
                                                const Matrix& x,
                                                double rank_tol = 1e-10);

/// c(t) = Exp_base(t * velocity), t in [0, 1].
struct Geodesic {
  Matrix base;
  Matrix velocity;

  Matrix at(const Manifold& m, double t) const;
  double length() const { return velocity.norm(); }
};

Geodesic connecting_geodesic(const Manifold& m, const Matrix& p,
                             const Matrix& q, const Matrix* warm = nullptr);

/// Riemannian distance ||Log_p(q)||.
double dist(const Manifold& m, const Matrix& p, const Matrix& q,
            const Matrix* warm = nullptr);

/// Exp_p(t Log_p(q)); throws std::invalid_argument for t outside [0, 1].
Matrix geodesic_point(const Manifold& m, const Matrix& p, const Matrix& q,
                      double t);

/// Midpoint map Exp_x(Log_x(y) / 2). Identical to geodesic_point(x, y, 0.5).
Matrix midpoint(const Manifold& m, const Matrix& x, const Matrix& y);

/// Midpoint with an optional warm start for Log; stores the logarithm used
/// in `log_out` when non-null.
Matrix midpoint(const Manifold& m, const Matrix& x, const Matrix& y,
                const Matrix* warm, Matrix* log_out);

}  // namespace geoschwarz
