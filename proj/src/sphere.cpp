#include "geoschwarz/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geoschwarz {

namespace {

// sin(t)/t, with a truncated series near zero.
double sinc(double t) {
  if (t < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

}  // namespace

SphereGeometry::SphereGeometry(Eigen::Index d) : d_(d) {
  if (d < 2) throw std::invalid_argument("sphere: ambient dimension must be >= 2");
}

Matrix SphereGeometry::exp(const Matrix& x, const Matrix& v) const {
  const double nv = v.norm();
  return x * std::cos(nv) + v * sinc(nv);
}

Matrix SphereGeometry::log(const Matrix& x, const Matrix& y,
                           const Matrix*) const {
  const double c = (x.array() * y.array()).sum();
  if (1.0 + c <= kAntipodalEps)
    throw NonUniqueGeodesic("sphere log: endpoints are antipodal");
  Matrix w = y - c * x;
  const double nw = w.norm();
  if (nw == 0.0) return Matrix::Zero(x.rows(), x.cols());
  // atan2(|P_x y|, x^T y) equals arccos(x^T y) on the sphere and stays
  // accurate for nearby points.
  const double theta = std::atan2(nw, std::clamp(c, -1.0, 1.0));
  return (theta / nw) * w;
}

Matrix SphereGeometry::project(const Matrix& x, const Matrix& z) const {
  return z - x * (x.array() * z.array()).sum();
}

Matrix SphereGeometry::retract(const Matrix& x, const Matrix& v) const {
  if (v.isZero(0.0)) return x;
  Matrix s = x + v;
  const double ns = s.norm();
  if (ns < 1e-14) throw DegenerateRetraction("sphere retraction: x + v vanishes");
  return s / ns;
}

Matrix SphereGeometry::normalize(const Matrix& z) const {
  const double nz = z.norm();
  if (nz < 1e-14) throw DegenerateInitialization("sphere: cannot normalize zero vector");
  return z / nz;
}

double SphereGeometry::constraint_residual(const Matrix& x) const {
  return std::abs(x.norm() - 1.0);
}

double SphereGeometry::tangency_residual(const Matrix& x,
                                         const Matrix& v) const {
  return std::abs((x.array() * v.array()).sum());
}

MidpointJacobianBlocks SphereGeometry::midpoint_jacobian(
    const Matrix& xi, const Matrix& xj) const {
  // On the sphere M(x, y) = (x + y) / |x + y| for non-antipodal unit x, y,
  // so the extension is N(N(x) + N(y)) with N(z) = z / |z| and
  // dN(z) = (I - N(z) N(z)^T) / |z|.
  const double ni = xi.norm();
  const double nj = xj.norm();
  const Matrix ui = xi / ni;
  const Matrix uj = xj / nj;
  if (1.0 + (ui.array() * uj.array()).sum() <= kAntipodalEps)
    throw NonUniqueGeodesic("sphere midpoint jacobian: endpoints are antipodal");
  const Matrix s = ui + uj;
  const double ns = s.norm();
  const Matrix mid = s / ns;
  const Matrix eye = Matrix::Identity(d_, d_);
  const Matrix outer = (eye - mid * mid.transpose()) / ns;
  return {outer * ((eye - ui * ui.transpose()) / ni),
          outer * ((eye - uj * uj.transpose()) / nj)};
}

}  // namespace geoschwarz
