#ifndef ROTSPACE_INTERNAL_NUMERIC_H_
#define ROTSPACE_INTERNAL_NUMERIC_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

// Unvalidated kernels shared by the public API and the solver's inner loop.
namespace rotspace::internal {

// 53 random bits mapped onto [0, 1). Platform independent, unlike the
// standard distributions.
inline double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// vee(M - M^T) = 2 sin(theta) * axis for a rotation matrix.
inline Eigen::Vector3d Vee(const Eigen::Matrix3d& m) {
  return Eigen::Vector3d(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

inline double AngleFromParts(double trace, double twice_sine) {
  const double cosine = std::clamp(0.5 * (trace - 1.0), -1.0, 1.0);
  return std::atan2(0.5 * twice_sine, cosine);
}

inline double RotationAngle(const Eigen::Matrix3d& m) {
  return AngleFromParts(m.trace(), Vee(m).norm());
}

// Angle of b^T a without forming a validated matrix.
inline double RelativeAngle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return RotationAngle(b.transpose() * a);
}

inline Eigen::Matrix3d Skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d k;
  k << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return k;
}

// Rodrigues formula R = I + A [r]x + B [r]x^2 with A = sin(t)/t and
// B = (1 - cos(t))/t^2 = 2 sin^2(t/2)/t^2.
inline Eigen::Matrix3d ExpMapUnchecked(const Eigen::Vector3d& r) {
  const double theta = r.norm();
  if (theta == 0.0) return Eigen::Matrix3d::Identity();
  const double half_sine = std::sin(0.5 * theta);
  const double a = std::sin(theta) / theta;
  const double b = 2.0 * half_sine * half_sine / (theta * theta);
  const Eigen::Matrix3d k = Skew(r);
  return Eigen::Matrix3d::Identity() + a * k + b * (k * k);
}

}  // namespace rotspace::internal

#endif  // ROTSPACE_INTERNAL_NUMERIC_H_
