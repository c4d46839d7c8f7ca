#include "rotspace/rotation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "rotspace/internal/numeric.h"

namespace rotspace {

using std::numbers::pi;

Angle::Angle(double radians, double tolerance) {
  if (!(radians >= -tolerance && radians <= pi + tolerance)) {
    throw std::invalid_argument("angle " + std::to_string(radians) +
                                " outside [0, pi]");
  }
  radians_ = std::clamp(radians, 0.0, pi);
}

RotationMatrix::RotationMatrix(const Eigen::Matrix3d& m,
                               double orthonormality_tolerance,
                               double determinant_tolerance)
    : m_(m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("rotation matrix has non-finite entries");
  }
  const double orthonormality_error =
      (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (orthonormality_error > orthonormality_tolerance) {
    throw std::invalid_argument("matrix is not orthonormal (max |M^T M - I| = " +
                                std::to_string(orthonormality_error) + ")");
  }
  const double det = m.determinant();
  if (std::abs(det - 1.0) > determinant_tolerance) {
    throw std::invalid_argument("matrix determinant " + std::to_string(det) +
                                " is not 1");
  }
}

AxisAngle::AxisAngle(const Eigen::Vector3d& r, double tolerance) : r_(r) {
  if (!r.allFinite()) {
    throw std::invalid_argument("axis-angle vector has non-finite entries");
  }
  if (r.norm() > pi + tolerance) {
    throw std::invalid_argument("axis-angle norm " + std::to_string(r.norm()) +
                                " exceeds pi");
  }
}

RotationMatrix ExpMap(const AxisAngle& r) {
  return RotationMatrix(internal::ExpMapUnchecked(r.vector()));
}

AxisAngle LogMap(const RotationMatrix& rotation) {
  const Eigen::Matrix3d& m = rotation.matrix();
  const double theta = AngleOf(rotation).radians();
  if (theta == 0.0) return AxisAngle();

  const Eigen::Vector3d skew = internal::Vee(m);
  if (theta <= pi / 2) {
    return AxisAngle(Eigen::Vector3d(theta * skew.normalized()));
  }

  // (R + R^T)/2 = cos(theta) I + (1 - cos(theta)) a a^T. The column with the
  // largest diagonal entry is the best conditioned multiple of the axis.
  const double cos_theta = std::cos(theta);
  const Eigen::Matrix3d outer =
      (0.5 * (m + m.transpose()) - cos_theta * Eigen::Matrix3d::Identity()) /
      (1.0 - cos_theta);
  Eigen::Index k = 0;
  outer.diagonal().maxCoeff(&k);
  Eigen::Vector3d axis = outer.col(k).normalized();

  const double alignment = axis.dot(skew);
  if (std::abs(alignment) > kBallTolerance) {
    if (alignment < 0.0) axis = -axis;
  } else {
    // Angle pi: r and -r describe the same rotation.
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) > kBallTolerance) {
        if (axis[i] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return AxisAngle(Eigen::Vector3d(theta * axis));
}

Angle AngleOf(const RotationMatrix& rotation) {
  return Angle(internal::RotationAngle(rotation.matrix()));
}

RotationMatrix Compose(const RotationMatrix& first, const RotationMatrix& second) {
  return RotationMatrix(Eigen::Matrix3d(second.matrix() * first.matrix()));
}

RotationMatrix Inverse(const RotationMatrix& rotation) {
  return RotationMatrix(Eigen::Matrix3d(rotation.m_.transpose()),
                        RotationMatrix::Unchecked{});
}

Angle AngularDistance(const RotationMatrix& a, const RotationMatrix& b) {
  return Angle(internal::RelativeAngle(a.matrix(), b.matrix()));
}

Angle EnclosedAngle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                    double tolerance) {
  if (std::abs(a.norm() - 1.0) > tolerance || std::abs(b.norm() - 1.0) > tolerance) {
    throw std::invalid_argument("enclosed angle needs unit vectors");
  }
  return Angle(std::acos(std::clamp(a.dot(b), -1.0, 1.0)));
}

RotationMatrix RandomRotation(std::mt19937_64& rng) {
  const double u1 = internal::Uniform01(rng);
  const double u2 = internal::Uniform01(rng);
  const double u3 = internal::Uniform01(rng);
  const double s1 = std::sqrt(1.0 - u1);
  const double s2 = std::sqrt(u1);
  const Eigen::Quaterniond q(s2 * std::cos(2 * pi * u3), s1 * std::sin(2 * pi * u2),
                             s1 * std::cos(2 * pi * u2), s2 * std::sin(2 * pi * u3));
  return RotationMatrix(q.normalized().toRotationMatrix());
}

Eigen::Vector3d RandomUnitVector(std::mt19937_64& rng) {
  const double z = 2.0 * internal::Uniform01(rng) - 1.0;
  const double azimuth = 2.0 * pi * internal::Uniform01(rng);
  const double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Eigen::Vector3d(radius * std::cos(azimuth), radius * std::sin(azimuth), z)
      .normalized();
}

RotationMatrix Reorthonormalize(const Eigen::Matrix3d& m, int max_iterations) {
  if (!m.allFinite() || !(m.determinant() > 0.0)) {
    throw std::invalid_argument(
        "cannot reorthonormalize a singular or reflecting matrix");
  }
  Eigen::Matrix3d current = m;
  for (int i = 0; i < max_iterations; ++i) {
    const Eigen::Matrix3d next = 0.5 * (current + current.inverse().transpose());
    const double change = (next - current).cwiseAbs().maxCoeff();
    current = next;
    if (change <= 1e-14) return RotationMatrix(current);
  }
  throw std::invalid_argument("reorthonormalization did not converge");
}

}  // namespace rotspace
