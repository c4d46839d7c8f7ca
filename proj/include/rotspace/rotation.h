#ifndef ROTSPACE_ROTATION_H_
#define ROTSPACE_ROTATION_H_

#include <random>

#include <Eigen/Core>

namespace rotspace {

// Validation tolerances. Each constructor takes an override.
inline constexpr double kOrthonormalityTolerance = 1e-9;
inline constexpr double kDeterminantTolerance = 1e-9;
inline constexpr double kBallTolerance = 1e-12;
inline constexpr double kUnitNormTolerance = 1e-9;
inline constexpr double kAngleTolerance = 1e-12;

// Rotation angle in [0, pi] radians. Values that overshoot the interval by
// less than the tolerance are snapped onto it.
class Angle {
 public:
  Angle() = default;
  explicit Angle(double radians, double tolerance = kAngleTolerance);

  double radians() const { return radians_; }

  friend bool operator==(Angle, Angle) = default;

 private:
  double radians_ = 0.0;
};

// An element of SO(3). Construction checks orthonormality and the
// determinant; it never repairs the input (see Reorthonormalize).
class RotationMatrix {
 public:
  RotationMatrix() : m_(Eigen::Matrix3d::Identity()) {}
  explicit RotationMatrix(const Eigen::Matrix3d& m,
                          double orthonormality_tolerance = kOrthonormalityTolerance,
                          double determinant_tolerance = kDeterminantTolerance);

  static RotationMatrix Identity() { return RotationMatrix(); }

  const Eigen::Matrix3d& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  friend bool operator==(const RotationMatrix& a, const RotationMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  struct Unchecked {};
  RotationMatrix(const Eigen::Matrix3d& m, Unchecked) : m_(m) {}
  friend RotationMatrix Inverse(const RotationMatrix& r);

  Eigen::Matrix3d m_;
};

// Multiplied axis-angle vector r = angle * axis inside the closed ball of
// radius pi.
class AxisAngle {
 public:
  AxisAngle() : r_(Eigen::Vector3d::Zero()) {}
  explicit AxisAngle(const Eigen::Vector3d& r, double tolerance = kBallTolerance);
  AxisAngle(double x, double y, double z, double tolerance = kBallTolerance)
      : AxisAngle(Eigen::Vector3d(x, y, z), tolerance) {}

  const Eigen::Vector3d& vector() const { return r_; }
  double angle() const { return r_.norm(); }
  double operator[](int i) const { return r_[i]; }

  AxisAngle operator-() const { return AxisAngle(Eigen::Vector3d(-r_), Unchecked{}); }

  friend bool operator==(const AxisAngle& a, const AxisAngle& b) { return a.r_ == b.r_; }

 private:
  struct Unchecked {};
  AxisAngle(const Eigen::Vector3d& r, Unchecked) : r_(r) {}

  Eigen::Vector3d r_;
};

// Rodrigues rotation formula. ExpMap(0) is exactly the identity.
RotationMatrix ExpMap(const AxisAngle& r);

// Inverse of ExpMap. At angle pi the axis is reported with its first
// nonzero component positive.
AxisAngle LogMap(const RotationMatrix& rotation);

// Rotation angle of `rotation`: arccos((trace - 1) / 2), evaluated through
// atan2 of the skew and symmetric parts so that it stays accurate near 0 and
// near pi.
Angle AngleOf(const RotationMatrix& rotation);

// Returns second * first, i.e. `first` is applied first.
RotationMatrix Compose(const RotationMatrix& first, const RotationMatrix& second);

RotationMatrix Inverse(const RotationMatrix& rotation);

// Angle of the relative rotation B^-1 A. Bi-invariant metric on SO(3).
Angle AngularDistance(const RotationMatrix& a, const RotationMatrix& b);

// Angle between two unit vectors. Throws std::invalid_argument for inputs
// whose norm differs from one by more than `tolerance`.
Angle EnclosedAngle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                    double tolerance = kUnitNormTolerance);

// Uniformly distributed rotation (uniform unit quaternion, Shoemake's
// method). Deterministic for a given generator state.
RotationMatrix RandomRotation(std::mt19937_64& rng);

// Uniformly distributed unit vector.
Eigen::Vector3d RandomUnitVector(std::mt19937_64& rng);

// Projects a noisy matrix onto SO(3) by iterating M <- (M + M^-T) / 2,
// which converges to the orthogonal polar factor. Throws
// std::invalid_argument if the input is singular, has a negative
// determinant, or does not converge.
RotationMatrix Reorthonormalize(const Eigen::Matrix3d& m, int max_iterations = 100);

}  // namespace rotspace

#endif  // ROTSPACE_ROTATION_H_
