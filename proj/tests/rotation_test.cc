#include "rotspace/rotation.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace rotspace {
namespace {

using std::numbers::pi;

// Hand-written quarter turns about the coordinate axes.
Eigen::Matrix3d QuarterTurnX() {
  Eigen::Matrix3d m;
  m << 1, 0, 0,
       0, 0, -1,
       0, 1, 0;
  return m;
}

Eigen::Matrix3d QuarterTurnY() {
  Eigen::Matrix3d m;
  m << 0, 0, 1,
       0, 1, 0,
       -1, 0, 0;
  return m;
}

Eigen::Matrix3d QuarterTurnZ() {
  Eigen::Matrix3d m;
  m << 0, -1, 0,
       1, 0, 0,
       0, 0, 1;
  return m;
}

TEST(ExpMapTest, ZeroIsExactIdentity) {
  EXPECT_EQ(ExpMap(AxisAngle()).matrix(), Eigen::Matrix3d::Identity());
}

TEST(ExpMapTest, HalfTurnAboutX) {
  const RotationMatrix r = ExpMap(AxisAngle(pi, 0, 0));
  // x is fixed, y and z are flipped.
  EXPECT_LT((r.matrix() * Eigen::Vector3d::UnitX() - Eigen::Vector3d::UnitX()).norm(), 1e-15);
  EXPECT_LT((r.matrix() * Eigen::Vector3d::UnitY() + Eigen::Vector3d::UnitY()).norm(), 1e-15);
  EXPECT_LT((r.matrix() * Eigen::Vector3d::UnitZ() + Eigen::Vector3d::UnitZ()).norm(), 1e-15);
  EXPECT_LT(MaxAbsDiff(r.matrix(), Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix()),
            1e-15);
}

TEST(ExpMapTest, QuarterTurnMapsYToZ) {
  const RotationMatrix r = ExpMap(AxisAngle(pi / 2, 0, 0));
  EXPECT_LT((r.matrix() * Eigen::Vector3d::UnitY() - Eigen::Vector3d::UnitZ()).norm(), 1e-15);
  EXPECT_LT(MaxAbsDiff(r.matrix(), QuarterTurnX()), 1e-15);
}

TEST(ExpMapTest, RejectsVectorsOutsideBall) {
  EXPECT_THROW(AxisAngle(pi + 1e-6, 0, 0), std::invalid_argument);
  EXPECT_NO_THROW(AxisAngle(pi + 1e-13, 0, 0));
}

TEST(LogMapTest, IdentityIsZero) {
  EXPECT_EQ(LogMap(RotationMatrix::Identity()).vector(), Eigen::Vector3d::Zero());
}

TEST(LogMapTest, HalfTurnUsesPositiveFirstComponent) {
  const RotationMatrix flip(Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix());
  const AxisAngle r = LogMap(flip);
  EXPECT_NEAR(r[0], pi, 1e-15);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_EQ(r[2], 0.0);

  // Both -r and r map to the same matrix; the canonical one comes back.
  const AxisAngle back = LogMap(ExpMap(AxisAngle(0, -pi, 0)));
  EXPECT_NEAR(back[1], pi, 1e-12);
  const Eigen::Vector3d diagonal = Eigen::Vector3d(-1, 1, 1).normalized() * pi;
  const AxisAngle tilted = LogMap(ExpMap(AxisAngle(diagonal)));
  EXPECT_LT((tilted.vector() + diagonal).norm(), 1e-12);
  EXPECT_GT(tilted[0], 0.0);
}

TEST(LogMapTest, NearHalfTurnKeepsOrientation) {
  const Eigen::Vector3d axis = Eigen::Vector3d(0.3, -0.5, 0.8).normalized();
  for (double gap : {1e-3, 1e-5, 1e-6}) {
    const Eigen::Vector3d r = (pi - gap) * axis;
    EXPECT_LT((LogMap(ExpMap(AxisAngle(r))).vector() - r).norm(), 1e-9) << gap;
    EXPECT_LT((LogMap(ExpMap(AxisAngle(-r))).vector() + r).norm(), 1e-9) << gap;
  }
}

TEST(LogMapTest, SmallAngles) {
  for (double angle : {1e-12, 1e-8, 1e-4}) {
    const Eigen::Vector3d r = angle * Eigen::Vector3d(1, 2, -2).normalized();
    EXPECT_LT((LogMap(ExpMap(AxisAngle(r))).vector() - r).norm(), 1e-15 + 1e-12 * angle);
  }
}

TEST(LogMapTest, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const Eigen::Vector3d r = RandomInBall(rng, pi - 1e-6);
    const AxisAngle back = LogMap(ExpMap(AxisAngle(r)));
    ASSERT_LT((back.vector() - r).norm(), 1e-9) << r.transpose();
  }
}

TEST(LogMapTest, NormEqualsAngle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10000; ++i) {
    const RotationMatrix r = RandomRotation(rng);
    ASSERT_NEAR(LogMap(r).angle(), AngleOf(r).radians(), 1e-12);
  }
}

TEST(RotationMatrixTest, RejectsInvalidMatrices) {
  Eigen::Matrix3d scaled = 1.001 * Eigen::Matrix3d::Identity();
  EXPECT_THROW(RotationMatrix{scaled}, std::invalid_argument);
  Eigen::Matrix3d reflection = Eigen::Vector3d(1, 1, -1).asDiagonal().toDenseMatrix();
  EXPECT_THROW(RotationMatrix{reflection}, std::invalid_argument);
  Eigen::Matrix3d nan = Eigen::Matrix3d::Identity();
  nan(1, 2) = std::nan("");
  EXPECT_THROW(RotationMatrix{nan}, std::invalid_argument);
  // A looser tolerance at the construction site accepts the scaled matrix.
  EXPECT_NO_THROW(RotationMatrix(scaled, 1e-2, 1e-2));
}

TEST(RotationMatrixTest, ReorthonormalizeRepairsNoise) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> noise(-1e-4, 1e-4);
  for (int i = 0; i < 100; ++i) {
    const RotationMatrix clean = RandomRotation(rng);
    Eigen::Matrix3d noisy = clean.matrix();
    for (int k = 0; k < 9; ++k) noisy(k / 3, k % 3) += noise(rng);
    EXPECT_THROW(RotationMatrix{noisy}, std::invalid_argument);
    const RotationMatrix repaired = Reorthonormalize(noisy);
    EXPECT_LT(AngularDistance(repaired, clean).radians(), 1e-3);
  }
  EXPECT_THROW(Reorthonormalize(-Eigen::Matrix3d::Identity()), std::invalid_argument);
  EXPECT_THROW(Reorthonormalize(Eigen::Matrix3d::Zero()), std::invalid_argument);
}

TEST(AngleOfTest, KnownValues) {
  EXPECT_EQ(AngleOf(RotationMatrix::Identity()).radians(), 0.0);
  EXPECT_NEAR(AngleOf(ExpMap(AxisAngle(pi / 2, 0, 0))).radians(), pi / 2, 1e-15);
  EXPECT_NEAR(AngleOf(RotationMatrix(Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix()))
                  .radians(),
              pi, 1e-15);
}

TEST(AngleOfTest, AgreesWithTraceFormula) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const RotationMatrix r = RandomRotation(rng);
    const double trace_formula =
        std::acos(std::clamp((r.matrix().trace() - 1.0) / 2.0, -1.0, 1.0));
    // acos loses precision near 0 and pi; the tolerance reflects that.
    ASSERT_NEAR(AngleOf(r).radians(), trace_formula, 1e-7);
  }
}

TEST(AngleOfTest, AccurateNearZeroAndPi) {
  for (double tiny : {1e-10, 1e-7}) {
    EXPECT_NEAR(AngleOf(ExpMap(AxisAngle(0, tiny, 0))).radians(), tiny, 1e-20);
    EXPECT_NEAR(AngleOf(ExpMap(AxisAngle(0, 0, pi - tiny))).radians(), pi - tiny, 1e-15);
  }
}

TEST(ComposeTest, IdentityAndInversePair) {
  std::mt19937_64 rng(8);
  const RotationMatrix r = RandomRotation(rng);
  EXPECT_EQ(Compose(r, RotationMatrix::Identity()).matrix(), r.matrix());
  const RotationMatrix product =
      Compose(ExpMap(AxisAngle(pi / 2, 0, 0)), ExpMap(AxisAngle(-pi / 2, 0, 0)));
  EXPECT_LT(MaxAbsDiff(product.matrix(), Eigen::Matrix3d::Identity()), 1e-15);
}

TEST(ComposeTest, AppliesFirstArgumentFirst) {
  const RotationMatrix x = ExpMap(AxisAngle(pi / 2, 0, 0));
  const RotationMatrix z = ExpMap(AxisAngle(0, 0, pi / 2));
  const Eigen::Matrix3d expected = QuarterTurnZ() * QuarterTurnX();
  const RotationMatrix composed = Compose(x, z);
  EXPECT_LT(MaxAbsDiff(composed.matrix(), expected), 1e-15);
  // trace(expected) = 0, so the angle is acos(-1/2).
  EXPECT_EQ(expected.trace(), 0.0);
  EXPECT_NEAR(AngleOf(composed).radians(), 2 * pi / 3, 1e-15);
}

TEST(ComposeTest, ConjugateOrdersShareAngle) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    const RotationMatrix a = RandomRotation(rng);
    const RotationMatrix b = RandomRotation(rng);
    ASSERT_NEAR(AngleOf(Compose(a, b)).radians(), AngleOf(Compose(b, a)).radians(), 1e-12);
  }
}

TEST(InverseTest, Properties) {
  EXPECT_EQ(Inverse(RotationMatrix::Identity()).matrix(), Eigen::Matrix3d::Identity());
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d r = RandomInBall(rng, pi);
    const RotationMatrix m = ExpMap(AxisAngle(r));
    EXPECT_LT(MaxAbsDiff(Inverse(m).matrix(), ExpMap(AxisAngle(-r)).matrix()), 1e-12);
    EXPECT_EQ(Inverse(Inverse(m)), m);
    EXPECT_LT(MaxAbsDiff(Compose(Inverse(m), m).matrix(), Eigen::Matrix3d::Identity()), 1e-12);
  }
}

TEST(AngularDistanceTest, KnownValues) {
  std::mt19937_64 rng(6);
  const RotationMatrix r = RandomRotation(rng);
  EXPECT_EQ(AngularDistance(r, r).radians(), 0.0);
  for (double alpha : {0.0, 0.4, 1.7, pi}) {
    for (double beta : {0.0, 0.9, 2.5, pi}) {
      EXPECT_NEAR(AngularDistance(ExpMap(AxisAngle(alpha, 0, 0)), ExpMap(AxisAngle(beta, 0, 0)))
                      .radians(),
                  std::abs(alpha - beta), 1e-15);
    }
  }
  // trace(Ry^T Rx) = 0 for the quarter turns.
  EXPECT_EQ((QuarterTurnY().transpose() * QuarterTurnX()).trace(), 0.0);
  EXPECT_NEAR(
      AngularDistance(ExpMap(AxisAngle(pi / 2, 0, 0)), ExpMap(AxisAngle(0, pi / 2, 0))).radians(),
      2 * pi / 3, 1e-15);
}

TEST(AngularDistanceTest, MetricAxioms) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 10000; ++i) {
    const RotationMatrix a = RandomRotation(rng);
    const RotationMatrix b = RandomRotation(rng);
    const RotationMatrix c = RandomRotation(rng);
    const double ab = AngularDistance(a, b).radians();
    ASSERT_NEAR(ab, AngularDistance(b, a).radians(), 1e-12);
    ASSERT_LE(AngularDistance(a, c).radians(), ab + AngularDistance(b, c).radians() + 1e-9);
    ASSERT_EQ(AngularDistance(a, a).radians(), 0.0);
    ASSERT_GT(ab, 0.0);
  }
}

TEST(AngularDistanceTest, BiInvariance) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10000; ++i) {
    const RotationMatrix a = RandomRotation(rng);
    const RotationMatrix b = RandomRotation(rng);
    const RotationMatrix s = RandomRotation(rng);
    const double d = AngularDistance(a, b).radians();
    ASSERT_NEAR(AngularDistance(Compose(a, s), Compose(b, s)).radians(), d, 1e-9);
    ASSERT_NEAR(AngularDistance(Compose(s, a), Compose(s, b)).radians(), d, 1e-9);
  }
}

TEST(EnclosedAngleTest, Values) {
  const Eigen::Vector3d x = Eigen::Vector3d::UnitX();
  EXPECT_EQ(EnclosedAngle(x, x).radians(), 0.0);
  EXPECT_EQ(EnclosedAngle(x, -x).radians(), pi);
  EXPECT_EQ(EnclosedAngle(x, Eigen::Vector3d::UnitY()).radians(), pi / 2);
  EXPECT_THROW(EnclosedAngle(2 * x, x), std::invalid_argument);
  EXPECT_THROW(EnclosedAngle(x, Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST(AngleTest, RejectsOutOfRange) {
  EXPECT_THROW(Angle(-1e-6), std::invalid_argument);
  EXPECT_THROW(Angle(pi + 1e-6), std::invalid_argument);
  EXPECT_THROW(Angle(std::nan("")), std::invalid_argument);
  EXPECT_EQ(Angle(pi + 1e-13).radians(), pi);
}

TEST(RandomRotationTest, DeterministicForSeed) {
  std::mt19937_64 a(2024);
  std::mt19937_64 b(2024);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(RandomRotation(a), RandomRotation(b));
}

TEST(RandomRotationTest, MeanAngleMatchesUniformDensity) {
  // Under the uniform (Haar) measure the angle has density (1 - cos t) / pi,
  // whose mean is pi/2 + 2/pi.
  constexpr int kSamples = 100000;
  std::mt19937_64 rng(77);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double t = AngleOf(RandomRotation(rng)).radians();
    sum += t;
    sum_sq += t * t;
  }
  const double mean = sum / kSamples;
  const double variance = sum_sq / kSamples - mean * mean;
  const double standard_error = std::sqrt(variance / kSamples);
  EXPECT_NEAR(mean, pi / 2 + 2 / pi, 3 * standard_error);
  // Analytic variance pi^2/12 - 4/pi^2.
  EXPECT_NEAR(variance, pi * pi / 12 - 4 / (pi * pi), 0.01);
}

}  // namespace
}  // namespace rotspace
