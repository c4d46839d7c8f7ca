#ifndef ROTSPACE_LEMMA_BOUNDS_H_
#define ROTSPACE_LEMMA_BOUNDS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rotspace/rotation.h"

// Executable form of the bound d(R_A, R_B) <= |r_A - r_B| between the
// angular metric and the Euclidean distance of axis-angle vectors, together
// with every intermediate identity used to establish it:
//
//   angle(R_B R_A) = 2 acos(cos(a/2) cos(b/2) - sin(a/2) sin(b/2) cos(phi))
//                  = 2 acos(d cos(ah - bh) + (1 - d) cos(ah + bh))
//   |r_A + r_B|    = 2 sqrt(d (ah - bh)^2 + (1 - d) (ah + bh)^2)
//
// with ah = a/2, bh = b/2, 1 - 2d = cos(phi). Squaring both sides reduces the
// bound to the convexity of acos^2 on [0, 1].
namespace rotspace {

// Half-angle parameterization of a pair of rotations by their angles alpha,
// beta and the angle phi between their axes.
struct HalfAngleParams {
  double a_hat = 0.0;  // alpha / 2, in [0, pi/2]
  double b_hat = 0.0;  // beta / 2, in [0, pi/2]
  double d = 0.0;      // (1 - cos(phi)) / 2, in [0, 1]

  // Throws std::invalid_argument when a field leaves its interval.
  static HalfAngleParams Make(double a_hat, double b_hat, double d);
  static HalfAngleParams FromAngles(Angle alpha, Angle beta, Angle phi);
};

struct SlackReport {
  double lhs = 0.0;    // angular distance, radians
  double rhs = 0.0;    // Euclidean axis-angle distance, radians
  double slack = 0.0;  // rhs - lhs
};

// Rodrigues' composition theorem: angle of the composition of a rotation by
// alpha and one by beta whose axes enclose phi. The raw value lies in
// [0, 2 pi]; it is folded to min(v, 2 pi - v).
Angle ComposedAngleClosedForm(Angle alpha, Angle beta, Angle phi);

// The composed angle rewritten as 2 acos(d cos(ah - bh) + (1 - d) cos(ah + bh)).
// Folded like ComposedAngleClosedForm.
Angle ReparamLhs(const HalfAngleParams& p);

// |r_A - (-r_B)| rewritten as 2 sqrt(d (ah - bh)^2 + (1 - d) (ah + bh)^2).
double ReparamRhs(const HalfAngleParams& p);

Angle Lemma2Lhs(const AxisAngle& r_a, const AxisAngle& r_b);
double Lemma2Rhs(const AxisAngle& r_a, const AxisAngle& r_b);
SlackReport InequalitySlack(const AxisAngle& r_a, const AxisAngle& r_b);

// Same bound with rotation B inverted: d(R_A, R_B^-1) <= |r_A + r_B|. The
// left side is the angle of the composed rotation R_B R_A.
SlackReport ComposedFormSlack(const AxisAngle& r_a, const AxisAngle& r_b);

// acos(x)^2 with x clamped to [-1, 1].
double ArccosSq(double x);

// f''(x) = (2 sqrt(1 - x^2) - 2 x acos(x)) / (1 - x^2)^(3/2) for f = acos^2.
// Defined on [0, 1); throws std::domain_error elsewhere. The value at x = 1
// is a 0/0 limit and is deliberately not assigned.
double ArccosSqSecondDerivative(double x);

// acos^2(d x + (1 - d) y) - (d acos^2(x) + (1 - d) acos^2(y)). Non-positive
// for convex acos^2. Exactly zero for d in {0, 1} and for x == y.
double ChordViolation(double x, double y, double d);

inline constexpr double kConvexityTolerance = 1e-12;

struct ConvexityReport {
  int grid_size = 0;
  double max_violation = 0.0;
  double worst_x = 0.0;
  double worst_y = 0.0;
  double worst_d = 0.0;
  bool certified = false;  // max_violation <= kConvexityTolerance
};

// Evaluates the chord inequality on every triple of the uniform grid with
// `grid_size` points per axis over [0, 1]^3. `visit`, when set, receives each
// (x, y, d, violation) in lexicographic order. Throws std::invalid_argument
// for grid_size < 2.
ConvexityReport ConvexityCertificate(
    int grid_size,
    const std::function<void(double, double, double, double)>& visit = {});

struct DerivativeCheckReport {
  double max_abs_deviation = 0.0;  // formula vs central differences
  double worst_x = 0.0;
  double min_value = 0.0;          // smallest f'' over the nonnegativity sweep
  bool passed = false;
};

// Compares ArccosSqSecondDerivative against central differences of ArccosSq
// (step `fd_step`) at x = 0, step, 2 step, ... <= upper, and checks f'' >= 0
// on a dense sweep of [0, 1 - 1e-6].
DerivativeCheckReport CheckSecondDerivative(double upper = 0.99, double step = 0.01,
                                            double fd_step = 1e-5,
                                            double tolerance = 1e-4);

inline constexpr double kLemmaSlackTolerance = 1e-9;

// One evaluated pair of the Monte-Carlo certification.
struct SweepSample {
  double alpha = 0.0;
  double beta = 0.0;
  double phi = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

enum class Stratum { kRandom, kCoaxial, kAntipodal, kBoundarySphere };

struct LemmaSweepReport {
  std::int64_t samples = 0;
  double min_slack = 0.0;
  SweepSample worst;
  // Largest |slack| over the coaxial stratum (equality case).
  double coaxial_max_abs_slack = 0.0;
  bool passed = false;  // min_slack >= -kLemmaSlackTolerance
};

// Draws an axis-angle pair: alpha, beta uniform on [0, pi] and axes chosen
// according to the stratum (independent uniform axes, shared axis, opposite
// axes, or independent axes with alpha = beta = pi).
std::pair<AxisAngle, AxisAngle> SamplePair(Stratum stratum, std::mt19937_64& rng);

SweepSample EvaluatePair(const AxisAngle& r_a, const AxisAngle& r_b);

struct LemmaSweepOptions {
  std::uint64_t seed = 0;
  std::int64_t random_samples = 100000;
  std::int64_t samples_per_stratum = 1000;
  // When set, only `random_samples` pairs of this stratum are drawn and the
  // boundary suite is skipped.
  std::optional<Stratum> forced_stratum;
  int threads = 1;
};

// Runs `random_samples` random pairs followed by the boundary strata
// (coaxial, antipodal, |r| = pi, and a fixed list of corner cases). Work is
// split into fixed-size chunks seeded from (seed, stratum, chunk index), so
// the report and the visit order do not depend on `threads`.
LemmaSweepReport RunLemmaSweep(
    const LemmaSweepOptions& options,
    const std::function<void(const SweepSample&)>& visit = {});

}  // namespace rotspace

#endif  // ROTSPACE_LEMMA_BOUNDS_H_
