#include "rotspace/lemma_bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rotspace/internal/numeric.h"
#include "rotspace/internal/parallel.h"

namespace rotspace {
namespace {

using std::numbers::pi;

constexpr double kParamTolerance = 1e-12;
constexpr std::int64_t kChunkSize = 1 << 14;
constexpr std::int64_t kChunksPerRound = 16;

// 2 acos(c) lies in [0, 2 pi]; the rotation angle is its fold into [0, pi].
Angle FoldedDoubleArccos(double c) {
  const double v = 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
  return Angle(std::min(v, 2.0 * pi - v));
}

struct Accumulator {
  std::int64_t samples = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  SweepSample worst;
  double coaxial_max_abs_slack = 0.0;

  void Add(const SweepSample& s, bool coaxial) {
    ++samples;
    if (s.slack < min_slack) {
      min_slack = s.slack;
      worst = s;
    }
    if (coaxial) coaxial_max_abs_slack = std::max(coaxial_max_abs_slack, std::abs(s.slack));
  }
};

std::vector<std::pair<AxisAngle, AxisAngle>> CornerCases() {
  return {
      {AxisAngle(), AxisAngle()},
      {AxisAngle(pi, 0, 0), AxisAngle(-pi, 0, 0)},
      {AxisAngle(pi, 0, 0), AxisAngle(pi, 0, 0)},
      {AxisAngle(pi, 0, 0), AxisAngle()},
      {AxisAngle(pi, 0, 0), AxisAngle(0, pi, 0)},
      {AxisAngle(pi / 2, 0, 0), AxisAngle(0, pi / 2, 0)},
      {AxisAngle(pi / 2, 0, 0), AxisAngle(-pi / 2, 0, 0)},
      {AxisAngle(0, 0, pi), AxisAngle(0, 0, -pi / 2)},
  };
}

// Draws `count` pairs of `stratum` in chunk order and feeds them to the
// accumulator and the visitor.
void SweepStratum(Stratum stratum, std::int64_t count, const LemmaSweepOptions& options,
                  internal::WorkerArena& workers, Accumulator& acc,
                  const std::function<void(const SweepSample&)>& visit) {
  const std::int64_t chunks = (count + kChunkSize - 1) / kChunkSize;
  for (std::int64_t first = 0; first < chunks; first += kChunksPerRound) {
    const std::int64_t round = std::min(kChunksPerRound, chunks - first);
    std::vector<std::vector<SweepSample>> results(static_cast<size_t>(round));
    workers.ForEach(static_cast<size_t>(round), [&](size_t i) {
      const std::int64_t chunk = first + static_cast<std::int64_t>(i);
      const std::int64_t begin = chunk * kChunkSize;
      const std::int64_t n = std::min(kChunkSize, count - begin);
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                        static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(stratum),
                        static_cast<std::uint32_t>(chunk)};
      std::mt19937_64 rng(seq);
      auto& out = results[i];
      out.reserve(static_cast<size_t>(n));
      for (std::int64_t k = 0; k < n; ++k) {
        const auto [r_a, r_b] = SamplePair(stratum, rng);
        out.push_back(EvaluatePair(r_a, r_b));
      }
    });
    for (const auto& chunk : results) {
      for (const SweepSample& s : chunk) {
        acc.Add(s, stratum == Stratum::kCoaxial);
        if (visit) visit(s);
      }
    }
  }
}

}  // namespace

HalfAngleParams HalfAngleParams::Make(double a_hat, double b_hat, double d) {
  const auto in = [](double v, double hi) {
    return v >= -kParamTolerance && v <= hi + kParamTolerance;
  };
  if (!in(a_hat, pi / 2) || !in(b_hat, pi / 2) || !in(d, 1.0)) {
    throw std::invalid_argument("half-angle parameters out of range");
  }
  return HalfAngleParams{std::clamp(a_hat, 0.0, pi / 2), std::clamp(b_hat, 0.0, pi / 2),
                         std::clamp(d, 0.0, 1.0)};
}

HalfAngleParams HalfAngleParams::FromAngles(Angle alpha, Angle beta, Angle phi) {
  return Make(alpha.radians() / 2, beta.radians() / 2, (1.0 - std::cos(phi.radians())) / 2);
}

Angle ComposedAngleClosedForm(Angle alpha, Angle beta, Angle phi) {
  const double ha = alpha.radians() / 2;
  const double hb = beta.radians() / 2;
  return FoldedDoubleArccos(std::cos(ha) * std::cos(hb) -
                            std::sin(ha) * std::sin(hb) * std::cos(phi.radians()));
}

Angle ReparamLhs(const HalfAngleParams& p) {
  return FoldedDoubleArccos(p.d * std::cos(p.a_hat - p.b_hat) +
                            (1.0 - p.d) * std::cos(p.a_hat + p.b_hat));
}

double ReparamRhs(const HalfAngleParams& p) {
  const double diff = p.a_hat - p.b_hat;
  const double sum = p.a_hat + p.b_hat;
  return 2.0 * std::sqrt(p.d * diff * diff + (1.0 - p.d) * sum * sum);
}

Angle Lemma2Lhs(const AxisAngle& r_a, const AxisAngle& r_b) {
  return AngularDistance(ExpMap(r_a), ExpMap(r_b));
}

double Lemma2Rhs(const AxisAngle& r_a, const AxisAngle& r_b) {
  return (r_a.vector() - r_b.vector()).norm();
}

SlackReport InequalitySlack(const AxisAngle& r_a, const AxisAngle& r_b) {
  SlackReport report;
  report.lhs = Lemma2Lhs(r_a, r_b).radians();
  report.rhs = Lemma2Rhs(r_a, r_b);
  report.slack = report.rhs - report.lhs;
  return report;
}

SlackReport ComposedFormSlack(const AxisAngle& r_a, const AxisAngle& r_b) {
  return InequalitySlack(r_a, -r_b);
}

double ArccosSq(double x) {
  const double a = std::acos(std::clamp(x, -1.0, 1.0));
  return a * a;
}

double ArccosSqSecondDerivative(double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw std::domain_error("second derivative of acos^2 is evaluated on [0, 1) only");
  }
  const double one_minus_sq = 1.0 - x * x;
  const double root = std::sqrt(one_minus_sq);
  return (2.0 * root - 2.0 * x * std::acos(x)) / (one_minus_sq * root);
}

double ChordViolation(double x, double y, double d) {
  const double fx = ArccosSq(x);
  const double fy = ArccosSq(y);
  // Interpolate from the nearer endpoint so that d in {0, 1} and x == y
  // reproduce the endpoint values bit for bit.
  if (d <= 0.5) {
    return ArccosSq(y + d * (x - y)) - (fy + d * (fx - fy));
  }
  const double e = 1.0 - d;
  return ArccosSq(x + e * (y - x)) - (fx + e * (fy - fx));
}

ConvexityReport ConvexityCertificate(
    int grid_size, const std::function<void(double, double, double, double)>& visit) {
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
  ConvexityReport report;
  report.grid_size = grid_size;
  report.max_violation = -std::numeric_limits<double>::infinity();
  const double n = grid_size - 1;
  for (int i = 0; i < grid_size; ++i) {
    const double x = i / n;
    for (int j = 0; j < grid_size; ++j) {
      const double y = j / n;
      for (int k = 0; k < grid_size; ++k) {
        const double d = k / n;
        const double v = ChordViolation(x, y, d);
        if (v > report.max_violation) {
          report.max_violation = v;
          report.worst_x = x;
          report.worst_y = y;
          report.worst_d = d;
        }
        if (visit) visit(x, y, d, v);
      }
    }
  }
  report.certified = report.max_violation <= kConvexityTolerance;
  return report;
}

DerivativeCheckReport CheckSecondDerivative(double upper, double step, double fd_step,
                                            double tolerance) {
  DerivativeCheckReport report;
  const int points = static_cast<int>(std::floor(upper / step + 1e-9));
  for (int i = 0; i <= points; ++i) {
    const double x = i * step;
    const double fd =
        (ArccosSq(x + fd_step) - 2.0 * ArccosSq(x) + ArccosSq(x - fd_step)) /
        (fd_step * fd_step);
    const double deviation = std::abs(ArccosSqSecondDerivative(x) - fd);
    if (deviation > report.max_abs_deviation) {
      report.max_abs_deviation = deviation;
      report.worst_x = x;
    }
  }

  constexpr int kDense = 100000;
  constexpr double kUpper = 1.0 - 1e-6;
  report.min_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kDense; ++i) {
    const double x = kUpper * i / kDense;
    report.min_value = std::min(report.min_value, ArccosSqSecondDerivative(x));
  }
  report.passed = report.max_abs_deviation <= tolerance && report.min_value >= 0.0;
  return report;
}

std::pair<AxisAngle, AxisAngle> SamplePair(Stratum stratum, std::mt19937_64& rng) {
  double alpha = pi * internal::Uniform01(rng);
  double beta = pi * internal::Uniform01(rng);
  const Eigen::Vector3d axis_a = RandomUnitVector(rng);
  Eigen::Vector3d axis_b;
  switch (stratum) {
    case Stratum::kRandom:
      axis_b = RandomUnitVector(rng);
      break;
    case Stratum::kCoaxial:
      axis_b = axis_a;
      break;
    case Stratum::kAntipodal:
      axis_b = -axis_a;
      break;
    case Stratum::kBoundarySphere:
      axis_b = RandomUnitVector(rng);
      alpha = pi;
      beta = pi;
      break;
  }
  return {AxisAngle(Eigen::Vector3d(alpha * axis_a)),
          AxisAngle(Eigen::Vector3d(beta * axis_b))};
}

SweepSample EvaluatePair(const AxisAngle& r_a, const AxisAngle& r_b) {
  SweepSample s;
  s.alpha = r_a.angle();
  s.beta = r_b.angle();
  if (s.alpha > 0.0 && s.beta > 0.0) {
    s.phi = EnclosedAngle(r_a.vector() / s.alpha, r_b.vector() / s.beta).radians();
  }
  const SlackReport report = InequalitySlack(r_a, r_b);
  s.lhs = report.lhs;
  s.rhs = report.rhs;
  s.slack = report.slack;
  return s;
}

LemmaSweepReport RunLemmaSweep(const LemmaSweepOptions& options,
                               const std::function<void(const SweepSample&)>& visit) {
  if (options.random_samples < 0 || options.samples_per_stratum < 0) {
    throw std::invalid_argument("sample counts must be nonnegative");
  }
  internal::WorkerArena workers(options.threads);
  Accumulator acc;
  if (options.forced_stratum) {
    SweepStratum(*options.forced_stratum, options.random_samples, options, workers, acc, visit);
  } else {
    SweepStratum(Stratum::kRandom, options.random_samples, options, workers, acc, visit);
    for (Stratum stratum :
         {Stratum::kCoaxial, Stratum::kAntipodal, Stratum::kBoundarySphere}) {
      SweepStratum(stratum, options.samples_per_stratum, options, workers, acc, visit);
    }
    for (const auto& [r_a, r_b] : CornerCases()) {
      const SweepSample s = EvaluatePair(r_a, r_b);
      acc.Add(s, false);
      if (visit) visit(s);
    }
  }

  LemmaSweepReport report;
  report.samples = acc.samples;
  report.min_slack = acc.samples > 0 ? acc.min_slack : 0.0;
  report.worst = acc.worst;
  report.coaxial_max_abs_slack = acc.coaxial_max_abs_slack;
  report.passed = report.min_slack >= -kLemmaSlackTolerance;
  return report;
}

}  // namespace rotspace
