#ifndef ROTSPACE_BNB_SOLVER_H_
#define ROTSPACE_BNB_SOLVER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rotspace/rotation.h"

// Best-first branch and bound over the axis-angle ball of radius pi.
//
// A cube of half-width s contains no point farther than sqrt(3) s from its
// center, and since d(exp(r), exp(c)) <= |r - c|, no rotation in the cube is
// angularly farther than sqrt(3) s from the center rotation. Every residual is
// required to be 1-Lipschitz in the angular metric, so each residual over the
// cube is bounded below by its value at the center minus sqrt(3) s.
namespace rotspace {

enum class Aggregator { kMax, kSum, kSumOfSquares };

// "linf", "l1", "l2sq".
std::string_view AggregatorName(Aggregator aggregator);
std::optional<Aggregator> ParseAggregator(std::string_view name);

// Fills the nonnegative angular residuals of `rotation`. Each residual must
// satisfy |theta_i(R) - theta_i(S)| <= d(R, S); this contract is not checked.
// The callable is invoked concurrently and must be safe to share.
using ResidualFn = std::function<void(const RotationMatrix&, std::vector<double>&)>;

struct Problem {
  ResidualFn residuals;
  Aggregator aggregator = Aggregator::kMax;

  double Aggregate(const std::vector<double>& residuals) const;
  double Evaluate(const RotationMatrix& rotation) const;
};

// Residuals theta_i(R) = d(R, R_i); the single-rotation averaging problem.
Problem MakeRotationAveragingProblem(std::vector<RotationMatrix> inputs,
                                     Aggregator aggregator);

struct Cube {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double half_width = 0.0;
  double lower_bound = 0.0;
  int depth = 0;
};

// [-pi, pi]^3.
Cube RootCube();

// Half-diagonal sqrt(3) * half_width.
double CubeUncertainty(const Cube& cube);

// True when the point of the cube nearest to the origin lies in the closed
// ball of radius pi.
bool IntersectsBall(const Cube& cube);

// Radial projection onto the closed ball of radius pi.
Eigen::Vector3d ProjectToBall(const Eigen::Vector3d& r);

// Aggregate of max(0, theta_i(c) - sqrt(3) s) (squared first for the sum of
// squares), where c is the ball projection of the cube center. Never exceeds
// the objective anywhere in cube ∩ ball.
double LowerBound(const Problem& problem, const Cube& cube);

// Objective at the ball projection of the cube center, and that point.
std::pair<double, AxisAngle> UpperBound(const Problem& problem, const Cube& cube);

// The children of an octree split that still meet the ball. Throws
// std::invalid_argument for a cube that lies entirely outside the ball.
std::vector<Cube> Subdivide(const Cube& cube);

struct SolverOptions {
  double epsilon = 1e-3;
  std::int64_t max_cubes = 10'000'000;
  int threads = 1;
  // Cubes expanded per round. Rounds are the unit of parallel work; the
  // result depends on this value but never on `threads`.
  int batch_size = 32;
  // Coordinate-descent refinement of the final incumbent.
  bool polish = false;
};

enum class SolverStatus { kConverged, kBudgetExhausted };

struct SolverResult {
  AxisAngle best_rotation;
  double best_value = 0.0;
  double certified_lower_bound = 0.0;
  double gap = 0.0;
  std::int64_t cubes_explored = 0;
  std::int64_t cubes_pruned = 0;
  int max_depth = 0;
  SolverStatus status = SolverStatus::kConverged;
};

// Finds a rotation whose objective is within `epsilon` of the global minimum,
// or reports the achieved gap when `max_cubes` bound evaluations run out.
// Throws std::invalid_argument for epsilon <= 0 or max_cubes < 1.
SolverResult Solve(const Problem& problem, const SolverOptions& options = {});

// Problem file: rotations in the text format of rotation_io.h plus an
// optional header comment "# cost: linf|l1|l2sq" and an optional
// "# ground_truth: rx ry rz" comment.
struct ProblemFile {
  std::vector<RotationMatrix> rotations;
  std::optional<Aggregator> cost;
  std::optional<AxisAngle> ground_truth;
};

// Throws ParseError naming the offending line.
ProblemFile ReadProblemFile(std::istream& in);

// "value lower_bound gap rx ry rz cubes_explored".
std::string FormatResultLine(const SolverResult& result);

}  // namespace rotspace

#endif  // ROTSPACE_BNB_SOLVER_H_
