#include "rotspace/bnb_solver.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "rotspace/internal/numeric.h"
#include "rotspace/internal/parallel.h"
#include "rotspace/rotation_io.h"

namespace rotspace {
namespace {

using std::numbers::pi;

const double kSqrt3 = std::sqrt(3.0);

struct Evaluation {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
};

double AggregateBounds(Aggregator aggregator, const std::vector<double>& residuals,
                       double uncertainty) {
  double total = 0.0;
  for (double theta : residuals) {
    const double bound = std::max(0.0, theta - uncertainty);
    switch (aggregator) {
      case Aggregator::kMax:
        total = std::max(total, bound);
        break;
      case Aggregator::kSum:
        total += bound;
        break;
      case Aggregator::kSumOfSquares:
        total += bound * bound;
        break;
    }
  }
  return total;
}

// Both bounds share the residuals at the projected center.
Evaluation EvaluateCube(const Problem& problem, const Cube& cube,
                        std::vector<double>& residuals) {
  Evaluation e;
  e.point = ProjectToBall(cube.center);
  residuals.clear();
  problem.residuals(ExpMap(AxisAngle(e.point)), residuals);
  e.upper_bound = problem.Aggregate(residuals);
  e.lower_bound = AggregateBounds(problem.aggregator, residuals, CubeUncertainty(cube));
  return e;
}

struct QueueEntry {
  Cube cube;
  std::int64_t sequence = 0;
};

// Min-heap on lower bound, earlier insertion first among equals.
struct LaterOrWorse {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.cube.lower_bound != b.cube.lower_bound) {
      return a.cube.lower_bound > b.cube.lower_bound;
    }
    return a.sequence > b.sequence;
  }
};

std::pair<double, Eigen::Vector3d> Polish(const Problem& problem, Eigen::Vector3d point,
                                          double value, double step) {
  constexpr double kMinStep = 1e-10;
  constexpr int kMaxEvaluations = 2000;
  int evaluations = 0;
  while (step > kMinStep && evaluations < kMaxEvaluations) {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis) {
      for (double sign : {1.0, -1.0}) {
        Eigen::Vector3d candidate = point;
        candidate[axis] += sign * step;
        candidate = ProjectToBall(candidate);
        const double v = problem.Evaluate(ExpMap(AxisAngle(candidate)));
        ++evaluations;
        if (v < value) {
          value = v;
          point = candidate;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2;
  }
  return {value, point};
}

}  // namespace

std::string_view AggregatorName(Aggregator aggregator) {
  switch (aggregator) {
    case Aggregator::kMax:
      return "linf";
    case Aggregator::kSum:
      return "l1";
    case Aggregator::kSumOfSquares:
      return "l2sq";
  }
  return "";
}

std::optional<Aggregator> ParseAggregator(std::string_view name) {
  for (Aggregator a : {Aggregator::kMax, Aggregator::kSum, Aggregator::kSumOfSquares}) {
    if (name == AggregatorName(a)) return a;
  }
  return std::nullopt;
}

double Problem::Aggregate(const std::vector<double>& residuals) const {
  return AggregateBounds(aggregator, residuals, 0.0);
}

double Problem::Evaluate(const RotationMatrix& rotation) const {
  std::vector<double> values;
  residuals(rotation, values);
  return Aggregate(values);
}

Problem MakeRotationAveragingProblem(std::vector<RotationMatrix> inputs,
                                     Aggregator aggregator) {
  Problem problem;
  problem.aggregator = aggregator;
  problem.residuals = [inputs = std::move(inputs)](const RotationMatrix& rotation,
                                                   std::vector<double>& out) {
    out.clear();
    for (const RotationMatrix& input : inputs) {
      out.push_back(internal::RelativeAngle(rotation.matrix(), input.matrix()));
    }
  };
  return problem;
}

Cube RootCube() { return Cube{Eigen::Vector3d::Zero(), pi, 0.0, 0}; }

double CubeUncertainty(const Cube& cube) { return kSqrt3 * cube.half_width; }

bool IntersectsBall(const Cube& cube) {
  Eigen::Vector3d nearest;
  for (int i = 0; i < 3; ++i) {
    nearest[i] = std::clamp(0.0, cube.center[i] - cube.half_width,
                            cube.center[i] + cube.half_width);
  }
  return nearest.norm() <= pi;
}

Eigen::Vector3d ProjectToBall(const Eigen::Vector3d& r) {
  const double norm = r.norm();
  if (norm <= pi) return r;
  return r * (pi / norm);
}

double LowerBound(const Problem& problem, const Cube& cube) {
  std::vector<double> residuals;
  return EvaluateCube(problem, cube, residuals).lower_bound;
}

std::pair<double, AxisAngle> UpperBound(const Problem& problem, const Cube& cube) {
  std::vector<double> residuals;
  const Evaluation e = EvaluateCube(problem, cube, residuals);
  return {e.upper_bound, AxisAngle(e.point)};
}

std::vector<Cube> Subdivide(const Cube& cube) {
  if (!IntersectsBall(cube)) {
    throw std::invalid_argument("cube lies outside the rotation ball");
  }
  std::vector<Cube> children;
  children.reserve(8);
  const double h = cube.half_width / 2;
  for (int octant = 0; octant < 8; ++octant) {
    Cube child;
    child.half_width = h;
    child.depth = cube.depth + 1;
    child.lower_bound = cube.lower_bound;
    for (int i = 0; i < 3; ++i) {
      child.center[i] = cube.center[i] + (((octant >> i) & 1) ? h : -h);
    }
    if (IntersectsBall(child)) children.push_back(child);
  }
  return children;
}

SolverResult Solve(const Problem& problem, const SolverOptions& options) {
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (options.max_cubes < 1) throw std::invalid_argument("max_cubes must be at least 1");
  if (options.batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");

  internal::WorkerArena workers(options.threads);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, LaterOrWorse> queue;
  std::int64_t sequence = 0;

  SolverResult result;
  std::vector<double> scratch;

  Cube root = RootCube();
  const Evaluation root_eval = EvaluateCube(problem, root, scratch);
  root.lower_bound = root_eval.lower_bound;
  result.cubes_explored = 1;
  double best_value = root_eval.upper_bound;
  Eigen::Vector3d best_point = root_eval.point;
  double best_half_width = root.half_width;
  // Smallest lower bound among discarded cubes; part of the certificate.
  double pruned_bound = std::numeric_limits<double>::infinity();
  queue.push({root, sequence++});

  std::vector<Cube> parents;
  std::vector<Cube> children;
  std::vector<Evaluation> evaluations;

  while (true) {
    const double frontier = queue.empty() ? std::numeric_limits<double>::infinity()
                                          : queue.top().cube.lower_bound;
    const double global_bound = std::min({frontier, pruned_bound, best_value});
    if (best_value - global_bound <= options.epsilon) {
      result.status = SolverStatus::kConverged;
      break;
    }

    parents.clear();
    while (!queue.empty() && static_cast<int>(parents.size()) < options.batch_size) {
      if (result.cubes_explored + 8 * static_cast<std::int64_t>(parents.size() + 1) >
          options.max_cubes) {
        break;
      }
      Cube cube = queue.top().cube;
      queue.pop();
      if (cube.lower_bound >= best_value - options.epsilon) {
        pruned_bound = std::min(pruned_bound, cube.lower_bound);
        ++result.cubes_pruned;
        continue;
      }
      parents.push_back(cube);
    }
    if (parents.empty()) {
      if (queue.empty()) continue;  // everything left was pruned
      result.status = SolverStatus::kBudgetExhausted;
      break;
    }

    children.clear();
    for (const Cube& parent : parents) {
      const std::vector<Cube> split = Subdivide(parent);
      result.cubes_pruned += static_cast<std::int64_t>(8 - split.size());
      children.insert(children.end(), split.begin(), split.end());
    }

    evaluations.resize(children.size());
    workers.ForEach(children.size(), [&](size_t i) {
      thread_local std::vector<double> residuals;
      evaluations[i] = EvaluateCube(problem, children[i], residuals);
    });
    result.cubes_explored += static_cast<std::int64_t>(children.size());

    // Serial merge in child order keeps the outcome independent of scheduling.
    for (size_t i = 0; i < children.size(); ++i) {
      if (evaluations[i].upper_bound < best_value) {
        best_value = evaluations[i].upper_bound;
        best_point = evaluations[i].point;
        best_half_width = children[i].half_width;
      }
    }
    for (size_t i = 0; i < children.size(); ++i) {
      Cube& child = children[i];
      child.lower_bound = evaluations[i].lower_bound;
      result.max_depth = std::max(result.max_depth, child.depth);
      if (child.lower_bound >= best_value - options.epsilon) {
        pruned_bound = std::min(pruned_bound, child.lower_bound);
        ++result.cubes_pruned;
      } else {
        queue.push({child, sequence++});
      }
    }
  }

  const double frontier = queue.empty() ? std::numeric_limits<double>::infinity()
                                        : queue.top().cube.lower_bound;
  result.certified_lower_bound = std::min({frontier, pruned_bound, best_value});

  if (options.polish) {
    std::tie(best_value, best_point) =
        Polish(problem, best_point, best_value, best_half_width);
    result.certified_lower_bound = std::min(result.certified_lower_bound, best_value);
  }
  result.best_value = best_value;
  result.best_rotation = AxisAngle(best_point);
  result.gap = best_value - result.certified_lower_bound;
  return result;
}

ProblemFile ReadProblemFile(std::istream& in) {
  RotationList list = ParseRotations(in);
  ProblemFile file;
  file.rotations = std::move(list.rotations);
  for (const CommentLine& comment : list.comments) {
    std::istringstream fields(comment.text);
    std::string key;
    fields >> key;
    if (key == "cost:") {
      std::string name;
      fields >> name;
      file.cost = ParseAggregator(name);
      if (!file.cost) {
        throw ParseError(comment.line, "unknown cost '" + name + "'");
      }
    } else if (key == "ground_truth:") {
      std::string token;
      std::vector<double> values;
      while (fields >> token) {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || end != token.data() + token.size()) {
          throw ParseError(comment.line, "invalid ground truth value '" + token + "'");
        }
        values.push_back(v);
      }
      if (values.size() != 3) {
        throw ParseError(comment.line, "ground truth needs 3 numbers");
      }
      try {
        file.ground_truth = AxisAngle(values[0], values[1], values[2]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(comment.line, e.what());
      }
    }
  }
  return file;
}

std::string FormatResultLine(const SolverResult& result) {
  const Eigen::Vector3d& r = result.best_rotation.vector();
  return FormatDouble(result.best_value) + ' ' + FormatDouble(result.certified_lower_bound) +
         ' ' + FormatDouble(result.gap) + ' ' + FormatDouble(r.x()) + ' ' +
         FormatDouble(r.y()) + ' ' + FormatDouble(r.z()) + ' ' +
         std::to_string(result.cubes_explored);
}

}  // namespace rotspace
