#include "cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rotspace/internal/numeric.h"
#include "rotspace/rotation_io.h"

namespace rotspace::cli {
namespace {

// Writes to `<path>.partial` and renames on Commit, so a failed run never
// leaves a truncated file at `path`. "-" streams to `fallback`.
class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    partial_ = path + ".partial";
    file_.open(partial_, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    stream_ = &file_;
  }
  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;

  ~OutputFile() {
    if (!partial_.empty() && !committed_) {
      file_.close();
      std::error_code ignored;
      std::filesystem::remove(partial_, ignored);
    }
  }

  std::ostream& stream() { return *stream_; }

  void Commit() {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write to '" + path_ + "' failed");
    if (partial_.empty()) return;
    file_.close();
    std::error_code ec;
    std::filesystem::rename(partial_, path_, ec);
    if (ec) throw std::runtime_error("cannot move output into '" + path_ + "': " + ec.message());
    committed_ = true;
  }

 private:
  std::string path_;
  std::string partial_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
  bool committed_ = false;
};

std::string CsvRow(std::initializer_list<double> values) {
  std::string row;
  for (double v : values) {
    if (!row.empty()) row += ',';
    row += FormatDouble(v);
  }
  row += '\n';
  return row;
}

const std::map<std::string, Aggregator> kCostNames = {
    {"linf", Aggregator::kMax}, {"l1", Aggregator::kSum}, {"l2sq", Aggregator::kSumOfSquares}};

const std::map<std::string, Stratum> kStratumNames = {
    {"random", Stratum::kRandom},
    {"coaxial", Stratum::kCoaxial},
    {"antipodal", Stratum::kAntipodal},
    {"sphere", Stratum::kBoundarySphere}};

}  // namespace

void Validate(const RunConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("--samples must be at least 1");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("--epsilon must be positive");
  if (config.grid < 2) throw std::invalid_argument("--grid must be at least 2");
  if (config.max_cubes < 1) throw std::invalid_argument("--max-cubes must be at least 1");
  if (config.threads < 1) throw std::invalid_argument("--threads must be at least 1");
  if (!(config.noise >= 0.0 && config.noise <= std::numbers::pi)) {
    throw std::invalid_argument("--noise must lie in [0, pi]");
  }
  if (config.command == Command::kSolve && config.input_path != "-" &&
      !std::filesystem::is_regular_file(config.input_path)) {
    throw std::invalid_argument("cannot read input '" + config.input_path + "'");
  }
}

int CertifyLemma(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::optional<OutputFile> csv;
  if (!config.output_path.empty()) {
    csv.emplace(config.output_path, out);
    csv->stream() << "alpha,beta,phi,lhs,rhs,slack\n";
  }
  LemmaSweepOptions options;
  options.seed = config.seed;
  options.random_samples = config.samples;
  options.samples_per_stratum = 10000;
  options.forced_stratum = config.stratum;
  options.threads = config.threads;

  std::function<void(const SweepSample&)> visit;
  if (csv) {
    visit = [&csv](const SweepSample& s) {
      csv->stream() << CsvRow({s.alpha, s.beta, s.phi, s.lhs, s.rhs, s.slack});
    };
  }
  const LemmaSweepReport report = RunLemmaSweep(options, visit);
  if (csv) csv->Commit();

  std::ostream& summary = config.output_path == "-" ? err : out;
  summary << "samples=" << report.samples << '\n'
          << "min_slack=" << FormatDouble(report.min_slack) << '\n'
          << "coaxial_max_abs_slack=" << FormatDouble(report.coaxial_max_abs_slack) << '\n';
  if (!report.passed) {
    err << "violation at alpha=" << FormatDouble(report.worst.alpha)
        << " beta=" << FormatDouble(report.worst.beta)
        << " phi=" << FormatDouble(report.worst.phi) << '\n';
    return kExitFail;
  }
  return kExitPass;
}

int CertifyConvexity(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::optional<OutputFile> csv;
  if (!config.output_path.empty()) {
    csv.emplace(config.output_path, out);
    csv->stream() << "x,y,d,violation\n";
  }
  std::function<void(double, double, double, double)> visit;
  if (csv) {
    visit = [&csv](double x, double y, double d, double v) {
      csv->stream() << CsvRow({x, y, d, v});
    };
  }
  const ConvexityReport convexity = ConvexityCertificate(config.grid, visit);
  if (csv) csv->Commit();
  const DerivativeCheckReport derivative = CheckSecondDerivative();

  std::ostream& summary = config.output_path == "-" ? err : out;
  summary << "max_violation=" << FormatDouble(convexity.max_violation) << '\n'
          << "derivative_max_deviation=" << FormatDouble(derivative.max_abs_deviation)
          << '\n'
          << "derivative_min_value=" << FormatDouble(derivative.min_value) << '\n';
  return convexity.certified && derivative.passed ? kExitPass : kExitFail;
}

int Generate(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  OutputFile file(config.output_path.empty() ? "-" : config.output_path, out);
  std::mt19937_64 rng(config.seed);
  const RotationMatrix truth = RandomRotation(rng);
  const Aggregator cost = config.cost.value_or(Aggregator::kMax);

  std::ostream& s = file.stream();
  const AxisAngle truth_vector = LogMap(truth);
  s << "# cost: " << AggregatorName(cost) << '\n'
    << "# ground_truth: " << FormatDouble(truth_vector[0]) << ' '
    << FormatDouble(truth_vector[1]) << ' ' << FormatDouble(truth_vector[2]) << '\n'
    << "# noise: " << FormatDouble(config.noise) << '\n'
    << "# seed: " << config.seed << '\n';
  for (std::int64_t i = 0; i < config.samples; ++i) {
    const Eigen::Vector3d axis = RandomUnitVector(rng);
    const double angle = config.noise * internal::Uniform01(rng);
    const RotationMatrix perturbation = ExpMap(AxisAngle(Eigen::Vector3d(angle * axis)));
    WriteAxisAngle(s, LogMap(Compose(truth, perturbation)));
  }
  file.Commit();
  return kExitPass;
}

int SolveProblem(const RunConfig& config, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  ProblemFile problem_file;
  try {
    if (config.input_path == "-") {
      problem_file = ReadProblemFile(in);
    } else {
      std::ifstream file(config.input_path);
      if (!file) throw std::runtime_error("cannot open '" + config.input_path + "'");
      problem_file = ReadProblemFile(file);
    }
  } catch (const ParseError& e) {
    err << "error: " << (config.input_path == "-" ? "<stdin>" : config.input_path) << ": "
        << e.what() << '\n';
    return kExitError;
  }
  if (problem_file.rotations.empty()) {
    err << "error: problem file contains no rotations\n";
    return kExitError;
  }

  const Aggregator cost = config.cost.value_or(problem_file.cost.value_or(Aggregator::kMax));
  OutputFile result_file(config.output_path.empty() ? "-" : config.output_path, out);

  SolverOptions options;
  options.epsilon = config.epsilon;
  options.max_cubes = config.max_cubes;
  options.threads = config.threads;
  options.polish = config.polish;
  const SolverResult result =
      Solve(MakeRotationAveragingProblem(std::move(problem_file.rotations), cost), options);

  result_file.stream() << FormatResultLine(result) << '\n';
  result_file.Commit();
  if (result.status == SolverStatus::kBudgetExhausted) {
    err << "budget exhausted after " << result.cubes_explored
        << " cubes; gap=" << FormatDouble(result.gap) << '\n';
    return kExitFail;
  }
  return result.gap <= config.epsilon ? kExitPass : kExitFail;
}

int Run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Rotation-space global optimization and bound certification"};
  app.require_subcommand(1);

  RunConfig config;
  config.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string cost_name;
  std::string stratum_name;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", config.threads, "Worker threads (1 = reference path)");
    sub->add_option("--output", config.output_path, "Output path, '-' for stdout");
  };

  CLI::App* lemma = app.add_subcommand("certify-lemma", "Monte-Carlo check of the bound");
  add_common(lemma);
  lemma->add_option("--samples", config.samples, "Random pairs")->capture_default_str();
  lemma->add_option("--stratum", stratum_name, "Only draw this stratum")
      ->check(CLI::IsMember({"random", "coaxial", "antipodal", "sphere"}));

  CLI::App* convexity =
      app.add_subcommand("certify-convexity", "Grid check of the convexity of acos^2");
  add_common(convexity);
  convexity->add_option("--grid", config.grid, "Grid points per axis")->capture_default_str();

  CLI::App* generate = app.add_subcommand("generate", "Write a rotation averaging problem");
  add_common(generate);
  generate->add_option("--samples", config.samples, "Number of rotations")
      ->capture_default_str();
  generate->add_option("--noise", config.noise, "Maximum perturbation angle (rad)")
      ->capture_default_str();
  generate->add_option("--cost", cost_name, "linf, l1 or l2sq")
      ->check(CLI::IsMember({"linf", "l1", "l2sq"}));

  CLI::App* solve = app.add_subcommand("solve", "Globally solve a problem file");
  add_common(solve);
  solve->add_option("--input", config.input_path, "Problem file, '-' for stdin")
      ->capture_default_str();
  solve->add_option("--epsilon", config.epsilon, "Optimality gap")->capture_default_str();
  solve->add_option("--cost", cost_name, "Override the file's cost header")
      ->check(CLI::IsMember({"linf", "l1", "l2sq"}));
  solve->add_option("--max-cubes", config.max_cubes, "Bound evaluation budget")
      ->capture_default_str();
  solve->add_flag("--polish", config.polish, "Refine the final incumbent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  if (lemma->parsed()) config.command = Command::kCertifyLemma;
  if (convexity->parsed()) config.command = Command::kCertifyConvexity;
  if (generate->parsed()) config.command = Command::kGenerate;
  if (solve->parsed()) config.command = Command::kSolve;
  if (!cost_name.empty()) config.cost = kCostNames.at(cost_name);
  if (!stratum_name.empty()) config.stratum = kStratumNames.at(stratum_name);

  try {
    Validate(config);
    switch (config.command) {
      case Command::kCertifyLemma:
        return CertifyLemma(config, out, err);
      case Command::kCertifyConvexity:
        return CertifyConvexity(config, out, err);
      case Command::kGenerate:
        return Generate(config, out, err);
      case Command::kSolve:
        return SolveProblem(config, in, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace rotspace::cli
