#ifndef ROTSPACE_TOOLS_CLI_H_
#define ROTSPACE_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rotspace/bnb_solver.h"
#include "rotspace/lemma_bounds.h"

namespace rotspace::cli {

enum class Command { kCertifyLemma, kCertifyConvexity, kSolve, kGenerate };

// Exit statuses shared by every command.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

struct RunConfig {
  Command command = Command::kCertifyLemma;
  std::uint64_t seed = 0;
  std::int64_t samples = 100000;
  double epsilon = 1e-3;
  // Unset means "take it from the problem file, else linf".
  std::optional<Aggregator> cost;
  double noise = 0.0;
  std::string input_path = "-";
  std::string output_path;  // empty: no CSV (certify-*) / stdout (generate)
  int grid = 101;
  std::int64_t max_cubes = 10'000'000;
  int threads = 1;
  std::optional<Stratum> stratum;
  bool polish = false;
};

// Throws std::invalid_argument describing the first violated constraint.
void Validate(const RunConfig& config);

int CertifyLemma(const RunConfig& config, std::ostream& out, std::ostream& err);
int CertifyConvexity(const RunConfig& config, std::ostream& out, std::ostream& err);
int Generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int SolveProblem(const RunConfig& config, std::istream& in, std::ostream& out,
                 std::ostream& err);

// Parses argv (argv[0] is the program name) and dispatches. `-` as a path
// means `in` / `out`.
int Run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace rotspace::cli

#endif  // ROTSPACE_TOOLS_CLI_H_
