#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dto::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad command line; the message names the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Help was requested; carries the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  enum class Source { kScenarioA, kScenarioB, kFile };

  Source source = Source::kScenarioA;
  std::filesystem::path file;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<std::size_t> stride;
  std::optional<double> sign_epsilon;
  std::filesystem::path out_dir;
  bool plot = false;
};

std::string usage();

/// Flags: --scenario {a|b|file:PATH} (required), --dt, --t-end, --out DIR,
/// --plot, --sign-epsilon, --stride. The output directory falls back to
/// $DTO_SIM_OUT, then "dto_out". Throws UsageError or HelpRequested.
RunSpec parse_args(const std::vector<std::string>& args);
RunSpec parse_args(int argc, const char* const* argv);

/// Runs the simulation, writes agents.csv and summary.csv (plus plots when
/// requested) and prints a one-line summary. Returns 0 on success, 1 on
/// simulation failure, 2 for an unusable scenario file.
int run_command(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace dto::cli
