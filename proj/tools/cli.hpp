#pragma once

#include "rarc/problems.hpp"
#include "rarc/solver.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rarc::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNotConverged = 3, kIo = 4 };

/// Bad flag, bad value or an incompatible problem/mode combination.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mode strings: fd-pullback, fd-transport, fd-gradcalls, exact.
void apply_mode(const std::string& mode, SolverConfig& config);

struct Options {
  std::string problem = "suite";
  std::optional<Index> n, r, s, t;
  std::optional<std::array<Index, 4>> dims;
  std::string mode = "fd-pullback";
  SolverConfig config;
  std::string out_dir = "rarc-out";
  bool dry_run = false;
  /// Also write <out>/timings.json (wall-clock, so not reproducible).
  bool timings = false;
  bool help = false;
  std::string help_text;
};

/// Flags override the config file, which overrides RARC_SEED (seed only),
/// which overrides defaults. `env_seed` is the raw RARC_SEED value or null.
Options parse_config(const std::vector<std::string>& args, const char* env_seed);

struct ProblemSpec {
  std::string name;
  Index r = 0, s = 0, t = 0;
  std::array<Index, 4> dims{};
};

/// Problems selected by the options, with desk-scale sizes filled in.
std::vector<ProblemSpec> resolve_problems(const Options& opts);
ProblemInstance build_problem(const ProblemSpec& spec, std::uint64_t seed);

struct RunReport {
  std::string problem;
  std::string manifold;
  double ofv = 0.0;
  double g_norm = 0.0;
  std::size_t iters = 0;
  std::size_t f_evals = 0;
  double wall_ms = 0.0;
  RunStatus status = RunStatus::MaxIters;
};

RunReport make_report(const std::string& problem, const std::string& manifold,
                      const RunResult& result);

nlohmann::json config_json(const Options& opts);

/// CSV with header k,f,g_norm,v_norm,sigma,alpha,h,h_clamped,f_evals_cum.
void write_history_csv(std::ostream& os, const std::vector<IterateRecord>& history);

/// Runs every selected problem in order, writing <out>/<problem>.csv,
/// <out>/summary.json and, when requested, <out>/timings.json. Throws IoError when the output
/// directory or files cannot be written, UsageError for incompatible modes.
std::vector<RunReport> run_benchmark(const Options& opts, std::ostream& log);

/// Full command-line entry point returning the process exit code.
int main_entry(const std::vector<std::string>& args, const char* env_seed,
               std::ostream& out, std::ostream& err);

}  // namespace rarc::cli
