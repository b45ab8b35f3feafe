#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "planorm/geometry.hpp"

namespace planorm {

// One sweep invocation: the command plus its parameter grid, resolution
// schedule, and output plumbing.  grid() expands and validates every point
// before any computation starts.
struct SweepConfig {
  std::string command;

  // parameter grid; s and p as text so exact fractions ("3/2") survive
  std::vector<std::string> s_list{"1"};
  std::vector<std::string> p_list{"2"};
  std::vector<double> q_list{2.0};
  std::vector<int> n_list{2};
  std::vector<int> l_list{1};
  double eps = 0.5;
  std::string params_preset;  // "default-grid" expands to the six stock sets

  std::vector<double> resolutions{1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::string out_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 20260821ull;

  std::string entry = "all";   // corpus selector
  std::string kind = "fJ";     // witness family: "fJ" | "subcritical"
  std::string kappa = "1";     // weight factor: "1" | "log^D" | "t^-D"
  std::string range = "2..5";  // level range for witness families
  int whitney_jmax = 6;
  std::vector<double> beta_list{0.55, 0.75, 1.0, 1.5, 2.0};

  // Cartesian parameter grid (or the stock six-point grid), each point
  // validated; throws std::invalid_argument on the first bad point.
  std::vector<SmoothnessParams> grid() const;

  // canonical text of everything that influences computed values (output
  // paths and the jobs bound excluded, so reruns hash identically)
  std::string canonical() const;
  std::uint64_t config_hash() const;
};

// In-memory command outcome: files as (name, content) in emission order,
// exit code 0 = verdicts consistent, 1 = inconsistency, plus a human
// summary for stdout.
struct CommandResult {
  int exit_code = 0;
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
};

CommandResult run_whitney(const SweepConfig& cfg);
CommandResult run_hardy_sweep(const SweepConfig& cfg);
CommandResult run_witness(const SweepConfig& cfg);
CommandResult run_norms(const SweepConfig& cfg);
CommandResult run_decompose(const SweepConfig& cfg);
CommandResult run_probe_divergence(const SweepConfig& cfg);

// Full front end: parse argv, run the subcommand, write its files under
// --out.  Returns 0 on consistent verdicts, 1 on inconsistency, 2 on usage
// or validation errors.
int run_cli(int argc, const char* const* argv);

}  // namespace planorm
