#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nmqa/config.hpp"
#include "nmqa/experiment.hpp"
#include "nmqa/tuner.hpp"

namespace nmqa {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  // validate found a failing check
  kExitConfig = 2,
  kExitIo = 3,
  kExitNumerical = 4,  // at least one run aborted on degenerate weights
};

/// Outcome of a benchmark command; `aborted` counts runs that hit
/// degenerate weights (their outputs are written and flagged).
struct CommandResult {
  std::vector<ScoreEntry> scoreboard;
  std::vector<RatioPoint> ratios;
  Index aborted = 0;
};

/// Both strategies over `budgets` against `source`; writes scoreboard.csv,
/// scoreboard.json, ratio.csv and runs/<strategy>_T<T>.json under cfg.out.
CommandResult run_benchmark(const RunConfig& cfg, const QubitArray& array,
                            const MeasurementSource& source, const VectorXd& truth,
                            const std::vector<Index>& budgets, const std::string& mode,
                            std::ostream& log);

CommandResult cmd_simulate(const RunConfig& cfg, std::ostream& log);
CommandResult cmd_replay(const RunConfig& cfg, std::ostream& log);
TuningResult cmd_tune(const RunConfig& cfg, std::ostream& log);
/// Writes a synthetic bank drawn from the configured field to cfg.databank.
void cmd_synth_bank(const RunConfig& cfg, std::ostream& log);

/// Fault switches for the validation suite's negative controls.
struct ValidationFaults {
  double rho0_scale = 1.0;  // multiplies the rho0 used as the g1 normalisation oracle
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant suite: g1 normalisation, h1 inversion, resampling
/// chi-square, neighbourhood monotonicity, SSIM oracle.
std::vector<CheckResult> run_validation(std::uint64_t seed, const ValidationFaults& faults = {});

/// Entry point shared by the executable and the tests. Returns an ExitCode.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Helpers used by the commands, exposed for tests.
QubitArray array_from_config(const RunConfig& cfg);
TrueField field_from_config(const RunConfig& cfg, const QubitArray& array);
std::vector<CurvePoint> curve_of(const std::vector<ScoreEntry>& entries, Strategy strategy);

}  // namespace nmqa
