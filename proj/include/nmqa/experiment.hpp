#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nmqa/control.hpp"
#include "nmqa/filter.hpp"
#include "nmqa/metrics.hpp"

namespace nmqa {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to slot i by the callee so the reduction order never depends on
/// scheduling.
void parallel_for(Index count, Index threads, const std::function<void(Index)>& fn);

struct TrialPlan {
  Index T = 1;
  Index trials = 50;
  std::uint64_t master_seed = 1;
  Index threads = 1;
  RunOptions options;
};

/// `trials` independent runs of one strategy. Trial i uses
/// make_stream(master_seed, i), so every strategy, T and lambda pair sees the
/// same per-trial streams.
std::vector<RunRecord> run_trials(Strategy strategy, const FilterConfig& config,
                                  const QubitArray& array, const MeasurementSource& source,
                                  const TrialPlan& plan);

ScoreEntry evaluate(Strategy strategy, const FilterConfig& config, const QubitArray& array,
                    const MeasurementSource& source, const VectorXd& truth, const TrialPlan& plan,
                    std::vector<RunRecord>* keep = nullptr);

}  // namespace nmqa
