#include "nmqa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace nmqa {

void parallel_for(Index count, Index threads, const std::function<void(Index)>& fn) {
  const Index workers = std::clamp<Index>(threads, 1, std::max<Index>(count, 1));
  if (workers == 1) {
    for (Index i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
        }
      }
    });
  }
  pool.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<RunRecord> run_trials(Strategy strategy, const FilterConfig& config,
                                  const QubitArray& array, const MeasurementSource& source,
                                  const TrialPlan& plan) {
  if (plan.trials < 1) {
    throw InvalidArgument("trials must be >= 1");
  }
  std::vector<RunRecord> runs(static_cast<std::size_t>(plan.trials));
  parallel_for(plan.trials, plan.threads, [&](Index i) {
    Rng rng = make_stream(plan.master_seed, static_cast<std::uint64_t>(i));
    RunRecord run = strategy == Strategy::nmqa
                        ? run_nmqa(config, array, source, plan.T, rng, plan.options)
                        : run_naive(array, source, plan.T, rng, plan.options);
    run.seed = plan.master_seed;
    run.run_index = static_cast<std::uint64_t>(i);
    runs[static_cast<std::size_t>(i)] = std::move(run);
  });
  return runs;
}

ScoreEntry evaluate(Strategy strategy, const FilterConfig& config, const QubitArray& array,
                    const MeasurementSource& source, const VectorXd& truth, const TrialPlan& plan,
                    std::vector<RunRecord>* keep) {
  std::vector<RunRecord> runs = run_trials(strategy, config, array, source, plan);
  ScoreEntry entry = avg_ssim(runs, truth);
  entry.strategy = strategy;
  entry.T = plan.T;
  if (keep != nullptr) {
    *keep = std::move(runs);
  }
  return entry;
}

}  // namespace nmqa
