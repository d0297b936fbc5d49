#pragma once

#include <span>
#include <vector>

#include "nmqa/experiment.hpp"

namespace nmqa {

/// Minimum Avg SSIM gain over the lambda1 = lambda2 = 0 baseline for a pair
/// to count as improved.
inline constexpr double kImprovementMargin = 0.025;

struct LambdaPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// n pairs uniform on [0, 1]^2.
std::vector<LambdaPair> sample_pairs(Index n, Rng& rng);

struct Candidate {
  LambdaPair pair;
  double avg_ssim = 0.0;
  double std = 0.0;
  Index aborted = 0;
  bool improved = false;
};

struct TuningResult {
  std::vector<Candidate> candidates;
  Candidate best;
  Candidate baseline;
  std::vector<Index> improved;  // indices into candidates
};

/// Random search: every candidate and the (0, 0) baseline are scored with the
/// same per-trial streams.
TuningResult tune(const FilterConfig& config_template, const QubitArray& array,
                  const MeasurementSource& source, const VectorXd& truth,
                  std::span<const LambdaPair> pairs, const TrialPlan& plan);

/// Scores one pair at every budget in `budgets`.
std::vector<ScoreEntry> fixed_choice_transfer(const LambdaPair& pair,
                                              const FilterConfig& config_template,
                                              const QubitArray& array,
                                              const MeasurementSource& source,
                                              const VectorXd& truth, std::span<const Index> budgets,
                                              const TrialPlan& plan);

}  // namespace nmqa
