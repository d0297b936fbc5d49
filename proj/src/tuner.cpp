#include "nmqa/tuner.hpp"

namespace nmqa {

std::vector<LambdaPair> sample_pairs(Index n, Rng& rng) {
  if (n < 1) {
    throw InvalidArgument("need at least one lambda pair");
  }
  std::vector<LambdaPair> pairs(static_cast<std::size_t>(n));
  for (auto& p : pairs) {
    p.lambda1 = uniform01(rng);
    p.lambda2 = uniform01(rng);
  }
  return pairs;
}

namespace {

Candidate score_pair(const LambdaPair& pair, const FilterConfig& config_template,
                     const QubitArray& array, const MeasurementSource& source,
                     const VectorXd& truth, const TrialPlan& plan) {
  FilterConfig config = config_template;
  config.lambda1 = pair.lambda1;
  config.lambda2 = pair.lambda2;
  const ScoreEntry entry = evaluate(Strategy::nmqa, config, array, source, truth, plan);
  return {pair, entry.avg_ssim, entry.std, entry.aborted, false};
}

}  // namespace

TuningResult tune(const FilterConfig& config_template, const QubitArray& array,
                  const MeasurementSource& source, const VectorXd& truth,
                  std::span<const LambdaPair> pairs, const TrialPlan& plan) {
  if (pairs.empty()) {
    throw InvalidArgument("no candidate pairs");
  }
  TuningResult result;
  result.baseline = score_pair({0.0, 0.0}, config_template, array, source, truth, plan);
  result.candidates.reserve(pairs.size());
  for (const auto& pair : pairs) {
    result.candidates.push_back(score_pair(pair, config_template, array, source, truth, plan));
  }
  result.best = result.candidates.front();
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    auto& c = result.candidates[i];
    c.improved = result.baseline.avg_ssim - c.avg_ssim >= kImprovementMargin;
    if (c.improved) {
      result.improved.push_back(static_cast<Index>(i));
    }
    if (c.avg_ssim < result.best.avg_ssim) {
      result.best = c;
    }
  }
  return result;
}

std::vector<ScoreEntry> fixed_choice_transfer(const LambdaPair& pair,
                                              const FilterConfig& config_template,
                                              const QubitArray& array,
                                              const MeasurementSource& source,
                                              const VectorXd& truth, std::span<const Index> budgets,
                                              const TrialPlan& plan) {
  FilterConfig config = config_template;
  config.lambda1 = pair.lambda1;
  config.lambda2 = pair.lambda2;
  std::vector<ScoreEntry> out;
  out.reserve(budgets.size());
  for (const Index T : budgets) {
    TrialPlan at_t = plan;
    at_t.T = T;
    out.push_back(evaluate(Strategy::nmqa, config, array, source, truth, at_t));
  }
  return out;
}

}  // namespace nmqa
