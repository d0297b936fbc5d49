#include <gtest/gtest.h>

#include "nmqa/tuner.hpp"

namespace nmqa {
namespace {

TEST(Pairs, InUnitSquare) {
  Rng rng = make_stream(81, 0);
  const auto pairs = sample_pairs(250, rng);
  ASSERT_EQ(pairs.size(), 250U);
  for (const auto& p : pairs) {
    EXPECT_GE(p.lambda1, 0.0);
    EXPECT_LE(p.lambda1, 1.0);
    EXPECT_GE(p.lambda2, 0.0);
    EXPECT_LE(p.lambda2, 1.0);
  }
  EXPECT_THROW(sample_pairs(0, rng), InvalidArgument);
}

TEST(Pairs, SeededPoolsMatch) {
  Rng a = make_stream(82, 0);
  Rng b = make_stream(82, 0);
  const auto x = sample_pairs(20, a);
  const auto y = sample_pairs(20, b);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].lambda1, y[i].lambda1);
    EXPECT_EQ(x[i].lambda2, y[i].lambda2);
  }
}

TEST(Pairs, UniformMean) {
  Rng rng = make_stream(83, 0);
  double sum = 0.0;
  for (const auto& p : sample_pairs(10000, rng)) {
    sum += p.lambda1;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.012);
}

struct Bench {
  QubitArray array = build_grid(3, 3, 1.0);
  TrueField truth;
  FilterConfig config;
  TrialPlan plan;
  Bench() {
    FieldParams p;
    p.row_begin = 0;
    p.row_end = 2;
    p.col_begin = 0;
    p.col_end = 2;
    truth = make_field(array, FieldKind::square2d, 0.25 * kPi, 0.75 * kPi, p);
    config.n_alpha = 15;
    config.n_beta = 4;
    config.r_min = 1.0;
    config.r_max = array.diameter();
    plan.T = 6;
    plan.trials = 6;
    plan.master_seed = 3;
  }
};

TEST(Tune, BaselineOnlyCandidate) {
  Bench s;
  const MeasurementSource src(s.truth, 1e-4);
  const std::vector<LambdaPair> pairs{{0.0, 0.0}};
  const TuningResult r = tune(s.config, s.array, src, s.truth.values, pairs, s.plan);
  EXPECT_EQ(r.best.pair.lambda1, 0.0);
  EXPECT_EQ(r.best.pair.lambda2, 0.0);
  EXPECT_EQ(r.best.avg_ssim, r.baseline.avg_ssim);  // common random numbers
  EXPECT_TRUE(r.improved.empty());
}

TEST(Tune, BestIsMinimumAndImprovedIsExact) {
  Bench s;
  const MeasurementSource src(s.truth, 1e-4);
  Rng rng = make_stream(84, 0);
  const auto pairs = sample_pairs(6, rng);
  const TuningResult r = tune(s.config, s.array, src, s.truth.values, pairs, s.plan);
  ASSERT_EQ(r.candidates.size(), 6U);
  double lowest = 1e9;
  std::vector<Index> want;
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const auto& c = r.candidates[i];
    lowest = std::min(lowest, c.avg_ssim);
    const bool improved = r.baseline.avg_ssim - c.avg_ssim >= kImprovementMargin;
    EXPECT_EQ(c.improved, improved);
    if (improved) {
      want.push_back(static_cast<Index>(i));
    }
  }
  EXPECT_EQ(r.best.avg_ssim, lowest);
  EXPECT_EQ(r.improved, want);
  EXPECT_THROW(tune(s.config, s.array, src, s.truth.values, {}, s.plan), InvalidArgument);
}

TEST(Transfer, AtTuningBudgetReproducesScore) {
  Bench s;
  const MeasurementSource src(s.truth, 1e-4);
  const LambdaPair pair{0.7, 0.8};
  const std::vector<LambdaPair> pairs{pair};
  const TuningResult r = tune(s.config, s.array, src, s.truth.values, pairs, s.plan);
  const std::vector<Index> budgets{3, s.plan.T, 18};
  const auto curve = fixed_choice_transfer(pair, s.config, s.array, src, s.truth.values, budgets,
                                           s.plan);
  ASSERT_EQ(curve.size(), 3U);
  EXPECT_EQ(curve[1].avg_ssim, r.candidates[0].avg_ssim);
  EXPECT_EQ(curve[2].T, 18);
}

}  // namespace
}  // namespace nmqa
