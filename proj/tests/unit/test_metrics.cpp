#include <gtest/gtest.h>

#include <cmath>

#include "nmqa/metrics.hpp"

namespace nmqa {
namespace {

constexpr double kConstMapsScore = 0.39935259395982963;  // 0.25pi vs 0.75pi, constant maps
constexpr double kTwoPointStd = 0.1414213562373095;      // sample std of (0.2, 0.4)

// Straight transcription of the SSIM formula with plain loops.
double ssim_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double vx = 0.0;
  double vy = 0.0;
  double cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
    cxy += (x[i] - mx) * (y[i] - my);
  }
  vx /= n;
  vy /= n;
  cxy /= n;
  const double s = (2 * mx * my + 0.01) * (2 * cxy + 0.01) /
                   ((mx * mx + my * my + 0.01) * (vx + vy + 0.01));
  return std::abs(1 - s);
}

TEST(Ssim, Identity) {
  VectorXd x = VectorXd::LinSpaced(25, 0.1, 3.0);
  EXPECT_DOUBLE_EQ(ssim(x, x), 0.0);
}

TEST(Ssim, ConstantMaps) {
  for (const Index n : {9, 25}) {
    const VectorXd a = VectorXd::Constant(n, 0.25 * kPi);
    const VectorXd b = VectorXd::Constant(n, 0.75 * kPi);
    EXPECT_NEAR(ssim(a, b), kConstMapsScore, 1e-12);
  }
}

TEST(Ssim, SymmetricAndMatchesOracle) {
  Rng rng = make_stream(71, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 2 + uniform_index(rng, 30);
    VectorXd x(n);
    VectorXd y(n);
    for (Index i = 0; i < n; ++i) {
      x[i] = uniform(rng, 0.0, kPi);
      y[i] = uniform(rng, 0.0, kPi);
    }
    const double s = ssim(x, y);
    EXPECT_NEAR(s, ssim(y, x), 1e-15);
    EXPECT_NEAR(s, ssim_oracle({x.data(), x.data() + n}, {y.data(), y.data() + n}), 1e-12);
  }
}

TEST(Ssim, RejectsBadShapes) {
  EXPECT_THROW(ssim(VectorXd::Zero(3), VectorXd::Zero(4)), InvalidArgument);
  EXPECT_THROW(ssim(VectorXd::Zero(1), VectorXd::Zero(1)), InvalidArgument);
}

TEST(Ssim, WorksOnFloat) {
  Eigen::VectorXf x = Eigen::VectorXf::LinSpaced(9, 0.1f, 3.0f);
  EXPECT_FLOAT_EQ(ssim(x, x), 0.0f);
}

TEST(Scores, TwoPoint) {
  const std::vector<double> s{0.2, 0.4};
  const ScoreEntry e = summarize_scores(s);
  EXPECT_DOUBLE_EQ(e.avg_ssim, 0.3);
  EXPECT_NEAR(e.std, kTwoPointStd, 1e-15);
  EXPECT_EQ(e.trials, 2);
}

TEST(Scores, SingleSampleHasZeroStd) {
  const std::vector<double> s{0.7};
  EXPECT_EQ(summarize_scores(s).std, 0.0);
}

RunRecord record_with(const VectorXd& map, bool valid = true) {
  RunRecord r;
  r.final_map = map;
  r.valid = valid;
  return r;
}

TEST(AvgSsim, PerfectAndIdentical) {
  const VectorXd truth = VectorXd::LinSpaced(9, 0.2, 2.8);
  std::vector<RunRecord> runs(50, record_with(truth));
  const ScoreEntry e = avg_ssim(runs, truth);
  EXPECT_EQ(e.avg_ssim, 0.0);
  EXPECT_EQ(e.std, 0.0);
  EXPECT_EQ(e.trials, 50);
}

TEST(AvgSsim, AbortedRunsScoreOne) {
  const VectorXd truth = VectorXd::LinSpaced(9, 0.2, 2.8);
  std::vector<RunRecord> runs{record_with(truth), record_with(truth, false)};
  const ScoreEntry e = avg_ssim(runs, truth);
  EXPECT_DOUBLE_EQ(e.avg_ssim, 0.5);
  EXPECT_EQ(e.aborted, 1);
}

TEST(AvgSsim, OrderInvariant) {
  const VectorXd truth = VectorXd::LinSpaced(9, 0.2, 2.8);
  std::vector<RunRecord> runs;
  for (int i = 0; i < 5; ++i) {
    runs.push_back(record_with(truth.array() + 0.1 * i));
  }
  const double a = avg_ssim(runs, truth).avg_ssim;
  std::reverse(runs.begin(), runs.end());
  EXPECT_NEAR(avg_ssim(runs, truth).avg_ssim, a, 1e-15);
}

TEST(Pooled, StandardError) {
  ScoreEntry a;
  a.std = 0.3;
  a.trials = 9;
  ScoreEntry b;
  b.std = 0.4;
  b.trials = 16;
  EXPECT_DOUBLE_EQ(pooled_standard_error(a, b), std::sqrt(0.01 + 0.01));
}

TEST(Ratio, WorkedExample) {
  // naive reaches 0.4 at T=90, NMQA at T=5
  const std::vector<CurvePoint> naive{{10, 0.8}, {90, 0.4}, {200, 0.1}};
  const std::vector<CurvePoint> nmqa{{1, 0.9}, {5, 0.4}, {50, 0.05}};
  EXPECT_NEAR(measurement_ratio(naive, nmqa, 0.4), 18.0, 1e-12);
}

TEST(Ratio, SelfRatioIsOne) {
  const std::vector<CurvePoint> c{{5, 0.8}, {10, 0.6}, {25, 0.5}, {50, 0.3}, {100, 0.2}};
  for (int k = 0; k <= 12; ++k) {
    EXPECT_NEAR(measurement_ratio(c, c, 0.2 + 0.05 * k), 1.0, 1e-12);
  }
}

TEST(Ratio, OutOfRange) {
  const std::vector<CurvePoint> c{{5, 0.8}, {10, 0.6}, {50, 0.3}};
  EXPECT_THROW(invert_curve(c, 0.1), OutOfRange);
  EXPECT_THROW(invert_curve(c, 0.95), OutOfRange);
}

TEST(Ratio, UsesDecreasingTail) {
  // the bump at T=10 cuts the tail at T=10
  const std::vector<CurvePoint> c{{5, 0.5}, {10, 0.7}, {25, 0.4}, {50, 0.2}};
  EXPECT_NEAR(invert_curve(c, 0.55), 17.5, 1e-12);
  EXPECT_THROW(invert_curve(c, 0.75), OutOfRange);
}

TEST(Ratio, CurveSkipsUnattainable) {
  const std::vector<CurvePoint> naive{{10, 0.8}, {100, 0.3}};
  const std::vector<CurvePoint> nmqa{{10, 0.5}, {100, 0.1}};
  const auto pts = ratio_curve(naive, nmqa, 0.25, 0.65, 5);
  ASSERT_EQ(pts.size(), 2U);  // 0.25 is below naive's range, 0.55 and 0.65 above nmqa's
  EXPECT_DOUBLE_EQ(pts[0].target, 0.35);
  EXPECT_DOUBLE_EQ(pts[1].target, 0.45);
}

}  // namespace
}  // namespace nmqa
