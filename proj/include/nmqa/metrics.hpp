#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nmqa/common.hpp"
#include "nmqa/control.hpp"

namespace nmqa {

inline constexpr double kSsimC1 = 0.01;
inline constexpr double kSsimC2 = 0.01;

/// Structural similarity s(x, y) over whole vectors, with 1/n sample moments.
template <class DerivedX, class DerivedY>
typename DerivedX::Scalar ssim_similarity(const Eigen::MatrixBase<DerivedX>& x,
                                          const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.size() != y.size()) {
    throw InvalidArgument("ssim needs maps of equal length");
  }
  if (x.size() < 2) {
    throw InvalidArgument("ssim needs at least two sites");
  }
  const Scalar n = static_cast<Scalar>(x.size());
  const Scalar mx = x.mean();
  const Scalar my = y.mean();
  const auto dx = (x.array() - mx);
  const auto dy = (y.array() - my);
  const Scalar vx = dx.square().sum() / n;
  const Scalar vy = dy.square().sum() / n;
  const Scalar cxy = (dx * dy).sum() / n;
  return ((Scalar(2) * mx * my + Scalar(kSsimC1)) * (Scalar(2) * cxy + Scalar(kSsimC2))) /
         ((mx * mx + my * my + Scalar(kSsimC1)) * (vx + vy + Scalar(kSsimC2)));
}

/// |1 - s(x, y)|; 0 is a perfect reconstruction. Values above 1 (negative s)
/// are reported as-is.
template <class DerivedX, class DerivedY>
typename DerivedX::Scalar ssim(const Eigen::MatrixBase<DerivedX>& x,
                               const Eigen::MatrixBase<DerivedY>& y) {
  using std::abs;
  return abs(typename DerivedX::Scalar(1) - ssim_similarity(x, y));
}

struct ScoreEntry {
  Strategy strategy = Strategy::nmqa;
  Index T = 0;
  std::vector<double> scores;
  double avg_ssim = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  Index trials = 0;
  Index aborted = 0;
  Index negative_similarity = 0;

  /// Standard error of avg_ssim.
  double standard_error() const {
    return trials > 0 ? std / std::sqrt(static_cast<double>(trials)) : 0.0;
  }
};

/// Mean and sample standard deviation of a list of scores.
ScoreEntry summarize_scores(std::span<const double> scores);

/// Scores every run against `truth`. Aborted runs count as score 1.
ScoreEntry avg_ssim(std::span<const RunRecord> runs, const Eigen::Ref<const VectorXd>& truth);

/// Two-sample pooled standard error sqrt(se_a^2 + se_b^2).
double pooled_standard_error(const ScoreEntry& a, const ScoreEntry& b);

struct CurvePoint {
  double T = 0.0;
  double avg_ssim = 0.0;
};

/// T at which a curve reaches `target`, by piecewise-linear interpolation on
/// the monotone-decreasing tail that ends at the largest T. Throws OutOfRange
/// when the tail never attains `target`.
double invert_curve(std::span<const CurvePoint> curve, double target);

/// T_naive(target) / T_nmqa(target).
double measurement_ratio(std::span<const CurvePoint> naive_curve,
                         std::span<const CurvePoint> nmqa_curve, double target);

struct RatioPoint {
  double target = 0.0;
  double ratio = 0.0;
};

/// Ratios on an evenly spaced grid of targets; unattainable targets are skipped.
std::vector<RatioPoint> ratio_curve(std::span<const CurvePoint> naive_curve,
                                    std::span<const CurvePoint> nmqa_curve, double lo, double hi,
                                    Index points);

}  // namespace nmqa
