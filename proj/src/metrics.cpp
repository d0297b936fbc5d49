#include "nmqa/metrics.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

namespace nmqa {

ScoreEntry summarize_scores(std::span<const double> scores) {
  if (scores.empty()) {
    throw InvalidArgument("no scores to summarize");
  }
  ScoreEntry entry;
  entry.scores.assign(scores.begin(), scores.end());
  entry.trials = static_cast<Index>(scores.size());
  const double n = static_cast<double>(scores.size());
  entry.avg_ssim = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  if (scores.size() > 1) {
    double ss = 0.0;
    for (const double s : scores) {
      ss += (s - entry.avg_ssim) * (s - entry.avg_ssim);
    }
    entry.std = std::sqrt(ss / (n - 1.0));
  }
  return entry;
}

ScoreEntry avg_ssim(std::span<const RunRecord> runs, const Eigen::Ref<const VectorXd>& truth) {
  if (runs.empty()) {
    throw InvalidArgument("avg_ssim needs at least one run");
  }
  std::vector<double> scores;
  scores.reserve(runs.size());
  Index aborted = 0;
  Index negative = 0;
  for (const auto& run : runs) {
    if (!run.valid) {
      scores.push_back(1.0);
      ++aborted;
      continue;
    }
    const double s = ssim_similarity(run.final_map, truth);
    if (s < 0.0) {
      ++negative;
    }
    scores.push_back(std::abs(1.0 - s));
  }
  if (negative > 0) {
    std::clog << "warning: " << negative << " run(s) produced negative structural similarity\n";
  }
  ScoreEntry entry = summarize_scores(scores);
  entry.strategy = runs.front().strategy;
  entry.T = static_cast<Index>(runs.front().trajectory.size());
  entry.aborted = aborted;
  entry.negative_similarity = negative;
  return entry;
}

double pooled_standard_error(const ScoreEntry& a, const ScoreEntry& b) {
  const double sa = a.standard_error();
  const double sb = b.standard_error();
  return std::sqrt(sa * sa + sb * sb);
}

double invert_curve(std::span<const CurvePoint> curve, double target) {
  if (curve.size() < 2) {
    throw InvalidArgument("curve inversion needs at least two points");
  }
  std::vector<CurvePoint> pts(curve.begin(), curve.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.T < b.T; });

  // Extend the tail towards smaller T while the score keeps rising.
  std::size_t start = pts.size() - 1;
  while (start > 0 && pts[start - 1].avg_ssim >= pts[start].avg_ssim) {
    --start;
  }
  const double lo = pts.back().avg_ssim;
  const double hi = pts[start].avg_ssim;
  if (!(target >= lo && target <= hi)) {
    throw OutOfRange("target Avg SSIM outside the curve's monotone range");
  }
  for (std::size_t i = start; i + 1 < pts.size(); ++i) {
    const auto& a = pts[i];
    const auto& b = pts[i + 1];
    if (target <= a.avg_ssim && target >= b.avg_ssim) {
      if (a.avg_ssim == b.avg_ssim) {
        return a.T;
      }
      const double frac = (a.avg_ssim - target) / (a.avg_ssim - b.avg_ssim);
      return a.T + frac * (b.T - a.T);
    }
  }
  return pts.back().T;
}

double measurement_ratio(std::span<const CurvePoint> naive_curve,
                         std::span<const CurvePoint> nmqa_curve, double target) {
  return invert_curve(naive_curve, target) / invert_curve(nmqa_curve, target);
}

std::vector<RatioPoint> ratio_curve(std::span<const CurvePoint> naive_curve,
                                    std::span<const CurvePoint> nmqa_curve, double lo, double hi,
                                    Index points) {
  std::vector<RatioPoint> out;
  for (Index i = 0; i < points; ++i) {
    const double target =
        points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    try {
      out.push_back({target, measurement_ratio(naive_curve, nmqa_curve, target)});
    } catch (const OutOfRange&) {
    }
  }
  return out;
}

}  // namespace nmqa
