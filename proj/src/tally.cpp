#include "nmqa/tally.hpp"

#include <algorithm>
#include <cmath>

namespace nmqa {

void SharedStateTally::record(const MeasurementOutcome& outcome) {
  const Index j = outcome.site;
  if (j < 0 || j >= size()) {
    throw InvalidArgument("outcome site out of range");
  }
  const double bit = outcome.bit ? 1.0 : 0.0;
  if (outcome.origin == Origin::physical) {
    const int n = ++tau_[j];
    kappa_[j] += (bit - kappa_[j]) / n;
  } else {
    const int n = ++phi_[j];
    gamma_[j] += (bit - gamma_[j]) / n;
  }
}

double born_estimate(const SiteTally& tally, double lambda1) {
  if (tally.tau > 0 && tally.phi > 0) {
    const double w = 0.5 * std::pow(lambda1, tally.tau);
    return (1.0 - w) * tally.kappa + w * tally.gamma;
  }
  if (tally.tau > 0) {
    return tally.kappa;
  }
  if (tally.phi > 0) {
    return tally.gamma;
  }
  throw NoData("site has no physical or shared data");
}

double update_map_h1(const SiteTally& tally, double lambda1) {
  const double p = born_estimate(tally, lambda1);
  return std::acos(std::clamp(2.0 * p - 1.0, -1.0, 1.0));
}

}  // namespace nmqa
