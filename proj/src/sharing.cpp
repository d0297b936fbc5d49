#include "nmqa/sharing.hpp"

#include <algorithm>

namespace nmqa {

void neighborhood_members(const QubitArray& array, Index j, double r_j, double k0,
                          std::vector<Index>& out) {
  if (j < 0 || j >= array.size()) {
    throw InvalidArgument("site label out of range");
  }
  const double radius = k0 * r_j;
  const auto dist = array.distances().col(j);
  for (Index q = 0; q < array.size(); ++q) {
    if (q != j && dist[q] <= radius) {
      out.push_back(q);
    }
  }
}

Neighborhood neighborhood(const QubitArray& array, Index j, double r_j, double k0) {
  if (!(r_j > 0.0)) {
    throw InvalidArgument("length-scale must be positive");
  }
  if (!(k0 >= 1.0)) {
    throw InvalidArgument("k0 must be >= 1");
  }
  Neighborhood hood;
  hood.center = j;
  neighborhood_members(array, j, r_j, k0, hood.members);
  return hood;
}

std::vector<MeasurementOutcome> generate_messages(const ExtendedState<double>& posterior, Index j,
                                                  const QubitArray& array,
                                                  const SharedStateTally& tally, double lambda2,
                                                  double k0, Rng& rng) {
  const Neighborhood hood = neighborhood(array, j, posterior.r[j], k0);
  std::vector<MeasurementOutcome> messages;
  messages.reserve(hood.members.size());
  for (const Index q : hood.members) {
    const double x_q = shared_estimate(posterior.f[q], posterior.f[j], posterior.r[j],
                                       array.distance(j, q), tally.at(q).tau, lambda2);
    const double p = std::clamp(0.5 * std::cos(x_q) + 0.5, 0.0, 1.0);
    messages.push_back({q, bernoulli(rng, p), Origin::message});
  }
  return messages;
}

}  // namespace nmqa
