#pragma once

#include <cmath>
#include <vector>

#include "nmqa/common.hpp"
#include "nmqa/lattice.hpp"
#include "nmqa/measurement.hpp"
#include "nmqa/tally.hpp"

namespace nmqa {

/// Map phases and length-scales for every site.
template <class Scalar = double>
struct ExtendedState {
  Vec<Scalar> f;
  Vec<Scalar> r;

  Index size() const { return f.size(); }
};

/// Phase at `f_j` spread a distance `nu` by a Gaussian of length-scale `r_j`.
template <class Scalar>
Scalar smeared_phase(Scalar f_j, Scalar r_j, Scalar nu) {
  if (!(r_j > Scalar(0))) {
    throw InvalidArgument("length-scale must be positive");
  }
  using std::exp;
  return f_j * exp(-(nu * nu) / (r_j * r_j));
}

/// Neighbour estimate blended from the neighbour's own phase and the smeared
/// phase of the measured site. lambda2^tau with tau = 0 is 1, also for lambda2 = 0.
template <class Scalar>
Scalar shared_estimate(Scalar f_q, Scalar f_j, Scalar r_j, Scalar nu, int tau_q, Scalar lambda2) {
  using std::pow;
  const Scalar w = tau_q == 0 ? Scalar(1) : pow(lambda2, tau_q);
  return (Scalar(1) - w) * f_q + w * smeared_phase(f_j, r_j, nu);
}

struct Neighborhood {
  Index center = 0;
  std::vector<Index> members;
};

/// Sites other than `j` within k0 * r_j of `j`.
Neighborhood neighborhood(const QubitArray& array, Index j, double r_j, double k0);

/// Appends the members of the neighbourhood to `out` without allocating a new
/// Neighborhood; used in the beta-particle inner loop.
void neighborhood_members(const QubitArray& array, Index j, double r_j, double k0,
                          std::vector<Index>& out);

/// One Bernoulli(cos(X_q)/2 + 1/2) message per member of the posterior
/// neighbourhood of `j`.
std::vector<MeasurementOutcome> generate_messages(const ExtendedState<double>& posterior, Index j,
                                                  const QubitArray& array,
                                                  const SharedStateTally& tally, double lambda2,
                                                  double k0, Rng& rng);

}  // namespace nmqa
