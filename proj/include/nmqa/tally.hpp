#pragma once

#include "nmqa/common.hpp"
#include "nmqa/measurement.hpp"

namespace nmqa {

/// Counters for one site: physical shots (tau, kappa) and received messages
/// (phi, gamma). kappa and gamma are running means, stored as 0 while their
/// count is 0.
struct SiteTally {
  int tau = 0;
  int phi = 0;
  double kappa = 0.0;
  double gamma = 0.0;

  bool has_data() const { return tau > 0 || phi > 0; }
};

/// Per-run tallies driven purely by observed bits; shared by every particle.
class SharedStateTally {
 public:
  SharedStateTally() = default;
  explicit SharedStateTally(Index sites)
      : tau_(Eigen::VectorXi::Zero(sites)),
        phi_(Eigen::VectorXi::Zero(sites)),
        kappa_(VectorXd::Zero(sites)),
        gamma_(VectorXd::Zero(sites)) {}

  Index size() const { return tau_.size(); }

  SiteTally at(Index site) const {
    return {tau_[site], phi_[site], kappa_[site], gamma_[site]};
  }

  const Eigen::VectorXi& tau() const { return tau_; }
  const Eigen::VectorXi& phi() const { return phi_; }
  const VectorXd& kappa() const { return kappa_; }
  const VectorXd& gamma() const { return gamma_; }

  /// Folds one outcome into the running mean for its origin.
  void record(const MeasurementOutcome& outcome);

 private:
  Eigen::VectorXi tau_;
  Eigen::VectorXi phi_;
  VectorXd kappa_;
  VectorXd gamma_;
};

/// Empirical Born probability for a site; messages are discounted by
/// lambda1^tau as physical shots accumulate.
double born_estimate(const SiteTally& tally, double lambda1);

/// h1: phase estimate arccos(2P - 1). Throws NoData when the site has neither
/// shots nor messages (the caller keeps its prior phase).
double update_map_h1(const SiteTally& tally, double lambda1);

}  // namespace nmqa
