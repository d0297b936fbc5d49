#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "nmqa/common.hpp"
#include "nmqa/lattice.hpp"
#include "nmqa/measurement.hpp"
#include "nmqa/sharing.hpp"
#include "nmqa/tally.hpp"

namespace nmqa {

/// Where message counters (phi, gamma) live. `global`: one tally per run fed
/// by messages drawn from the posterior mean. `particle`: every alpha-particle
/// draws its own messages from its own state and carries its own phi/gamma;
/// physical counters (tau, kappa) stay global in both modes.
enum class TallyScope { global, particle };

std::string_view to_string(TallyScope scope);
TallyScope tally_scope_from_string(std::string_view name);

struct FilterConfig {
  Index n_alpha = 100;
  Index n_beta = 25;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  NoiseParams noise;
  double r_min = 1.0;
  double r_max = 1.0;
  double k0 = 1.0;
  TallyScope tally_scope = TallyScope::global;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Likelihoods
// ---------------------------------------------------------------------------

/// Scale of the quantized-noise likelihood; g1(f, 0) + g1(f, 1) == rho0.
double rho0(double sigma_v, double b = 0.5);

/// Normaliser of the map-approximation error truncated to [-pi, pi].
double k1(double mu_f, double sigma_f);

/// Per-run likelihood constants, evaluated once.
struct LikelihoodConstants {
  double rho0 = 1.0;
  double k1 = 1.0;
  double log_density_peak = 0.0;  // -log(k1 * sqrt(2 pi sigma_f))
  double mu_f = 0.0;
  double sigma_f = 1e-6;

  static LikelihoodConstants from(const NoiseParams& noise);
};

double g1_weight(double f_j, int y, double rho0_value);
double g1_weight_for_noise(double f_j, int y, double sigma_v);

struct BetaParticle {
  Index parent = 0;
  double r_j = 1.0;
  double weight = 0.0;
};

/// log g2 for a length-scale hypothesis at `j` given the parent's map `f`.
/// An empty neighbourhood contributes log(1) = 0.
double g2_log_weight(double r_j, Index j, const Eigen::Ref<const VectorXd>& f,
                     const QubitArray& array, const SharedStateTally& tally,
                     const FilterConfig& config, const LikelihoodConstants& constants);

double g2_weight(const BetaParticle& beta, Index j, const Eigen::Ref<const VectorXd>& f,
                 const QubitArray& array, const SharedStateTally& tally,
                 const FilterConfig& config);

// ---------------------------------------------------------------------------
// Particles
// ---------------------------------------------------------------------------

struct AlphaParticle {
  ExtendedState<double> state;
  double weight = 0.0;
};

/// alpha-particles stored column-wise: f(site, particle), r(site, particle).
struct ParticleEnsemble {
  MatrixXd f;
  MatrixXd r;
  VectorXd weights;
  // Per-particle message counters, TallyScope::particle only (else empty).
  Eigen::MatrixXi phi;
  MatrixXd gamma;

  Index size() const { return weights.size(); }
  Index sites() const { return f.rows(); }
  AlphaParticle alpha(Index i) const;
};

ParticleEnsemble init_ensemble(const FilterConfig& config, const QubitArray& array, Rng& rng);

std::vector<BetaParticle> spawn_beta_layer(Index parent, Index n_beta, const FilterConfig& config,
                                           Rng& rng);

/// `count` indices drawn i.i.d. with probability proportional to `weights`.
std::vector<Index> resample_indices(const Eigen::Ref<const VectorXd>& weights, Index count,
                                    Rng& rng);

template <class T>
std::vector<T> resample_multinomial(std::span<const T> items,
                                    const Eigen::Ref<const VectorXd>& weights, Index count,
                                    Rng& rng) {
  if (static_cast<Index>(items.size()) != weights.size()) {
    throw InvalidArgument("items and weights differ in length");
  }
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(count));
  for (const Index i : resample_indices(weights, count, rng)) {
    out.push_back(items[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// h2: mean length-scale of the beta-particles that survived resampling.
double update_lengthscale_h2(std::span<const double> survivors);

/// One physical shot plus the messages generated at the previous iteration.
struct Observation {
  MeasurementOutcome physical;
  std::vector<MeasurementOutcome> messages;                        // global scope
  std::vector<std::vector<MeasurementOutcome>> particle_messages;  // particle scope, one list per alpha
};

/// Counters seen by particle `a` at `site` under the configured scope.
SiteTally site_tally(const ParticleEnsemble& ensemble, const SharedStateTally& tally, Index site,
                     Index a, TallyScope scope);

/// TallyScope::particle message generation: each alpha-particle shares its own
/// phase at `j` over its own neighbourhood.
std::vector<std::vector<MeasurementOutcome>> generate_particle_messages(
    const ParticleEnsemble& ensemble, Index j, const QubitArray& array,
    const SharedStateTally& tally, const FilterConfig& config, Rng& rng);

/// One NMQA filtering iteration: g1 weighting and h1 map update, beta-layer
/// weighting by g2, joint multinomial resampling, h2 length-scale update and
/// collapse to uniformly weighted alpha-particles.
void step(ParticleEnsemble& ensemble, SharedStateTally& tally, const Observation& z,
          const FilterConfig& config, const QubitArray& array, Rng& rng);

struct PosteriorSummary {
  VectorXd f_mean;
  VectorXd f_var;
  VectorXd r_mean;

  ExtendedState<double> mean_state() const { return {f_mean, r_mean}; }
};

PosteriorSummary posterior_summary(const ParticleEnsemble& ensemble);

}  // namespace nmqa
