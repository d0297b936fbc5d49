#include "nmqa/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nmqa {

std::string_view to_string(TallyScope scope) {
  return scope == TallyScope::global ? "global" : "particle";
}

TallyScope tally_scope_from_string(std::string_view name) {
  if (name == "global") {
    return TallyScope::global;
  }
  if (name == "particle") {
    return TallyScope::particle;
  }
  throw InvalidArgument("unknown tally scope '" + std::string(name) + "'");
}

void FilterConfig::validate() const {
  if (n_alpha < 1 || n_beta < 1) {
    throw InvalidArgument("n_alpha and n_beta must be positive");
  }
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0) || !(lambda2 >= 0.0 && lambda2 <= 1.0)) {
    throw InvalidArgument("lambda1 and lambda2 must lie in [0, 1]");
  }
  if (!(r_min > 0.0) || !(r_min <= r_max) || !std::isfinite(r_max)) {
    throw InvalidArgument("length-scale prior needs 0 < r_min <= r_max");
  }
  if (!(k0 >= 1.0)) {
    throw InvalidArgument("k0 must be >= 1");
  }
  noise.validate();
}

double rho0(double sigma_v, double b) {
  if (!(sigma_v > 0.0) || !(sigma_v < 1.0)) {
    throw InvalidArgument("rho0 needs sigma_v in (0, 1)");
  }
  const double s = std::sqrt(2.0 * sigma_v);
  const double x = 2.0 * b / s;
  return std::erf(x) + (s / (2.0 * b)) * std::exp(-x * x) / std::sqrt(kPi) -
         (1.0 / (2.0 * b)) * s / std::sqrt(kPi);
}

double k1(double mu_f, double sigma_f) {
  const double s = std::sqrt(2.0 * sigma_f);
  return 0.5 * (std::erf((kPi + mu_f) / s) + std::erf((kPi - mu_f) / s));
}

LikelihoodConstants LikelihoodConstants::from(const NoiseParams& noise) {
  LikelihoodConstants c;
  c.rho0 = nmqa::rho0(noise.sigma_v, noise.b);
  c.k1 = nmqa::k1(noise.mu_f, noise.sigma_f);
  c.log_density_peak = -std::log(c.k1 * std::sqrt(2.0 * kPi * noise.sigma_f));
  c.mu_f = noise.mu_f;
  c.sigma_f = noise.sigma_f;
  return c;
}

double g1_weight(double f_j, int y, double rho0_value) {
  const double sign = y == 1 ? 1.0 : -1.0;
  return 0.5 * rho0_value + 0.5 * rho0_value * std::cos(f_j) * sign;
}

double g1_weight_for_noise(double f_j, int y, double sigma_v) {
  return g1_weight(f_j, y, rho0(sigma_v));
}

double g2_log_weight(double r_j, Index j, const Eigen::Ref<const VectorXd>& f,
                     const QubitArray& array, const SharedStateTally& tally,
                     const FilterConfig& config, const LikelihoodConstants& constants) {
  const double radius = config.k0 * r_j;
  const auto dist = array.distances().col(j);
  const auto& tau = tally.tau();
  double log_w = 0.0;
  for (Index q = 0; q < array.size(); ++q) {
    if (q == j || dist[q] > radius) {
      continue;
    }
    const double x_q = shared_estimate(f[q], f[j], r_j, dist[q], tau[q], config.lambda2);
    const double resid = f[q] - x_q - constants.mu_f;
    log_w += constants.log_density_peak - resid * resid / (2.0 * constants.sigma_f);
  }
  return log_w;
}

double g2_weight(const BetaParticle& beta, Index j, const Eigen::Ref<const VectorXd>& f,
                 const QubitArray& array, const SharedStateTally& tally,
                 const FilterConfig& config) {
  return std::exp(g2_log_weight(beta.r_j, j, f, array, tally, config,
                                LikelihoodConstants::from(config.noise)));
}

AlphaParticle ParticleEnsemble::alpha(Index i) const {
  return {{f.col(i), r.col(i)}, weights[i]};
}

ParticleEnsemble init_ensemble(const FilterConfig& config, const QubitArray& array, Rng& rng) {
  config.validate();
  const Index d = array.size();
  const Index n = config.n_alpha;
  ParticleEnsemble ensemble;
  ensemble.f.resize(d, n);
  ensemble.r.resize(d, n);
  for (Index i = 0; i < n; ++i) {
    for (Index s = 0; s < d; ++s) {
      ensemble.f(s, i) = uniform(rng, 0.0, kPi);
    }
    for (Index s = 0; s < d; ++s) {
      ensemble.r(s, i) = uniform(rng, config.r_min, config.r_max);
    }
  }
  ensemble.weights = VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (config.tally_scope == TallyScope::particle) {
    ensemble.phi = Eigen::MatrixXi::Zero(d, n);
    ensemble.gamma = MatrixXd::Zero(d, n);
  }
  return ensemble;
}

std::vector<BetaParticle> spawn_beta_layer(Index parent, Index n_beta, const FilterConfig& config,
                                           Rng& rng) {
  if (n_beta < 1) {
    throw InvalidArgument("n_beta must be positive");
  }
  std::vector<BetaParticle> layer(static_cast<std::size_t>(n_beta));
  for (auto& beta : layer) {
    beta.parent = parent;
    beta.r_j = uniform(rng, config.r_min, config.r_max);
    beta.weight = 1.0 / static_cast<double>(n_beta);
  }
  return layer;
}

std::vector<Index> resample_indices(const Eigen::Ref<const VectorXd>& weights, Index count,
                                    Rng& rng) {
  if (weights.size() == 0) {
    throw InvalidArgument("cannot resample an empty set");
  }
  std::vector<double> cumulative(static_cast<std::size_t>(weights.size()));
  double total = 0.0;
  for (Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DegenerateWeights("non-finite or negative particle weight at index " +
                              std::to_string(i));
    }
    total += w;
    cumulative[static_cast<std::size_t>(i)] = total;
  }
  if (!(total > 0.0)) {
    throw DegenerateWeights("all particle weights are zero");
  }
  std::vector<Index> out(static_cast<std::size_t>(count));
  for (auto& idx : out) {
    const double u = uniform01(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    idx = static_cast<Index>(it - cumulative.begin());
    // u rounded up to the total: take the last entry with positive weight.
    if (idx == weights.size()) {
      do {
        --idx;
      } while (weights[idx] == 0.0);
    }
  }
  return out;
}

double update_lengthscale_h2(std::span<const double> survivors) {
  if (survivors.empty()) {
    throw std::logic_error("h2 needs at least one surviving beta-particle");
  }
  return std::accumulate(survivors.begin(), survivors.end(), 0.0) /
         static_cast<double>(survivors.size());
}

SiteTally site_tally(const ParticleEnsemble& ensemble, const SharedStateTally& tally, Index site,
                     Index a, TallyScope scope) {
  SiteTally t = tally.at(site);
  if (scope == TallyScope::particle) {
    t.phi = ensemble.phi(site, a);
    t.gamma = ensemble.gamma(site, a);
  }
  return t;
}

std::vector<std::vector<MeasurementOutcome>> generate_particle_messages(
    const ParticleEnsemble& ensemble, Index j, const QubitArray& array,
    const SharedStateTally& tally, const FilterConfig& config, Rng& rng) {
  std::vector<std::vector<MeasurementOutcome>> out(static_cast<std::size_t>(ensemble.size()));
  for (Index a = 0; a < ensemble.size(); ++a) {
    const ExtendedState<double> state{ensemble.f.col(a), ensemble.r.col(a)};
    out[static_cast<std::size_t>(a)] =
        generate_messages(state, j, array, tally, config.lambda2, config.k0, rng);
  }
  return out;
}

namespace {

// Normalises in place. A likelihood that is identically zero over the
// ensemble is constant, so it leaves the prior weights unchanged.
void normalize_alpha(VectorXd& w, const VectorXd& prior) {
  const double total = w.sum();
  if (!std::isfinite(total)) {
    throw DegenerateWeights("non-finite alpha weight");
  }
  if (total > 0.0) {
    w /= total;
  } else {
    w = prior / prior.sum();
  }
}

}  // namespace

void step(ParticleEnsemble& ensemble, SharedStateTally& tally, const Observation& z,
          const FilterConfig& config, const QubitArray& array, Rng& rng) {
  const Index n_alpha = ensemble.size();
  const Index n_beta = config.n_beta;
  const Index j = z.physical.site;
  if (j < 0 || j >= array.size()) {
    throw InvalidArgument("measured site out of range");
  }
  const auto constants = LikelihoodConstants::from(config.noise);

  // (1) alpha weights from the physical shot, then h1 at every site whose tally moved.
  const bool per_particle = config.tally_scope == TallyScope::particle;
  if (per_particle && ensemble.phi.rows() != ensemble.sites()) {
    ensemble.phi = Eigen::MatrixXi::Zero(ensemble.sites(), n_alpha);
    ensemble.gamma = MatrixXd::Zero(ensemble.sites(), n_alpha);
  }
  tally.record(z.physical);
  if (!per_particle) {
    for (const auto& m : z.messages) {
      tally.record(m);
    }
  }
  VectorXd alpha_w(n_alpha);
  for (Index a = 0; a < n_alpha; ++a) {
    alpha_w[a] = ensemble.weights[a] * g1_weight(ensemble.f(j, a), z.physical.bit, constants.rho0);
  }
  normalize_alpha(alpha_w, ensemble.weights);

  if (per_particle) {
    if (!z.particle_messages.empty() &&
        static_cast<Index>(z.particle_messages.size()) != n_alpha) {
      throw InvalidArgument("need one message list per alpha-particle");
    }
    auto refresh = [&](Index site, Index a) {
      const SiteTally t = site_tally(ensemble, tally, site, a, TallyScope::particle);
      if (t.has_data()) {
        ensemble.f(site, a) = update_map_h1(t, config.lambda1);
      }
    };
    for (Index a = 0; a < n_alpha; ++a) {
      const auto* msgs =
          z.particle_messages.empty() ? nullptr : &z.particle_messages[static_cast<std::size_t>(a)];
      if (msgs != nullptr) {
        for (const auto& m : *msgs) {
          const int n = ++ensemble.phi(m.site, a);
          ensemble.gamma(m.site, a) += ((m.bit ? 1.0 : 0.0) - ensemble.gamma(m.site, a)) / n;
        }
      }
      refresh(j, a);
      if (msgs != nullptr) {
        for (const auto& m : *msgs) {
          refresh(m.site, a);
        }
      }
    }
  } else {
    auto refresh = [&](Index site) {
      const SiteTally t = tally.at(site);
      if (t.has_data()) {
        ensemble.f.row(site).setConstant(update_map_h1(t, config.lambda1));
      }
    };
    refresh(j);
    for (const auto& m : z.messages) {
      refresh(m.site);
    }
  }

  // (2) beta layers weighted by g2, normalised within each parent.
  std::vector<BetaParticle> joint;
  joint.reserve(static_cast<std::size_t>(n_alpha * n_beta));
  VectorXd joint_w(n_alpha * n_beta);
  VectorXd log_w(n_beta);
  for (Index a = 0; a < n_alpha; ++a) {
    auto layer = spawn_beta_layer(a, n_beta, config, rng);
    for (Index b = 0; b < n_beta; ++b) {
      log_w[b] = g2_log_weight(layer[static_cast<std::size_t>(b)].r_j, j, ensemble.f.col(a), array,
                               tally, config, constants);
    }
    const double peak = log_w.maxCoeff();
    if (!std::isfinite(peak)) {
      throw DegenerateWeights("beta layer of particle " + std::to_string(a) +
                              " has no finite weight");
    }
    VectorXd w = (log_w.array() - peak).exp().matrix();
    w /= w.sum();
    for (Index b = 0; b < n_beta; ++b) {
      layer[static_cast<std::size_t>(b)].weight = w[b];
      joint_w[a * n_beta + b] = alpha_w[a] * w[b];
      joint.push_back(layer[static_cast<std::size_t>(b)]);
    }
  }

  // (3) resample n_alpha pairs from the joint set.
  const std::vector<Index> picks = resample_indices(joint_w, n_alpha, rng);

  // (4) h2 over each parent's surviving beta-particles.
  std::vector<std::vector<double>> survivors(static_cast<std::size_t>(n_alpha));
  for (const Index p : picks) {
    const auto& beta = joint[static_cast<std::size_t>(p)];
    survivors[static_cast<std::size_t>(beta.parent)].push_back(beta.r_j);
  }

  // (5) collapse to uniformly weighted alpha-particles.
  MatrixXd f(ensemble.f.rows(), n_alpha);
  MatrixXd r(ensemble.r.rows(), n_alpha);
  Eigen::MatrixXi phi(ensemble.phi.rows(), per_particle ? n_alpha : 0);
  MatrixXd gamma(ensemble.gamma.rows(), per_particle ? n_alpha : 0);
  for (Index k = 0; k < n_alpha; ++k) {
    const Index parent = joint[static_cast<std::size_t>(picks[static_cast<std::size_t>(k)])].parent;
    f.col(k) = ensemble.f.col(parent);
    r.col(k) = ensemble.r.col(parent);
    r(j, k) = update_lengthscale_h2(survivors[static_cast<std::size_t>(parent)]);
    if (per_particle) {
      phi.col(k) = ensemble.phi.col(parent);
      gamma.col(k) = ensemble.gamma.col(parent);
    }
  }
  ensemble.f = std::move(f);
  ensemble.r = std::move(r);
  if (per_particle) {
    ensemble.phi = std::move(phi);
    ensemble.gamma = std::move(gamma);
  }
  ensemble.weights = VectorXd::Constant(n_alpha, 1.0 / static_cast<double>(n_alpha));
}

PosteriorSummary posterior_summary(const ParticleEnsemble& ensemble) {
  if (ensemble.size() == 0) {
    throw InvalidArgument("empty ensemble");
  }
  const VectorXd w = ensemble.weights / ensemble.weights.sum();
  PosteriorSummary s;
  s.f_mean = ensemble.f * w;
  s.r_mean = ensemble.r * w;
  const MatrixXd centred = ensemble.f.colwise() - s.f_mean;
  s.f_var = centred.array().square().matrix() * w;
  // A site on which every particle agrees has zero spread; the weighted mean
  // above is only exact to rounding, so the controller would otherwise rank
  // such sites by floating-point noise.
  for (Index site = 0; site < ensemble.sites(); ++site) {
    const auto row = ensemble.f.row(site);
    if (row.minCoeff() == row.maxCoeff()) {
      s.f_mean[site] = row[0];
      s.f_var[site] = 0.0;
    }
  }
  return s;
}

}  // namespace nmqa
