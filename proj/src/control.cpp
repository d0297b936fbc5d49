#include "nmqa/control.hpp"

#include <algorithm>
#include <cmath>

#include "nmqa/sharing.hpp"
#include "nmqa/tally.hpp"

namespace nmqa {

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::nmqa ? "nmqa" : "naive";
}

Index choose_next_adaptive(const Eigen::Ref<const VectorXd>& variance, Rng& rng) {
  if (variance.size() == 0) {
    throw InvalidArgument("empty variance vector");
  }
  const double top = variance.maxCoeff();
  std::vector<Index> ties;
  for (Index s = 0; s < variance.size(); ++s) {
    if (variance[s] == top) {
      ties.push_back(s);
    }
  }
  if (ties.size() == 1) {
    return ties.front();
  }
  return ties[static_cast<std::size_t>(uniform_index(rng, static_cast<Index>(ties.size())))];
}

Index choose_next_naive(Index t, Index T, Index d, Rng& rng) {
  if (t < 1 || t > T || d < 1) {
    throw InvalidArgument("naive schedule needs 1 <= t <= T and d >= 1");
  }
  if (T % d == 0) {
    return (t - 1) % d;
  }
  return uniform_index(rng, d);
}

RunRecord run_nmqa(const FilterConfig& config, const QubitArray& array,
                   const MeasurementSource& source, Index T, Rng& rng,
                   const RunOptions& options) {
  if (T < 1) {
    throw InvalidArgument("T must be >= 1");
  }
  if (source.sites() != array.size()) {
    throw InvalidArgument("measurement source and array disagree on site count");
  }
  const Index d = array.size();
  RunRecord record;
  record.strategy = Strategy::nmqa;
  record.trajectory.reserve(static_cast<std::size_t>(T));
  record.outcomes.reserve(static_cast<std::size_t>(T));

  ParticleEnsemble ensemble = init_ensemble(config, array, rng);
  SharedStateTally tally(d);
  PosteriorSummary posterior = posterior_summary(ensemble);
  std::vector<MeasurementOutcome> pending;
  std::vector<std::vector<MeasurementOutcome>> pending_per_particle;
  const bool per_particle = config.tally_scope == TallyScope::particle;

  try {
    for (Index t = 1; t <= T; ++t) {
      Index site = 0;
      if (options.scheduler == Scheduler::naive) {
        site = choose_next_naive(t, T, d, rng);
      } else if (t == 1) {
        site = uniform_index(rng, d);
      } else {
        site = choose_next_adaptive(posterior.f_var, rng);
      }
      const int bit = source.draw(site, rng);
      record.trajectory.push_back(site);
      record.outcomes.push_back(bit);

      Observation z{{site, bit, Origin::physical}, std::move(pending),
                    std::move(pending_per_particle)};
      step(ensemble, tally, z, config, array, rng);
      posterior = posterior_summary(ensemble);

      if (per_particle) {
        pending_per_particle = generate_particle_messages(ensemble, site, array, tally, config, rng);
        std::size_t total = 0;
        for (const auto& m : pending_per_particle) {
          total += m.size();
        }
        record.messages += total / pending_per_particle.size();
      } else {
        pending = generate_messages(posterior.mean_state(), site, array, tally, config.lambda2,
                                    config.k0, rng);
        record.messages += pending.size();
      }
      if (options.keep_iterations) {
        record.per_iteration_maps.push_back(posterior.f_mean);
      }
    }
  } catch (const DegenerateWeights& e) {
    record.valid = false;
    record.diagnostic = e.what();
  }
  record.final_map = posterior.f_mean.cwiseMax(0.0).cwiseMin(kPi);
  return record;
}

RunRecord run_naive(const QubitArray& array, const MeasurementSource& source, Index T, Rng& rng,
                    const RunOptions& options) {
  if (T < 1) {
    throw InvalidArgument("T must be >= 1");
  }
  if (source.sites() != array.size()) {
    throw InvalidArgument("measurement source and array disagree on site count");
  }
  const Index d = array.size();
  RunRecord record;
  record.strategy = Strategy::naive;
  record.trajectory.reserve(static_cast<std::size_t>(T));
  record.outcomes.reserve(static_cast<std::size_t>(T));
  SharedStateTally tally(d);

  auto estimate = [&] {
    VectorXd map = VectorXd::Constant(d, options.unmeasured_default);
    for (Index s = 0; s < d; ++s) {
      if (tally.at(s).tau > 0) {
        map[s] = update_map_h1(tally.at(s), 0.0);
      }
    }
    return map;
  };

  for (Index t = 1; t <= T; ++t) {
    const Index site = choose_next_naive(t, T, d, rng);
    const int bit = source.draw(site, rng);
    record.trajectory.push_back(site);
    record.outcomes.push_back(bit);
    tally.record({site, bit, Origin::physical});
    if (options.keep_iterations) {
      record.per_iteration_maps.push_back(estimate());
    }
  }
  record.final_map = estimate();
  return record;
}

}  // namespace nmqa
