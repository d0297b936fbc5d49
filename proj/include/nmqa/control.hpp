#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nmqa/common.hpp"
#include "nmqa/filter.hpp"
#include "nmqa/lattice.hpp"
#include "nmqa/measurement.hpp"

namespace nmqa {

enum class Strategy { nmqa, naive };

std::string_view to_string(Strategy strategy);

/// Site with the largest posterior phase variance; exact ties are broken
/// uniformly at random.
Index choose_next_adaptive(const Eigen::Ref<const VectorXd>& variance, Rng& rng);

/// Brute-force schedule for iteration t in [1, T]: a round-robin sweep when T
/// is a multiple of d, otherwise a uniformly random site.
Index choose_next_naive(Index t, Index T, Index d, Rng& rng);

struct RunRecord {
  Strategy strategy = Strategy::nmqa;
  std::vector<Index> trajectory;
  std::vector<int> outcomes;
  std::size_t messages = 0;
  VectorXd final_map;
  std::vector<VectorXd> per_iteration_maps;
  std::uint64_t seed = 0;       // master seed
  std::uint64_t run_index = 0;  // stream = make_stream(seed, run_index)
  bool valid = true;
  std::string diagnostic;
};

enum class Scheduler { adaptive, naive };

struct RunOptions {
  Scheduler scheduler = Scheduler::adaptive;
  bool keep_iterations = false;
  double unmeasured_default = kPi / 2.0;  // naive estimate at unvisited sites
};

/// Full NMQA loop: controller pick, physical shot, filter step, message
/// generation for the next iteration. The controller only sees posterior
/// summaries; ground truth stays inside `source`.
RunRecord run_nmqa(const FilterConfig& config, const QubitArray& array,
                   const MeasurementSource& source, Index T, Rng& rng,
                   const RunOptions& options = {});

/// Brute-force baseline: per-site arccos(2 * kappa - 1) from that site's own shots.
RunRecord run_naive(const QubitArray& array, const MeasurementSource& source, Index T, Rng& rng,
                    const RunOptions& options = {});

}  // namespace nmqa
