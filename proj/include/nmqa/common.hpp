#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nmqa {

using Index = Eigen::Index;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Eigen::VectorXd;
using MatrixXd = Eigen::MatrixXd;

/// Random stream used by every stochastic operation. Streams are never shared
/// between concurrent runs.
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file (data bank, field CSV, config).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every particle weight vanished; the run cannot continue.
class DegenerateWeights : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// h1 was asked for a phase at a site with no physical or shared data.
class NoData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of a curve inversion that falls outside the attained range.
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Derives the stream for run `run_index` from the experiment's master seed.
/// Both 64-bit words are fed through std::seed_seq so adjacent master seeds
/// do not produce overlapping run streams.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t run_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(run_index),
                    static_cast<std::uint32_t>(run_index >> 32)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
  if (lo == hi) {
    return lo;
  }
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_index(Rng& rng, Index n) {
  return std::uniform_int_distribution<Index>(0, n - 1)(rng);
}

inline int bernoulli(Rng& rng, double p) {
  return uniform01(rng) < p ? 1 : 0;
}

}  // namespace nmqa
