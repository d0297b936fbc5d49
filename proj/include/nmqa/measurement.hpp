#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>

#include "nmqa/common.hpp"
#include "nmqa/lattice.hpp"

namespace nmqa {

enum class Origin { physical, message };

/// A single binary outcome at one site: a physical shot or a shared message.
struct MeasurementOutcome {
  Index site = 0;
  int bit = 0;
  Origin origin = Origin::physical;
};

/// Measurement and map-approximation noise.
struct NoiseParams {
  double sigma_v = 1e-4;  // variance of quantized-sensor noise
  double b = 0.5;         // truncation half-width
  double mu_f = 0.0;      // mean of map-approximation error (rad)
  double sigma_f = 1e-6;  // variance of map-approximation error (rad^2)

  void validate() const;
};

/// Zero-mean Gaussian of variance `sigma_v`, truncated to [-1/2, 1/2].
double sample_truncated_noise(double sigma_v, Rng& rng);

/// One shot of the quantized-noise Ramsey model: Bernoulli(clamp(cos(f)/2 + v + 1/2)).
int simulate_measurement(double f, double sigma_v, Rng& rng);

/// d x N matrix of recorded single-shot outcomes, one row per site.
class DataBank {
 public:
  using Shots = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  DataBank() = default;
  explicit DataBank(Shots shots);

  Index sites() const { return shots_.rows(); }
  Index repetitions() const { return shots_.cols(); }
  const Shots& shots() const { return shots_; }

  /// Fraction of ones recorded at `site`.
  double mean(Index site) const;

 private:
  Shots shots_;
};

DataBank parse_databank(std::istream& in, const std::string& name = "<stream>");
DataBank ingest_databank(const std::filesystem::path& path);
void write_databank(std::ostream& out, const DataBank& bank);

/// Draws `repetitions` simulated shots per site of `truth`.
DataBank synthesize_databank(const TrueField& truth, Index repetitions, double sigma_v, Rng& rng);

/// Uniformly random column of `site`'s row, drawn with replacement.
int replay_measurement(const DataBank& bank, Index site, Rng& rng);

/// Per-site arccos(2 * mean - 1): the reference field for replayed banks.
TrueField empirical_truth(const DataBank& bank);

/// Where physical bits come from during a run.
struct SimulatedSource {
  const TrueField* truth = nullptr;
  double sigma_v = 1e-4;
};

struct ReplaySource {
  const DataBank* bank = nullptr;
};

class MeasurementSource {
 public:
  MeasurementSource(const TrueField& truth, double sigma_v) : impl_(SimulatedSource{&truth, sigma_v}) {}
  explicit MeasurementSource(const DataBank& bank) : impl_(ReplaySource{&bank}) {}

  Index sites() const;
  int draw(Index site, Rng& rng) const;

 private:
  std::variant<SimulatedSource, ReplaySource> impl_;
};

}  // namespace nmqa
