#include "nmqa/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace nmqa {

void NoiseParams::validate() const {
  if (!(sigma_v > 0.0) || !(sigma_v < 1.0)) {
    throw InvalidArgument("sigma_v must lie in (0, 1)");
  }
  if (!(sigma_f > 0.0) || !std::isfinite(sigma_f)) {
    throw InvalidArgument("sigma_f must be positive");
  }
  if (b != 0.5) {
    throw InvalidArgument("truncation half-width b is fixed at 1/2");
  }
  if (!std::isfinite(mu_f)) {
    throw InvalidArgument("mu_f must be finite");
  }
}

double sample_truncated_noise(double sigma_v, Rng& rng) {
  if (!(sigma_v > 0.0)) {
    throw InvalidArgument("sigma_v must be positive");
  }
  constexpr double kHalfWidth = 0.5;
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma_v));
  // Rejection from the untruncated density; acceptance is ~1 when sigma_v << 1/4.
  for (;;) {
    const double v = normal(rng);
    if (v >= -kHalfWidth && v <= kHalfWidth) {
      return v;
    }
  }
}

int simulate_measurement(double f, double sigma_v, Rng& rng) {
  if (!(f >= 0.0 && f <= kPi)) {
    throw InvalidArgument("phase outside [0, pi]");
  }
  const double v = sample_truncated_noise(sigma_v, rng);
  const double p = std::clamp(0.5 * std::cos(f) + v + 0.5, 0.0, 1.0);
  return bernoulli(rng, p);
}

DataBank::DataBank(Shots shots) : shots_(std::move(shots)) {
  if (shots_.rows() == 0 || shots_.cols() == 0) {
    throw FormatError("data bank is empty");
  }
}

double DataBank::mean(Index site) const {
  return shots_.row(site).cast<double>().mean();
}

DataBank parse_databank(std::istream& in, const std::string& name) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    std::vector<std::uint8_t> row;
    Index column = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      std::string token = line.substr(pos, comma - pos);
      token.erase(0, token.find_first_not_of(" \t"));
      token.erase(token.find_last_not_of(" \t") + 1);
      ++column;
      if (token != "0" && token != "1") {
        throw FormatError(name + ": row " + std::to_string(rows.size() + 1) + ", column " +
                          std::to_string(column) + ": expected 0 or 1, got '" + token + "'");
      }
      row.push_back(token == "1" ? 1 : 0);
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError(name + ": row " + std::to_string(rows.size() + 1) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw FormatError(name + ": data bank is empty");
  }
  DataBank::Shots shots(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < shots.rows(); ++r) {
    for (Index c = 0; c < shots.cols(); ++c) {
      shots(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return DataBank(std::move(shots));
}

DataBank ingest_databank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open data bank " + path.string());
  }
  return parse_databank(in, path.string());
}

void write_databank(std::ostream& out, const DataBank& bank) {
  const auto& shots = bank.shots();
  std::string line;
  for (Index r = 0; r < shots.rows(); ++r) {
    line.clear();
    for (Index c = 0; c < shots.cols(); ++c) {
      if (c > 0) {
        line += ',';
      }
      line += shots(r, c) ? '1' : '0';
    }
    out << line << '\n';
  }
}

DataBank synthesize_databank(const TrueField& truth, Index repetitions, double sigma_v, Rng& rng) {
  if (repetitions < 1) {
    throw InvalidArgument("repetitions must be positive");
  }
  DataBank::Shots shots(truth.size(), repetitions);
  for (Index s = 0; s < truth.size(); ++s) {
    for (Index n = 0; n < repetitions; ++n) {
      shots(s, n) = static_cast<std::uint8_t>(simulate_measurement(truth.values[s], sigma_v, rng));
    }
  }
  return DataBank(std::move(shots));
}

int replay_measurement(const DataBank& bank, Index site, Rng& rng) {
  if (site < 0 || site >= bank.sites()) {
    throw InvalidArgument("site " + std::to_string(site) + " not in data bank");
  }
  return bank.shots()(site, uniform_index(rng, bank.repetitions()));
}

TrueField empirical_truth(const DataBank& bank) {
  TrueField field;
  field.kind = FieldKind::external;
  field.values.resize(bank.sites());
  for (Index s = 0; s < bank.sites(); ++s) {
    const double p = std::clamp(bank.mean(s), 0.0, 1.0);
    field.values[s] = std::acos(std::clamp(2.0 * p - 1.0, -1.0, 1.0));
  }
  return field;
}

Index MeasurementSource::sites() const {
  return std::visit(
      [](const auto& src) -> Index {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, SimulatedSource>) {
          return src.truth->size();
        } else {
          return src.bank->sites();
        }
      },
      impl_);
}

int MeasurementSource::draw(Index site, Rng& rng) const {
  return std::visit(
      [&](const auto& src) -> int {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, SimulatedSource>) {
          return simulate_measurement(src.truth->values[site], src.sigma_v, rng);
        } else {
          return replay_measurement(*src.bank, site, rng);
        }
      },
      impl_);
}

}  // namespace nmqa
