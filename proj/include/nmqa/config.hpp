#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nmqa/filter.hpp"
#include "nmqa/lattice.hpp"

namespace nmqa {

/// Bad or inconsistent configuration; message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Index rows = 5;
  Index cols = 5;
  double spacing = 1.0;

  FieldKind field_kind = FieldKind::square2d;
  double low = 0.25 * kPi;
  double high = 0.75 * kPi;
  FieldParams field_params;
  std::string field_path;  // external fields
  std::string databank;    // replay

  std::vector<Index> T_list;
  std::vector<Index> replay_T_list;
  Index trials = 50;
  FilterConfig filter;

  std::uint64_t seed = 1;
  std::string out = "out";
  Index threads = 1;

  Index tune_pairs = 50;
  Index tune_T = 20;

  double ratio_lo = 0.2;
  double ratio_hi = 0.5;
  Index ratio_points = 31;

  Index bank_repetitions = 25500;

  /// Fully resolved key tree (defaults, file, overrides, derived r_min/r_max).
  nlohmann::json snapshot;
};

/// Key tree holding every recognised key at its default value. r_min and
/// r_max default to null, meaning "grid spacing" and "grid diameter".
nlohmann::json default_config_tree();

/// Merges `patch` into `tree`. Keys absent from `tree` are rejected.
void merge_config(nlohmann::json& tree, const nlohmann::json& patch, const std::string& prefix = "");

/// Applies "dotted.key=value"; value is parsed as JSON, else taken as a string.
void apply_override(nlohmann::json& tree, const std::string& assignment);

nlohmann::json load_config_file(const std::filesystem::path& path);

/// Validates the tree and builds the typed config. Throws ConfigError.
RunConfig resolve_config(const nlohmann::json& tree);

}  // namespace nmqa
