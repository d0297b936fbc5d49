#include "nmqa/config.hpp"

#include <cmath>
#include <fstream>
#include <regex>

namespace nmqa {

using nlohmann::json;

json default_config_tree() {
  return {
      {"grid", {{"rows", 5}, {"cols", 5}, {"spacing", 1.0}}},
      {"field",
       {{"kind", "square2d"},
        {"low", "0.25pi"},
        {"high", "0.75pi"},
        {"row_begin", 1},
        {"row_end", 4},
        {"col_begin", 1},
        {"col_end", 4},
        {"split", 3},
        {"center_x", 2.0},
        {"center_y", 2.0},
        {"sigma", 1.0},
        {"path", ""}}},
      {"databank", ""},
      {"T", {5, 10, 15, 20, 25, 50, 75, 100, 125, 250}},
      {"replay_T", {1, 2, 3, 4, 6, 12, 18, 24, 30, 60, 72, 96, 120, 246}},
      {"trials", 50},
      {"seed", 1},
      {"out", "out"},
      {"threads", 1},
      {"filter",
       {{"n_alpha", 100},
        {"n_beta", 25},
        {"lambda1", 0.89},
        {"lambda2", 0.97},
        {"k0", 1.0},
        {"r_min", nullptr},
        {"r_max", nullptr},
        {"tally_scope", "global"}}},
      {"noise", {{"sigma_v", 1e-4}, {"mu_f", 0.0}, {"sigma_f", 1e-6}}},
      {"tune", {{"pairs", 50}, {"T", 20}}},
      {"ratio", {{"lo", 0.2}, {"hi", 0.5}, {"points", 31}}},
      {"bank", {{"repetitions", 25500}}},
  };
}

void merge_config(json& tree, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) {
    throw ConfigError("config" + (prefix.empty() ? std::string() : " key '" + prefix + "'") +
                      " must be an object");
  }
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!tree.contains(key)) {
      throw ConfigError("unknown config key '" + path + "'");
    }
    json& slot = tree[key];
    if (slot.is_object()) {
      merge_config(slot, value, path);
    } else {
      slot = value;
    }
  }
}

void apply_override(json& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    value = text;
  }
  // Rebuild the dotted key as a nested patch so merge_config does the checks.
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  for (std::size_t dot; (dot = rest.find('.')) != std::string::npos; rest = rest.substr(dot + 1)) {
    parts.push_back(rest.substr(0, dot));
  }
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    patch = json{{*it, patch}};
  }
  merge_config(tree, patch);
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path.string());
  }
  json tree = json::parse(in, nullptr, false, true);
  if (tree.is_discarded()) {
    throw ConfigError("config file " + path.string() + " is not valid JSON");
  }
  return tree;
}

namespace {

const json& at(const json& tree, const std::string& dotted) {
  const json* node = &tree;
  std::string rest = dotted;
  while (true) {
    const auto dot = rest.find('.');
    const std::string head = rest.substr(0, dot);
    if (!node->contains(head)) {
      throw ConfigError("missing config key '" + dotted + "'");
    }
    node = &(*node)[head];
    if (dot == std::string::npos) {
      return *node;
    }
    rest = rest.substr(dot + 1);
  }
}

double get_real(const json& tree, const std::string& key) {
  const json& v = at(tree, key);
  if (v.is_number()) {
    return v.get<double>();
  }
  // "0.25pi", "pi/2" style phases.
  if (v.is_string()) {
    static const std::regex pattern(R"(^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$)");
    std::smatch m;
    const std::string s = v.get<std::string>();
    if (std::regex_match(s, m, pattern)) {
      try {
        const double scale = m[1].str().empty() ? 1.0 : std::stod(m[1].str());
        const double denom = m[2].matched ? std::stod(m[2].str()) : 1.0;
        return scale * kPi / denom;
      } catch (const std::exception&) {
      }
    }
  }
  throw ConfigError("config key '" + key + "' must be a number");
}

Index get_int(const json& tree, const std::string& key) {
  const json& v = at(tree, key);
  if (v.is_number_integer()) {
    return v.get<Index>();
  }
  if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
    return static_cast<Index>(v.get<double>());
  }
  throw ConfigError("config key '" + key + "' must be an integer");
}

std::string get_string(const json& tree, const std::string& key) {
  const json& v = at(tree, key);
  if (!v.is_string()) {
    throw ConfigError("config key '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<Index> get_budgets(const json& tree, const std::string& key) {
  const json& v = at(tree, key);
  if (!v.is_array() || v.empty()) {
    throw ConfigError("config key '" + key + "' must be a nonempty list of integers");
  }
  std::vector<Index> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<Index>() < 1) {
      throw ConfigError("config key '" + key + "' entries must be integers >= 1");
    }
    out.push_back(e.get<Index>());
  }
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) {
    throw ConfigError("config key '" + key + "' " + what);
  }
}

}  // namespace

RunConfig resolve_config(const json& tree) {
  RunConfig c;
  c.rows = get_int(tree, "grid.rows");
  c.cols = get_int(tree, "grid.cols");
  c.spacing = get_real(tree, "grid.spacing");
  require(c.rows >= 1, "grid.rows", "must be >= 1");
  require(c.cols >= 1, "grid.cols", "must be >= 1");
  require(c.spacing > 0.0 && std::isfinite(c.spacing), "grid.spacing", "must be positive");

  try {
    c.field_kind = field_kind_from_string(get_string(tree, "field.kind"));
  } catch (const InvalidArgument& e) {
    throw ConfigError("config key 'field.kind': " + std::string(e.what()));
  }
  c.low = get_real(tree, "field.low");
  c.high = get_real(tree, "field.high");
  require(c.low >= 0.0 && c.low <= kPi, "field.low", "must lie in [0, pi]");
  require(c.high >= c.low && c.high <= kPi, "field.high", "must lie in [field.low, pi]");
  auto& p = c.field_params;
  p.row_begin = get_int(tree, "field.row_begin");
  p.row_end = get_int(tree, "field.row_end");
  p.col_begin = get_int(tree, "field.col_begin");
  p.col_end = get_int(tree, "field.col_end");
  p.split = get_int(tree, "field.split");
  p.center_x = get_real(tree, "field.center_x");
  p.center_y = get_real(tree, "field.center_y");
  p.sigma = get_real(tree, "field.sigma");
  c.field_path = get_string(tree, "field.path");
  if (c.field_kind == FieldKind::square2d) {
    require(p.row_begin >= 0 && p.row_begin <= p.row_end && p.row_end <= c.rows, "field.row_end",
            "must give 0 <= row_begin <= row_end <= grid.rows");
    require(p.col_begin >= 0 && p.col_begin <= p.col_end && p.col_end <= c.cols, "field.col_end",
            "must give 0 <= col_begin <= col_end <= grid.cols");
  }
  if (c.field_kind == FieldKind::step1d) {
    require(p.split >= 0 && p.split <= c.rows * c.cols, "field.split", "must lie in [0, d]");
  }
  if (c.field_kind == FieldKind::gaussian2d) {
    require(p.sigma > 0.0, "field.sigma", "must be positive");
  }
  if (c.field_kind == FieldKind::external) {
    require(!c.field_path.empty(), "field.path", "is required for external fields");
  }
  c.databank = get_string(tree, "databank");

  c.T_list = get_budgets(tree, "T");
  c.replay_T_list = get_budgets(tree, "replay_T");
  c.trials = get_int(tree, "trials");
  require(c.trials >= 1, "trials", "must be >= 1");
  const json& seed = at(tree, "seed");
  require(seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<std::int64_t>() >= 0),
          "seed", "must be a nonnegative integer");
  c.seed = seed.get<std::uint64_t>();
  c.out = get_string(tree, "out");
  require(!c.out.empty(), "out", "must not be empty");
  c.threads = get_int(tree, "threads");
  require(c.threads >= 1, "threads", "must be >= 1");

  auto& f = c.filter;
  f.n_alpha = get_int(tree, "filter.n_alpha");
  f.n_beta = get_int(tree, "filter.n_beta");
  f.lambda1 = get_real(tree, "filter.lambda1");
  f.lambda2 = get_real(tree, "filter.lambda2");
  f.k0 = get_real(tree, "filter.k0");
  try {
    f.tally_scope = tally_scope_from_string(get_string(tree, "filter.tally_scope"));
  } catch (const InvalidArgument& e) {
    throw ConfigError("config key 'filter.tally_scope': " + std::string(e.what()));
  }
  const double diameter = c.spacing * std::hypot(static_cast<double>(c.rows - 1),
                                                 static_cast<double>(c.cols - 1));
  f.r_min = at(tree, "filter.r_min").is_null() ? c.spacing : get_real(tree, "filter.r_min");
  f.r_max = at(tree, "filter.r_max").is_null() ? std::max(diameter, f.r_min)
                                               : get_real(tree, "filter.r_max");
  f.noise.sigma_v = get_real(tree, "noise.sigma_v");
  f.noise.mu_f = get_real(tree, "noise.mu_f");
  f.noise.sigma_f = get_real(tree, "noise.sigma_f");
  require(f.n_alpha >= 1, "filter.n_alpha", "must be >= 1");
  require(f.n_beta >= 1, "filter.n_beta", "must be >= 1");
  require(f.lambda1 >= 0.0 && f.lambda1 <= 1.0, "filter.lambda1", "must lie in [0, 1]");
  require(f.lambda2 >= 0.0 && f.lambda2 <= 1.0, "filter.lambda2", "must lie in [0, 1]");
  require(f.k0 >= 1.0, "filter.k0", "must be >= 1");
  require(f.r_min > 0.0, "filter.r_min", "must be positive");
  require(f.r_max >= f.r_min && std::isfinite(f.r_max), "filter.r_max", "must be >= r_min");
  require(f.noise.sigma_v > 0.0 && f.noise.sigma_v < 1.0, "noise.sigma_v", "must lie in (0, 1)");
  require(f.noise.sigma_f > 0.0 && std::isfinite(f.noise.sigma_f), "noise.sigma_f",
          "must be positive");
  require(std::isfinite(f.noise.mu_f), "noise.mu_f", "must be finite");

  c.tune_pairs = get_int(tree, "tune.pairs");
  c.tune_T = get_int(tree, "tune.T");
  require(c.tune_pairs >= 1, "tune.pairs", "must be >= 1");
  require(c.tune_T >= 1, "tune.T", "must be >= 1");
  c.ratio_lo = get_real(tree, "ratio.lo");
  c.ratio_hi = get_real(tree, "ratio.hi");
  c.ratio_points = get_int(tree, "ratio.points");
  require(c.ratio_lo <= c.ratio_hi, "ratio.hi", "must be >= ratio.lo");
  require(c.ratio_points >= 1, "ratio.points", "must be >= 1");
  c.bank_repetitions = get_int(tree, "bank.repetitions");
  require(c.bank_repetitions >= 1, "bank.repetitions", "must be >= 1");

  c.snapshot = tree;
  c.snapshot["filter"]["r_min"] = f.r_min;
  c.snapshot["filter"]["r_max"] = f.r_max;
  c.snapshot["field"]["low"] = c.low;
  c.snapshot["field"]["high"] = c.high;
  return c;
}

}  // namespace nmqa
