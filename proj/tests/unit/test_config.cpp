#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "nmqa/config.hpp"

namespace nmqa {
namespace {

using nlohmann::json;

TEST(Config, DefaultsMirrorBenchmark) {
  const RunConfig c = resolve_config(default_config_tree());
  EXPECT_EQ(c.rows * c.cols, 25);
  EXPECT_DOUBLE_EQ(c.filter.noise.sigma_v, 1e-4);
  EXPECT_DOUBLE_EQ(c.filter.noise.sigma_f, 1e-6);
  EXPECT_DOUBLE_EQ(c.low, 0.25 * kPi);
  EXPECT_DOUBLE_EQ(c.high, 0.75 * kPi);
  EXPECT_EQ(c.trials, 50);
  EXPECT_DOUBLE_EQ(c.filter.k0, 1.0);
  EXPECT_DOUBLE_EQ(c.filter.r_min, c.spacing);
  EXPECT_DOUBLE_EQ(c.filter.r_max, std::sqrt(32.0));
  EXPECT_EQ(c.T_list, (std::vector<Index>{5, 10, 15, 20, 25, 50, 75, 100, 125, 250}));
  EXPECT_EQ(c.replay_T_list,
            (std::vector<Index>{1, 2, 3, 4, 6, 12, 18, 24, 30, 60, 72, 96, 120, 246}));
  EXPECT_EQ(c.filter.tally_scope, TallyScope::global);
  // snapshot carries the resolved values
  EXPECT_DOUBLE_EQ(c.snapshot["filter"]["r_max"].get<double>(), std::sqrt(32.0));
}

TEST(Config, SingleSiteGridKeepsValidLengthPrior) {
  json t = default_config_tree();
  merge_config(t, {{"grid", {{"rows", 1}, {"cols", 1}}}, {"field", {{"row_end", 1}, {"col_end", 1}}}});
  const RunConfig c = resolve_config(t);
  EXPECT_DOUBLE_EQ(c.filter.r_max, c.filter.r_min);
}

TEST(Config, OverridesWin) {
  json t = default_config_tree();
  apply_override(t, "filter.lambda1=0.3");
  apply_override(t, "field.kind=step1d");
  apply_override(t, "T=[1,2]");
  apply_override(t, "field.high=0.5pi");
  const RunConfig c = resolve_config(t);
  EXPECT_DOUBLE_EQ(c.filter.lambda1, 0.3);
  EXPECT_EQ(c.field_kind, FieldKind::step1d);
  EXPECT_EQ(c.T_list, (std::vector<Index>{1, 2}));
  EXPECT_DOUBLE_EQ(c.high, 0.5 * kPi);
}

TEST(Config, PiExpressions) {
  json t = default_config_tree();
  apply_override(t, "field.low=pi/4");
  apply_override(t, "field.high=pi");
  const RunConfig c = resolve_config(t);
  EXPECT_DOUBLE_EQ(c.low, kPi / 4);
  EXPECT_DOUBLE_EQ(c.high, kPi);
}

TEST(Config, UnknownKeysRejected) {
  json t = default_config_tree();
  EXPECT_THROW(apply_override(t, "filter.lamda1=0.3"), ConfigError);
  EXPECT_THROW(merge_config(t, {{"nosuch", 1}}), ConfigError);
  EXPECT_THROW(apply_override(t, "no-equals-sign"), ConfigError);
}

void expect_rejected(const std::string& assignment, const std::string& key) {
  json t = default_config_tree();
  apply_override(t, assignment);
  try {
    resolve_config(t);
    ADD_FAILURE() << assignment << " was accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
  }
}

TEST(Config, FieldLevelErrors) {
  expect_rejected("filter.lambda1=1.5", "filter.lambda1");
  expect_rejected("filter.k0=0.5", "filter.k0");
  expect_rejected("filter.r_max=0.5", "filter.r_max");
  expect_rejected("noise.sigma_v=0", "noise.sigma_v");
  expect_rejected("noise.sigma_f=-1", "noise.sigma_f");
  expect_rejected("T=[5,0]", "T");
  expect_rejected("trials=0", "trials");
  expect_rejected("field.high=4", "field.high");
  expect_rejected("field.row_end=9", "field.row_end");
  expect_rejected("field.kind=blob", "field.kind");
  expect_rejected("filter.tally_scope=local", "filter.tally_scope");
  expect_rejected("filter.n_alpha=\"many\"", "filter.n_alpha");
  expect_rejected("seed=-3", "seed");
}

TEST(Config, LoadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "nmqa_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"grid": {"rows": 1, "cols": 6}, "field": {"kind": "step1d"}, "trials": 7})";
  }
  json t = default_config_tree();
  merge_config(t, load_config_file(path));
  const RunConfig c = resolve_config(t);
  EXPECT_EQ(c.cols, 6);
  EXPECT_EQ(c.trials, 7);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config_file(path), IoError);
}

TEST(Config, MalformedFile) {
  const auto path = std::filesystem::temp_directory_path() / "nmqa_bad_config.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_config_file(path), ConfigError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace nmqa
