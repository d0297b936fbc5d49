#include "nmqa/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nmqa/metrics.hpp"
#include "nmqa/sharing.hpp"
#include "nmqa/tally.hpp"

namespace nmqa {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Stream indices reserved next to the per-trial streams 0, 1, 2, ...
constexpr std::uint64_t kPairStream = ~std::uint64_t{0};
constexpr std::uint64_t kBankStream = ~std::uint64_t{0} - 1;

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
}

std::string csv_preamble(const RunConfig& cfg) {
  return "# master_seed=" + std::to_string(cfg.seed) + "\n# config=" + cfg.snapshot.dump() + "\n";
}

json run_to_json(const RunRecord& run, Index T, double score) {
  std::vector<Index> sites;
  sites.reserve(run.trajectory.size());
  for (const Index s : run.trajectory) {
    sites.push_back(s + 1);  // reports use 1-based labels
  }
  std::vector<double> map(run.final_map.data(), run.final_map.data() + run.final_map.size());
  return {{"strategy", to_string(run.strategy)},
          {"T", T},
          {"run_index", run.run_index},
          {"master_seed", run.seed},
          {"valid", run.valid},
          {"diagnostic", run.diagnostic},
          {"trajectory", sites},
          {"outcomes", run.outcomes},
          {"messages", run.messages},
          {"final_map", map},
          {"ssim", score}};
}

json entry_to_json(const ScoreEntry& e) {
  return {{"strategy", to_string(e.strategy)},
          {"T", e.T},
          {"avg_ssim", e.avg_ssim},
          {"std", e.std},
          {"standard_error", e.standard_error()},
          {"trials", e.trials},
          {"aborted", e.aborted},
          {"negative_similarity", e.negative_similarity}};
}

}  // namespace

QubitArray array_from_config(const RunConfig& cfg) {
  return build_grid(cfg.rows, cfg.cols, cfg.spacing);
}

TrueField field_from_config(const RunConfig& cfg, const QubitArray& array) {
  FieldParams params = cfg.field_params;
  if (cfg.field_kind == FieldKind::external) {
    TrueField loaded = load_field_csv(cfg.field_path);
    if (loaded.size() != array.size()) {
      throw ConfigError("field.path holds " + std::to_string(loaded.size()) +
                        " values but the grid has " + std::to_string(array.size()) + " sites");
    }
    params.values = loaded.values;
  }
  try {
    return make_field(array, cfg.field_kind, cfg.low, cfg.high, params);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }
}

std::vector<CurvePoint> curve_of(const std::vector<ScoreEntry>& entries, Strategy strategy) {
  std::vector<CurvePoint> curve;
  for (const auto& e : entries) {
    if (e.strategy == strategy) {
      curve.push_back({static_cast<double>(e.T), e.avg_ssim});
    }
  }
  std::sort(curve.begin(), curve.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.T < b.T; });
  return curve;
}

CommandResult run_benchmark(const RunConfig& cfg, const QubitArray& array,
                            const MeasurementSource& source, const VectorXd& truth,
                            const std::vector<Index>& budgets, const std::string& mode,
                            std::ostream& log) {
  const fs::path out_dir = cfg.out;
  CommandResult result;
  for (const Index T : budgets) {
    for (const Strategy strategy : {Strategy::nmqa, Strategy::naive}) {
      TrialPlan plan;
      plan.T = T;
      plan.trials = cfg.trials;
      plan.master_seed = cfg.seed;
      plan.threads = cfg.threads;
      std::vector<RunRecord> runs;
      ScoreEntry entry = evaluate(strategy, cfg.filter, array, source, truth, plan, &runs);
      result.aborted += entry.aborted;

      json doc = {{"master_seed", cfg.seed}, {"config", cfg.snapshot}, {"mode", mode}};
      doc["runs"] = json::array();
      for (std::size_t i = 0; i < runs.size(); ++i) {
        doc["runs"].push_back(run_to_json(runs[i], T, entry.scores[i]));
      }
      write_file(out_dir / "runs" /
                     (std::string(to_string(strategy)) + "_T" + std::to_string(T) + ".json"),
                 doc.dump(1) + "\n");
      log << mode << ": " << to_string(strategy) << " T=" << T << " avg_ssim=" << fmt(entry.avg_ssim)
          << " se=" << fmt(entry.standard_error())
          << (entry.aborted > 0 ? " aborted=" + std::to_string(entry.aborted) : "") << "\n";
      result.scoreboard.push_back(std::move(entry));
    }
  }

  std::ostringstream board;
  board << csv_preamble(cfg) << "strategy,T,avg_ssim,std,trials\n";
  for (const auto& e : result.scoreboard) {
    board << to_string(e.strategy) << ',' << e.T << ',' << fmt(e.avg_ssim) << ',' << fmt(e.std)
          << ',' << e.trials << '\n';
  }
  write_file(out_dir / "scoreboard.csv", board.str());

  const auto naive = curve_of(result.scoreboard, Strategy::naive);
  const auto adaptive = curve_of(result.scoreboard, Strategy::nmqa);
  if (naive.size() >= 2 && adaptive.size() >= 2) {
    result.ratios = ratio_curve(naive, adaptive, cfg.ratio_lo, cfg.ratio_hi, cfg.ratio_points);
  }
  std::ostringstream ratio;
  ratio << csv_preamble(cfg) << "target_avg_ssim,ratio\n";
  for (const auto& r : result.ratios) {
    ratio << fmt(r.target) << ',' << fmt(r.ratio) << '\n';
  }
  write_file(out_dir / "ratio.csv", ratio.str());

  json summary = {{"master_seed", cfg.seed}, {"config", cfg.snapshot}, {"mode", mode}};
  summary["entries"] = json::array();
  for (const auto& e : result.scoreboard) {
    summary["entries"].push_back(entry_to_json(e));
  }
  summary["aborted_runs"] = result.aborted;
  summary["peak_ratio"] = nullptr;
  if (!result.ratios.empty()) {
    const auto peak = std::max_element(
        result.ratios.begin(), result.ratios.end(),
        [](const RatioPoint& a, const RatioPoint& b) { return a.ratio < b.ratio; });
    summary["peak_ratio"] = {{"target_avg_ssim", peak->target}, {"ratio", peak->ratio}};
  }
  write_file(out_dir / "scoreboard.json", summary.dump(1) + "\n");
  return result;
}

CommandResult cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const QubitArray array = array_from_config(cfg);
  const TrueField truth = field_from_config(cfg, array);
  const MeasurementSource source(truth, cfg.filter.noise.sigma_v);
  return run_benchmark(cfg, array, source, truth.values, cfg.T_list, "simulate", log);
}

namespace {

DataBank load_bank_for(const RunConfig& cfg, const QubitArray& array) {
  if (cfg.databank.empty()) {
    throw ConfigError("config key 'databank' is required for replay");
  }
  DataBank bank = ingest_databank(cfg.databank);
  if (bank.sites() != array.size()) {
    throw ConfigError("data bank has " + std::to_string(bank.sites()) + " rows but the grid has " +
                      std::to_string(array.size()) + " sites (set grid.rows/grid.cols)");
  }
  return bank;
}

}  // namespace

CommandResult cmd_replay(const RunConfig& cfg, std::ostream& log) {
  const QubitArray array = array_from_config(cfg);
  const DataBank bank = load_bank_for(cfg, array);
  const TrueField truth = empirical_truth(bank);
  const MeasurementSource source(bank);
  return run_benchmark(cfg, array, source, truth.values, cfg.replay_T_list, "replay", log);
}

TuningResult cmd_tune(const RunConfig& cfg, std::ostream& log) {
  const QubitArray array = array_from_config(cfg);
  const TrueField truth = field_from_config(cfg, array);
  const MeasurementSource source(truth, cfg.filter.noise.sigma_v);
  Rng pair_rng = make_stream(cfg.seed, kPairStream);
  const std::vector<LambdaPair> pairs = sample_pairs(cfg.tune_pairs, pair_rng);

  TrialPlan plan;
  plan.T = cfg.tune_T;
  plan.trials = cfg.trials;
  plan.master_seed = cfg.seed;
  plan.threads = cfg.threads;
  TuningResult result = tune(cfg.filter, array, source, truth.values, pairs, plan);

  const fs::path out_dir = cfg.out;
  std::ostringstream csv;
  csv << csv_preamble(cfg) << "lambda1,lambda2,avg_ssim,improved_flag\n";
  for (const auto& c : result.candidates) {
    csv << fmt(c.pair.lambda1) << ',' << fmt(c.pair.lambda2) << ',' << fmt(c.avg_ssim) << ','
        << (c.improved ? 1 : 0) << '\n';
  }
  write_file(out_dir / "tune.csv", csv.str());

  auto candidate_json = [](const Candidate& c) {
    return json{{"lambda1", c.pair.lambda1}, {"lambda2", c.pair.lambda2},
                {"avg_ssim", c.avg_ssim},    {"std", c.std},
                {"aborted", c.aborted},      {"improved", c.improved}};
  };
  json summary = {{"master_seed", cfg.seed},
                  {"config", cfg.snapshot},
                  {"T", cfg.tune_T},
                  {"pairs", cfg.tune_pairs},
                  {"margin", kImprovementMargin},
                  {"best", candidate_json(result.best)},
                  {"baseline", candidate_json(result.baseline)},
                  {"improved_count", result.improved.size()}};
  write_file(out_dir / "tune_summary.json", summary.dump(1) + "\n");
  log << "tune: baseline avg_ssim=" << fmt(result.baseline.avg_ssim) << " best=("
      << fmt(result.best.pair.lambda1) << ", " << fmt(result.best.pair.lambda2)
      << ") avg_ssim=" << fmt(result.best.avg_ssim) << " improved=" << result.improved.size()
      << "/" << result.candidates.size() << "\n";
  return result;
}

void cmd_synth_bank(const RunConfig& cfg, std::ostream& log) {
  if (cfg.databank.empty()) {
    throw ConfigError("config key 'databank' names the bank to write");
  }
  const QubitArray array = array_from_config(cfg);
  const TrueField truth = field_from_config(cfg, array);
  Rng rng = make_stream(cfg.seed, kBankStream);
  const DataBank bank = synthesize_databank(truth, cfg.bank_repetitions, cfg.filter.noise.sigma_v, rng);
  std::ostringstream text;
  write_databank(text, bank);
  write_file(cfg.databank, text.str());
  // The bank format has no header, so provenance goes to a sidecar.
  json meta = {{"master_seed", cfg.seed},
               {"config", cfg.snapshot},
               {"sites", bank.sites()},
               {"repetitions", bank.repetitions()}};
  write_file(cfg.databank + ".json", meta.dump(1) + "\n");
  log << "synth-bank: wrote " << bank.sites() << " x " << bank.repetitions() << " shots to "
      << cfg.databank << "\n";
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

std::vector<CheckResult> run_validation(std::uint64_t seed, const ValidationFaults& faults) {
  std::vector<CheckResult> checks;
  Rng rng = make_stream(seed, 0);

  {
    double worst = 0.0;
    for (const double sigma_v : {1e-4, 1e-6}) {
      const double oracle = rho0(sigma_v);
      const double used = oracle * faults.rho0_scale;
      for (int i = 0; i < 100000; ++i) {
        const double f = uniform(rng, 0.0, kPi);
        worst = std::max(worst, std::abs(g1_weight(f, 0, used) + g1_weight(f, 1, used) - oracle));
      }
    }
    checks.push_back({"g1 normalisation", worst <= 1e-12, "max error " + fmt(worst)});
  }
  {
    const double err = std::abs(rho0(1e-4) - 0.9920211543919713);
    checks.push_back({"rho0 reference value", err <= 1e-10, "error " + fmt(err)});
  }
  {
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double f = kPi * k / 1000.0;
      SiteTally t;
      t.tau = 1;
      t.kappa = 0.5 * std::cos(f) + 0.5;
      worst = std::max(worst, std::abs(update_map_h1(t, 0.0) - f));
    }
    checks.push_back({"h1 inversion", worst <= 1e-12, "max error " + fmt(worst)});
  }
  {
    // 10 items, uniform weights, 10^4 repetitions of a size-10 draw.
    constexpr Index n = 10;
    constexpr double kChi2Crit9 = 27.877164871256568;  // 0.999 quantile, 9 dof
    const VectorXd w = VectorXd::Constant(n, 1.0 / n);
    VectorXd counts = VectorXd::Zero(n);
    for (int rep = 0; rep < 10000; ++rep) {
      for (const Index i : resample_indices(w, n, rng)) {
        counts[i] += 1.0;
      }
    }
    const double expected = 10000.0;
    const double chi2 = (counts.array() - expected).square().sum() / expected;
    checks.push_back({"resampling chi-square", chi2 < kChi2Crit9, "chi2 " + fmt(chi2)});
  }
  {
    bool ok = true;
    std::vector<Index> small;
    std::vector<Index> large;
    for (int rep = 0; rep < 200 && ok; ++rep) {
      const QubitArray array(1 + uniform_index(rng, 6), 1 + uniform_index(rng, 6),
                             uniform(rng, 0.5, 2.0));
      const Index j = uniform_index(rng, array.size());
      const double r1 = uniform(rng, 0.1, 5.0);
      const double r2 = r1 + uniform(rng, 0.0, 3.0);
      small.clear();
      large.clear();
      neighborhood_members(array, j, r1, 1.0, small);
      neighborhood_members(array, j, r2, 1.0, large);
      ok = std::includes(large.begin(), large.end(), small.begin(), small.end());
    }
    checks.push_back({"neighbourhood monotonicity", ok, ok ? "200 grids" : "violation found"});
  }
  {
    VectorXd a = VectorXd::Constant(25, 0.25 * kPi);
    VectorXd b = VectorXd::Constant(25, 0.75 * kPi);
    const double err = std::abs(ssim(a, b) - 0.39935259395982963);
    VectorXd x(25);
    for (Index i = 0; i < x.size(); ++i) {
      x[i] = uniform(rng, 0.0, kPi);
    }
    const double self = ssim(x, x);
    checks.push_back({"ssim oracle", err <= 1e-12 && self <= 1e-12,
                      "error " + fmt(err) + ", self " + fmt(self)});
  }
  return checks;
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<Index> trials;
  std::optional<Index> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--trials", f.trials, "trials per configuration");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--set", f.overrides, "override a config key, e.g. --set filter.lambda1=0.5")
      ->allow_extra_args(false);
}

RunConfig build_config(const CommonFlags& f, const std::vector<std::string>& extra) {
  json tree = default_config_tree();
  if (!f.config_path.empty()) {
    merge_config(tree, load_config_file(f.config_path));
  }
  for (const auto& o : f.overrides) {
    apply_override(tree, o);
  }
  for (const auto& o : extra) {
    apply_override(tree, o);
  }
  if (f.seed) {
    tree["seed"] = *f.seed;
  }
  if (f.out) {
    tree["out"] = *f.out;
  }
  if (f.trials) {
    tree["trials"] = *f.trials;
  }
  if (f.threads) {
    tree["threads"] = *f.threads;
  }
  return resolve_config(tree);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive noise mapping on qubit arrays with shared information"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  CommonFlags rep_flags;
  CommonFlags tune_flags;
  CommonFlags bank_flags;
  auto* sim = app.add_subcommand("simulate", "benchmark both strategies on a synthetic field");
  add_common(sim, sim_flags);
  auto* rep = app.add_subcommand("replay", "benchmark both strategies on a recorded data bank");
  add_common(rep, rep_flags);
  std::string rep_bank;
  rep->add_option("--databank", rep_bank, "data bank CSV");
  auto* tun = app.add_subcommand("tune", "random search over (lambda1, lambda2)");
  add_common(tun, tune_flags);
  std::optional<Index> n_pairs;
  tun->add_option("--pairs", n_pairs, "number of random pairs");
  auto* syn = app.add_subcommand("synth-bank", "write a synthetic data bank from the field");
  add_common(syn, bank_flags);
  std::string syn_bank;
  std::optional<Index> repetitions;
  syn->add_option("--databank", syn_bank, "output path");
  syn->add_option("--repetitions", repetitions, "shots per site");
  auto* val = app.add_subcommand("validate", "run the fast invariant suite");
  std::uint64_t val_seed = 1;
  double corrupt_rho0 = 1.0;
  val->add_option("--seed", val_seed, "seed for the randomised checks");
  val->add_option("--corrupt-rho0", corrupt_rho0, "scale the rho0 fed to g1 (negative control)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (val->parsed()) {
      bool ok = true;
      for (const auto& c : run_validation(val_seed, {corrupt_rho0})) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        ok = ok && c.passed;
      }
      return ok ? kExitOk : kExitCheckFailed;
    }
    if (sim->parsed()) {
      const auto r = cmd_simulate(build_config(sim_flags, {}), out);
      return r.aborted > 0 ? kExitNumerical : kExitOk;
    }
    if (rep->parsed()) {
      std::vector<std::string> extra;
      if (!rep_bank.empty()) {
        extra.push_back("databank=\"" + rep_bank + "\"");
      }
      const auto r = cmd_replay(build_config(rep_flags, extra), out);
      return r.aborted > 0 ? kExitNumerical : kExitOk;
    }
    if (tun->parsed()) {
      std::vector<std::string> extra;
      if (n_pairs) {
        extra.push_back("tune.pairs=" + std::to_string(*n_pairs));
      }
      const auto r = cmd_tune(build_config(tune_flags, extra), out);
      bool aborted = r.baseline.aborted > 0;
      for (const auto& c : r.candidates) {
        aborted = aborted || c.aborted > 0;
      }
      return aborted ? kExitNumerical : kExitOk;
    }
    if (syn->parsed()) {
      std::vector<std::string> extra;
      if (!syn_bank.empty()) {
        extra.push_back("databank=\"" + syn_bank + "\"");
      }
      if (repetitions) {
        extra.push_back("bank.repetitions=" + std::to_string(*repetitions));
      }
      cmd_synth_bank(build_config(bank_flags, extra), out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DegenerateWeights& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace nmqa
