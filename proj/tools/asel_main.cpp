// Command-line surface: simulate / rewards / select / pipeline /
// bias-scaling / coverage / oracle. Every stochastic subcommand requires an
// explicit --seed; reports are written as JSON with a stable key schema.

#include "asel/pipeline.hpp"
#include "asel/reward_linear.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using asel::Dataset;
using asel::PipelineConfig;
using asel::Subset;
using asel::Vector;
using ordered_json = nlohmann::ordered_json;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

Subset parse_subset(const std::string& text) {
  if (text.empty()) return Subset::empty();
  return Subset(parse_int_list(text));
}

Vector parse_vector(const std::string& text) {
  const auto vals = parse_double_list(text);
  Vector v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    v(static_cast<int>(i)) = vals[i];
  return v;
}

std::string default_schema_path(const std::string& data_path) {
  const std::string suffix = ".csv";
  if (data_path.size() > suffix.size() &&
      data_path.compare(data_path.size() - suffix.size(), suffix.size(),
                        suffix) == 0)
    return data_path.substr(0, data_path.size() - suffix.size()) +
           ".schema.json";
  return data_path + ".schema.json";
}

struct DataSource {
  std::string data_path;
  std::string schema_path;
  std::string dgp_path;
  std::string preset;
  int j_count = 0;
  int n_rows = 0;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--data", data_path, "dataset CSV path");
    cmd->add_option("--schema", schema_path,
                    "schema sidecar path (defaults to <data>.schema.json)");
    cmd->add_option("--dgp", dgp_path, "generator spec JSON path");
    cmd->add_option("--preset", preset,
                    "generator preset: symmetric, planted-pair, "
                    "single-informative, biased-ai, heteroskedastic");
    cmd->add_option("--j", j_count, "aspect count override for presets");
    cmd->add_option("--n", n_rows, "rows to sample when using a generator");
  }

  bool is_synthetic() const { return data_path.empty(); }

  asel::dgp::DgpSpec spec() const {
    if (!dgp_path.empty()) return asel::dgp::load_dgp(dgp_path);
    if (!preset.empty()) return asel::dgp::preset(preset, j_count);
    throw asel::ConfigError("need --data, --dgp or --preset");
  }

  Dataset load(std::uint64_t seed) const {
    if (!data_path.empty()) {
      const std::string schema =
          schema_path.empty() ? default_schema_path(data_path) : schema_path;
      return asel::load_dataset(data_path, schema);
    }
    if (n_rows < 1)
      throw asel::ConfigError("synthetic source needs --n rows");
    return asel::dgp::sample(spec(), n_rows,
                             asel::derive_seed(seed, 0, asel::seed_tag::kData));
  }
};

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    asel::write_json(j, out_path);
    std::cout << "wrote " << out_path << '\n';
  }
}

PipelineConfig config_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw asel::ConfigError("cannot open config " + path);
  ordered_json j;
  in >> j;
  PipelineConfig cfg;
  cfg.rule = j.value("rule", cfg.rule);
  cfg.n_sel = j.value("n_sel", cfg.n_sel);
  cfg.lambda = j.value("lambda", cfg.lambda);
  cfg.lambda_r = j.value("lambda_r", cfg.lambda_r);
  cfg.lambda_imp = j.value("lambda_imp", cfg.lambda_imp);
  cfg.k_inner = j.value("k_inner", cfg.k_inner);
  cfg.k_outer = j.value("k_outer", cfg.k_outer);
  cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
  cfg.n_splits = j.value("n_splits", cfg.n_splits);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.second_stage_lambda =
      j.value("second_stage_lambda", cfg.second_stage_lambda);
  cfg.context = j.value("context", cfg.context);
  cfg.agreement_proxy = j.value("agreement_proxy", cfg.agreement_proxy);
  cfg.dataset_path = j.value("dataset", cfg.dataset_path);
  cfg.schema_path = j.value("schema", cfg.schema_path);
  cfg.dgp_path = j.value("dgp", cfg.dgp_path);
  cfg.dgp_preset = j.value("preset", cfg.dgp_preset);
  cfg.n_rows = j.value("n_rows", cfg.n_rows);
  return cfg;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"selective human-evaluation acquisition toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads for parallel sections (0 = hardware)");

  // ---- simulate ----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "sample a dataset from a DGP");
  DataSource sim_src;
  sim_src.add_options(sim);
  std::uint64_t sim_seed = 0;
  std::string sim_out = "dataset";
  sim->add_option("--seed", sim_seed, "base seed")->required();
  sim->add_option("--out", sim_out, "output prefix");

  // ---- rewards -----------------------------------------------------------
  auto* rew = app.add_subcommand("rewards", "reward table for subsets");
  DataSource rew_src;
  rew_src.add_options(rew);
  std::uint64_t rew_seed = 0;
  std::string rew_estimator = "linear";
  std::string rew_subsets = "singletons";
  int rew_budget = 1;
  double rew_lambda_r = 1.0;
  int rew_k_inner = 5;
  bool rew_ci = false;
  double rew_level = 0.95;
  std::string rew_out;
  rew->add_option("--seed", rew_seed, "base seed")->required();
  rew->add_option("--estimator", rew_estimator, "linear | np | np-adaptive");
  rew->add_option("--subsets", rew_subsets, "singletons | budget");
  rew->add_option("--budget", rew_budget, "max subset size for --subsets budget");
  rew->add_option("--lambda-r", rew_lambda_r, "estimation penalty");
  rew->add_option("--k-inner", rew_k_inner, "pseudo-outcome folds");
  rew->add_flag("--ci", rew_ci,
                "delta-method standard errors and intervals (linear, "
                "lambda-r = 0 only)");
  rew->add_option("--level", rew_level, "confidence level");
  rew->add_option("--out", rew_out, "output JSON path");

  // ---- select ------------------------------------------------------------
  auto* sel = app.add_subcommand("select", "run one selection rule");
  DataSource sel_src;
  sel_src.add_options(sel);
  std::uint64_t sel_seed = 0;
  std::string sel_rule = "singleton-linear";
  int sel_budget = 1;
  double sel_lambda_r = 1.0;
  int sel_k_inner = 5;
  bool sel_trace = false;
  bool sel_proxy = false;
  std::string sel_out;
  sel->add_option("--seed", sel_seed, "base seed")->required();
  sel->add_option("--rule", sel_rule, "rule id");
  sel->add_option("--n-sel", sel_budget, "budget");
  sel->add_option("--lambda-r", sel_lambda_r, "estimation penalty");
  sel->add_option("--k-inner", sel_k_inner, "pseudo-outcome folds");
  sel->add_flag("--trace", sel_trace, "include per-step candidate rewards");
  sel->add_flag("--agreement-proxy", sel_proxy,
                "synthesize the agreement proxy when S is absent");
  sel->add_option("--out", sel_out, "output JSON path");

  // ---- pipeline ----------------------------------------------------------
  auto* pip = app.add_subcommand("pipeline", "end-to-end evaluation protocol");
  DataSource pip_src;
  pip_src.add_options(pip);
  std::string pip_config;
  std::string pip_out = "report.json";
  PipelineConfig pip_cfg;
  std::uint64_t pip_seed = 0;
  pip->add_option("--config", pip_config, "config JSON (flags override)");
  pip->add_option("--rule", pip_cfg.rule, "rule id");
  pip->add_option("--n-sel", pip_cfg.n_sel, "budget");
  pip->add_option("--lambda", pip_cfg.lambda, "downstream ridge penalty");
  pip->add_option("--lambda-r", pip_cfg.lambda_r, "selection penalty");
  pip->add_option("--lambda-imp", pip_cfg.lambda_imp, "imputer penalty");
  pip->add_option("--k-inner", pip_cfg.k_inner, "inner folds");
  pip->add_option("--k-outer", pip_cfg.k_outer, "outer folds");
  pip->add_option("--test-fraction", pip_cfg.test_fraction, "test fraction");
  pip->add_option("--n-splits", pip_cfg.n_splits, "train/test splits");
  pip->add_option("--second-stage-lambda", pip_cfg.second_stage_lambda,
                  "adaptive second-stage penalty");
  pip->add_option("--context", pip_cfg.context, "identity | constant");
  pip->add_flag("--agreement-proxy", pip_cfg.agreement_proxy,
                "synthesize the agreement proxy when S is absent");
  auto* pip_seed_opt = pip->add_option("--seed", pip_seed, "base seed");
  pip->add_option("--out", pip_out, "report path");

  // ---- bias-scaling ------------------------------------------------------
  auto* bias = app.add_subcommand(
      "bias-scaling", "second-order bias of the orthogonal estimator");
  DataSource bias_src;
  bias_src.add_options(bias);
  std::uint64_t bias_seed = 0;
  std::string bias_pi = "0";
  std::string bias_deltas = "0.05,0.1,0.2,0.4";
  int bias_reps = 200;
  int bias_n = 2000;
  std::string bias_out;
  bias->add_option("--seed", bias_seed, "base seed")->required();
  bias->add_option("--pi", bias_pi, "subset, e.g. \"0,2\"");
  bias->add_option("--deltas", bias_deltas, "perturbation sizes");
  bias->add_option("--reps", bias_reps, "replications per delta");
  bias->add_option("--n-rows", bias_n, "sample size per replication");
  bias->add_option("--out", bias_out, "output JSON path");

  // ---- coverage ----------------------------------------------------------
  auto* cov = app.add_subcommand("coverage",
                                 "delta-method interval coverage check");
  DataSource cov_src;
  cov_src.add_options(cov);
  std::uint64_t cov_seed = 0;
  std::string cov_pi = "0";
  int cov_n = 2000;
  int cov_reps = 1000;
  double cov_level = 0.95;
  std::string cov_out;
  cov->add_option("--seed", cov_seed, "base seed")->required();
  cov->add_option("--pi", cov_pi, "subset");
  cov->add_option("--n-rows", cov_n, "sample size per replication");
  cov->add_option("--reps", cov_reps, "replications");
  cov->add_option("--level", cov_level, "nominal level");
  cov->add_option("--out", cov_out, "output JSON path");

  // ---- oracle ------------------------------------------------------------
  auto* ora = app.add_subcommand("oracle", "population quantities of a DGP");
  DataSource ora_src;
  ora_src.add_options(ora);
  std::string ora_pi;
  bool ora_reward = false;
  bool ora_moments = false;
  int ora_optimal = -1;
  std::string ora_a, ora_hpi, ora_z;
  std::string ora_out;
  ora->add_option("--pi", ora_pi, "subset for reward/moments/cond-mean");
  ora->add_flag("--reward", ora_reward, "population reward of --pi");
  ora->add_flag("--moments", ora_moments, "population moments of --pi");
  ora->add_option("--optimal", ora_optimal, "optimal subset for this budget");
  ora->add_option("--cond-mean-a", ora_a, "A point for the conditional mean");
  ora->add_option("--cond-mean-h", ora_hpi, "H_pi point");
  ora->add_option("--adaptive-z", ora_z,
                  "context for the adaptive linear reward");
  ora->add_option("--out", ora_out, "output JSON path");

  CLI11_PARSE(app, argc, argv);
  asel::set_thread_count(threads);

  if (sim->parsed()) {
    const auto spec = sim_src.spec();
    if (sim_src.n_rows < 1) throw asel::ConfigError("simulate needs --n");
    const Dataset d = asel::dgp::sample(
        spec, sim_src.n_rows,
        asel::derive_seed(sim_seed, 0, asel::seed_tag::kData));
    asel::write_dataset(d, sim_out + ".csv");
    asel::save_schema(asel::schema_for(d), sim_out + ".schema.json");
    asel::dgp::save_dgp(spec, sim_out + ".dgp.json");
    std::cout << "wrote " << sim_out << ".csv (" << d.n() << " rows), "
              << sim_out << ".schema.json, " << sim_out << ".dgp.json\n";
    return 0;
  }

  if (rew->parsed()) {
    const Dataset d = rew_src.load(rew_seed);
    std::vector<Subset> subsets;
    if (rew_subsets == "singletons") {
      for (int j = 0; j < d.j_count(); ++j) subsets.push_back(Subset{j});
    } else if (rew_subsets == "budget") {
      subsets = asel::subsets_up_to(d.j_count(), rew_budget);
    } else {
      throw asel::ConfigError("--subsets must be singletons or budget");
    }
    if (rew_ci && (rew_estimator != "linear" || rew_lambda_r != 0.0))
      throw asel::ConfigError(
          "--ci requires --estimator linear with --lambda-r 0; the "
          "delta-method variance is not defined for penalized fits");

    ordered_json rows = ordered_json::array();
    asel::FoldPlan folds;
    if (rew_estimator != "linear")
      folds = asel::make_folds(d.n(), rew_k_inner, rew_seed);
    for (const Subset& pi : subsets) {
      ordered_json row;
      row["subset"] = pi.to_string();
      if (rew_estimator == "linear") {
        row["reward"] = asel::round_for_report(
            asel::reward_linear_nonadaptive(d, pi, rew_lambda_r).value);
        if (rew_ci) {
          const auto vr = asel::asymptotic_variance(d, pi, rew_level);
          row["std_error"] = asel::round_for_report(vr.std_error);
          row["ci_low"] = asel::round_for_report(vr.ci_low);
          row["ci_high"] = asel::round_for_report(vr.ci_high);
          if (vr.low_rank_warning) row["low_rank_warning"] = true;
        }
      } else if (rew_estimator == "np" || rew_estimator == "np-adaptive") {
        asel::NpRewardConfig np;
        np.k_folds = rew_k_inner;
        np.lambda = rew_lambda_r;
        np.adaptive = rew_estimator == "np-adaptive";
        np.seed = rew_seed;
        const auto est = asel::estimate_reward_np(d, pi, np, folds);
        row["reward"] = asel::round_for_report(est.value);
        if (est.std_error)
          row["std_error"] = asel::round_for_report(*est.std_error);
        if (est.degenerate_context_fallback)
          row["degenerate_context_fallback"] = true;
      } else {
        throw asel::ConfigError("unknown estimator '" + rew_estimator + "'");
      }
      rows.push_back(row);
    }
    ordered_json j;
    j["tool"] = "asel";
    j["report"] = "rewards";
    j["schema_version"] = 1;
    j["estimator"] = rew_estimator;
    j["lambda_r"] = rew_lambda_r;
    j["seed"] = rew_seed;
    j["rows"] = rows;
    emit(j, rew_out);
    return 0;
  }

  if (sel->parsed()) {
    const Dataset d = sel_src.load(sel_seed);
    PipelineConfig cfg;
    cfg.rule = sel_rule;
    cfg.n_sel = sel_budget;
    cfg.lambda_r = sel_lambda_r;
    cfg.k_inner = sel_k_inner;
    cfg.agreement_proxy = sel_proxy;
    cfg.seed = sel_seed;
    cfg.validate();

    ordered_json j;
    j["tool"] = "asel";
    j["report"] = "select";
    j["schema_version"] = 1;
    j["rule"] = sel_rule;
    j["n_sel"] = sel_budget;
    j["seed"] = sel_seed;

    const asel::LearnedRule rule = asel::learn_rule(
        d, cfg, asel::derive_seed(sel_seed, 0, asel::seed_tag::kRule));
    if (rule.contextual) {
      std::vector<Subset> per_row;
      for (int i = 0; i < d.n(); ++i)
        per_row.push_back(
            rule.select_for(d.A.row(i).transpose(), cfg.n_sel));
      std::map<Subset, int> counts;
      for (const auto& s : per_row) ++counts[s];
      ordered_json arr = ordered_json::array();
      for (const auto& [subset, count] : counts) {
        ordered_json e;
        e["subset"] = subset.to_string();
        e["rows"] = count;
        arr.push_back(e);
      }
      j["contextual"] = true;
      j["selections"] = arr;
    } else {
      j["contextual"] = false;
      j["subset"] = rule.fixed.to_string();
      if (sel_trace) {
        // re-run the underlying rule to expose its trace
        asel::SelectionResult res;
        if (sel_rule == "bruteforce-linear")
          res = asel::select_bruteforce(
              asel::linear_reward_evaluator(d, sel_lambda_r), d.j_count(),
              sel_budget);
        else if (sel_rule == "greedy-linear")
          res = asel::select_greedy(
              asel::linear_reward_evaluator(d, sel_lambda_r), d.j_count(),
              sel_budget);
        else if (sel_rule == "importance")
          res = asel::select_importance(d, sel_budget, sel_lambda_r);
        else if (sel_rule == "agreement")
          res = asel::select_agreement(d, sel_budget, sel_lambda_r, sel_proxy);
        if (!res.trace.empty()) {
          ordered_json steps = ordered_json::array();
          for (const auto& step : res.trace) {
            ordered_json cand = ordered_json::array();
            for (const auto& [pi, r] : step) {
              ordered_json e;
              e["subset"] = pi.to_string();
              e["reward"] = asel::round_for_report(r);
              cand.push_back(e);
            }
            steps.push_back(cand);
          }
          j["trace"] = steps;
          j["tie_break_applied"] = res.tie_break_applied;
        }
      }
    }
    emit(j, sel_out);
    return 0;
  }

  if (pip->parsed()) {
    PipelineConfig cfg = pip_cfg;
    if (!pip_config.empty()) {
      cfg = config_from_json(pip_config);
      // explicit flags override the file
      if (pip->count("--rule")) cfg.rule = pip_cfg.rule;
      if (pip->count("--n-sel")) cfg.n_sel = pip_cfg.n_sel;
      if (pip->count("--lambda")) cfg.lambda = pip_cfg.lambda;
      if (pip->count("--lambda-r")) cfg.lambda_r = pip_cfg.lambda_r;
      if (pip->count("--lambda-imp")) cfg.lambda_imp = pip_cfg.lambda_imp;
      if (pip->count("--k-inner")) cfg.k_inner = pip_cfg.k_inner;
      if (pip->count("--k-outer")) cfg.k_outer = pip_cfg.k_outer;
      if (pip->count("--test-fraction"))
        cfg.test_fraction = pip_cfg.test_fraction;
      if (pip->count("--n-splits")) cfg.n_splits = pip_cfg.n_splits;
      if (pip->count("--second-stage-lambda"))
        cfg.second_stage_lambda = pip_cfg.second_stage_lambda;
      if (pip->count("--context")) cfg.context = pip_cfg.context;
      if (pip->count("--agreement-proxy"))
        cfg.agreement_proxy = pip_cfg.agreement_proxy;
    }
    if (!pip_src.data_path.empty()) cfg.dataset_path = pip_src.data_path;
    if (!pip_src.schema_path.empty()) cfg.schema_path = pip_src.schema_path;
    if (!pip_src.dgp_path.empty()) cfg.dgp_path = pip_src.dgp_path;
    if (!pip_src.preset.empty()) cfg.dgp_preset = pip_src.preset;
    if (pip_src.n_rows > 0) cfg.n_rows = pip_src.n_rows;
    if (pip_seed_opt->count()) cfg.seed = pip_seed;
    if (!pip_seed_opt->count() && pip_config.empty())
      throw asel::ConfigError("pipeline needs --seed (or a config file)");
    cfg.validate();

    Dataset d = [&] {
      if (!cfg.dataset_path.empty()) {
        const std::string schema = cfg.schema_path.empty()
                                       ? default_schema_path(cfg.dataset_path)
                                       : cfg.schema_path;
        return asel::load_dataset(cfg.dataset_path, schema);
      }
      asel::dgp::DgpSpec spec = cfg.dgp_path.empty()
                                    ? asel::dgp::preset(cfg.dgp_preset)
                                    : asel::dgp::load_dgp(cfg.dgp_path);
      if (cfg.n_rows < 1)
        throw asel::ConfigError("synthetic pipeline source needs n_rows");
      return asel::dgp::sample(
          spec, cfg.n_rows,
          asel::derive_seed(cfg.seed, 0, asel::seed_tag::kData));
    }();

    const asel::EvalReport report = asel::run_pipeline(d, cfg);
    asel::write_json(asel::report_to_json(report), pip_out);
    std::cout << "wrote " << pip_out << ": " << report.n_completed << "/"
              << cfg.n_splits << " splits, rule MAE "
              << report.rule.mae.mean << " (A-only "
              << report.a_only.mae.mean << ", H-only "
              << report.h_only.mae.mean << ", full " << report.full.mae.mean
              << ")\n";
    std::cerr << "[asel] pipeline runtime " << report.runtime_seconds
              << " s\n";
    return report.n_completed == cfg.n_splits ? 0 : 1;
  }

  if (bias->parsed()) {
    const auto report = asel::bias_scaling_experiment(
        bias_src.spec(), parse_subset(bias_pi), parse_double_list(bias_deltas),
        bias_reps, bias_n, bias_seed);
    emit(asel::report_to_json(report), bias_out);
    return 0;
  }

  if (cov->parsed()) {
    const auto report = asel::coverage_experiment(
        cov_src.spec(), parse_subset(cov_pi), cov_n, cov_reps, cov_level,
        cov_seed);
    emit(asel::report_to_json(report), cov_out);
    return 0;
  }

  if (ora->parsed()) {
    const auto spec = ora_src.spec();
    const Subset pi = parse_subset(ora_pi);
    ordered_json j;
    j["tool"] = "asel";
    j["report"] = "oracle";
    j["schema_version"] = 1;
    j["dgp"] = spec.name.empty() ? "custom" : spec.name;
    if (ora_reward) {
      j["pi"] = pi.to_string();
      j["reward"] = asel::dgp::oracle_reward(spec, pi);
    }
    if (ora_moments) {
      const auto om = asel::dgp::oracle_moments(spec, pi);
      j["pi"] = pi.to_string();
      j["mean_y"] = om.mean_y;
      j["var_y"] = om.var_y;
      j["theta"] = std::vector<double>(om.theta.data(),
                                       om.theta.data() + om.theta.size());
    }
    if (ora_optimal >= 0) {
      j["n_sel"] = ora_optimal;
      j["optimal_subset"] =
          asel::dgp::oracle_optimal_subset(spec, ora_optimal).to_string();
    }
    if (!ora_a.empty()) {
      const auto cm = asel::dgp::oracle_conditional_mean(spec, pi);
      j["pi"] = pi.to_string();
      j["conditional_mean"] = cm(parse_vector(ora_a), parse_vector(ora_hpi));
    }
    if (!ora_z.empty()) {
      j["pi"] = pi.to_string();
      j["adaptive_linear_reward"] = asel::dgp::oracle_adaptive_linear_reward(
          spec, pi, parse_vector(ora_z));
    }
    emit(j, ora_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
