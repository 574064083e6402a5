#include "asel/pipeline.hpp"

#include "asel/reward_linear.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>

namespace asel {

using ordered_json = nlohmann::ordered_json;

const char* const kSeedDerivationNote =
    "unit seed = splitmix64(base ^ splitmix64((tag<<32) ^ index)); "
    "tags: split=1 outer-folds=2 rule=3 data=4 bias=5 coverage=6";

const std::vector<std::string>& known_rules() {
  static const std::vector<std::string> rules = {
      "bruteforce-linear", "singleton-linear",     "singleton-np",
      "singleton-np-adaptive", "greedy-linear",    "importance",
      "agreement"};
  return rules;
}

void PipelineConfig::validate() const {
  const auto& rules = known_rules();
  if (std::find(rules.begin(), rules.end(), rule) == rules.end())
    throw ConfigError("unknown rule id '" + rule + "'");
  if (n_sel < 0) throw ConfigError("n_sel must be >= 0");
  if (lambda < 0 || lambda_r < 0 || lambda_imp < 0 || second_stage_lambda < 0)
    throw ConfigError("penalties must be >= 0");
  if (k_inner < 2 || k_outer < 2) throw ConfigError("fold counts must be >= 2");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("test_fraction must be in (0,1)");
  if (n_splits < 1) throw ConfigError("n_splits must be >= 1");
  parse_context(context);
}

Metrics metrics(const Vector& y_true, const Vector& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.size() == 0)
    throw DimensionError("metrics: need equal nonzero lengths");
  const Vector err = y_true - y_pred;
  Metrics m;
  m.mae = err.cwiseAbs().mean();
  m.rmse = std::sqrt(err.squaredNorm() / static_cast<double>(err.size()));
  const double sst = (y_true.array() - y_true.mean()).square().sum();
  if (!(sst > 0.0))
    throw Error("metrics: y_true has zero variance, R^2 undefined");
  m.r2 = 1.0 - err.squaredNorm() / sst;
  return m;
}

SplitPlan plan_split(int n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("plan_split: test_fraction must be in (0,1)");
  int n_test = static_cast<int>(std::lround(n * test_fraction));
  n_test = std::max(1, std::min(n - 1, n_test));

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  SplitPlan plan;
  plan.seed = seed;
  plan.test.assign(perm.begin(), perm.begin() + n_test);
  plan.train.assign(perm.begin() + n_test, perm.end());
  std::sort(plan.test.begin(), plan.test.end());
  std::sort(plan.train.begin(), plan.train.end());
  return plan;
}

Subset LearnedRule::select_for(const Vector& z, int n_sel) const {
  if (!contextual) return fixed;
  std::vector<double> rewards;
  rewards.reserve(singleton_models.size());
  for (const auto& model : singleton_models) rewards.push_back(model.at(z));
  return select_singleton(rewards, n_sel).subset;
}

LearnedRule learn_rule(const Dataset& train, const PipelineConfig& cfg,
                       std::uint64_t seed) {
  LearnedRule out;
  const int J = train.j_count();

  if (cfg.rule == "bruteforce-linear") {
    out.fixed = select_bruteforce(linear_reward_evaluator(train, cfg.lambda_r),
                                  J, cfg.n_sel, Exec::Serial)
                    .subset;
  } else if (cfg.rule == "greedy-linear") {
    out.fixed =
        select_greedy(linear_reward_evaluator(train, cfg.lambda_r), J,
                      cfg.n_sel)
            .subset;
  } else if (cfg.rule == "singleton-linear") {
    std::vector<double> rewards;
    for (int j = 0; j < J; ++j)
      rewards.push_back(
          reward_linear_nonadaptive(train, Subset{j}, cfg.lambda_r).value);
    out.fixed = select_singleton(rewards, cfg.n_sel).subset;
  } else if (cfg.rule == "singleton-np" ||
             cfg.rule == "singleton-np-adaptive") {
    NpRewardConfig np;
    np.k_folds = cfg.k_inner;
    np.lambda = cfg.lambda_r;
    np.second_stage_lambda = cfg.second_stage_lambda;
    np.adaptive = cfg.rule == "singleton-np-adaptive";
    np.context = parse_context(cfg.context);
    np.seed = seed;
    const FoldPlan folds = make_folds(train.n(), np.k_folds, seed);
    if (np.adaptive) {
      out.contextual = true;
      for (int j = 0; j < J; ++j)
        out.singleton_models.push_back(
            estimate_reward_np(train, Subset{j}, np, folds));
    } else {
      std::vector<double> rewards;
      for (int j = 0; j < J; ++j)
        rewards.push_back(
            estimate_reward_np(train, Subset{j}, np, folds).value);
      out.fixed = select_singleton(rewards, cfg.n_sel).subset;
    }
  } else if (cfg.rule == "importance") {
    out.fixed = select_importance(train, cfg.n_sel, cfg.lambda_r).subset;
  } else if (cfg.rule == "agreement") {
    out.fixed =
        select_agreement(train, cfg.n_sel, cfg.lambda_r, cfg.agreement_proxy)
            .subset;
  } else {
    throw ConfigError("unknown rule id '" + cfg.rule + "'");
  }
  return out;
}

namespace {

SelectionCounts count_selections(const std::vector<Subset>& subsets) {
  std::map<Subset, int> counts;
  for (const Subset& s : subsets) ++counts[s];
  return SelectionCounts(counts.begin(), counts.end());
}

Vector context_row(const Dataset& d, int row, ContextKind kind) {
  if (kind == ContextKind::Identity) return d.A.row(row).transpose();
  return Vector::Ones(1);
}

}  // namespace

SplitOutcome run_single_split(const Dataset& d, const PipelineConfig& cfg,
                              const SplitPlan& plan) {
  const Dataset train = d.rows(plan.train);
  const Dataset test = d.rows(plan.test);
  const ContextKind ctx = parse_context(cfg.context);

  SplitOutcome out;
  out.seed = plan.seed;

  // out-of-sample selection for the training rows
  const FoldPlan outer = make_folds(
      train.n(), cfg.k_outer, derive_seed(plan.seed, 0, seed_tag::kOuterFolds));
  std::vector<Subset> train_subsets(static_cast<std::size_t>(train.n()));
  for (int f = 0; f < outer.k; ++f) {
    const LearnedRule rule =
        learn_rule(train.rows(outer.complement_rows(f)), cfg,
                   derive_seed(plan.seed, static_cast<std::uint64_t>(f) + 1,
                               seed_tag::kRule));
    std::vector<Subset> fold_choices;
    for (int r : outer.fold_rows(f)) {
      const Subset pi = rule.contextual
                            ? rule.select_for(context_row(train, r, ctx),
                                              cfg.n_sel)
                            : rule.fixed;
      train_subsets[static_cast<std::size_t>(r)] = pi;
      fold_choices.push_back(pi);
    }
    out.fold_selections.push_back(count_selections(fold_choices));
  }

  // test rows use the rule learned on the full training set
  const LearnedRule test_rule =
      learn_rule(train, cfg, derive_seed(plan.seed, 0, seed_tag::kRule));
  std::vector<Subset> test_subsets;
  for (int r = 0; r < test.n(); ++r)
    test_subsets.push_back(test_rule.contextual
                               ? test_rule.select_for(context_row(test, r, ctx),
                                                      cfg.n_sel)
                               : test_rule.fixed);
  out.test_selections = count_selections(test_subsets);

  const Imputer imputer = fit_imputer(train.A, train.H, cfg.lambda_imp);

  const Matrix x_train = build_feature_matrix(train, train_subsets, imputer);
  out.downstream = ridge_fit(x_train, train.Y, cfg.lambda);
  const Matrix x_test = build_feature_matrix(test, test_subsets, imputer);
  out.test_predictions = ridge_predict(out.downstream, x_test);
  out.rule_metrics = metrics(test.Y, out.test_predictions);

  // baselines: no human signal (same imputer convention), human only, both
  {
    const Matrix x0_train =
        build_feature_matrix(train, Subset::empty(), imputer);
    const RidgeModel m = ridge_fit(x0_train, train.Y, cfg.lambda);
    const Matrix x0_test = build_feature_matrix(test, Subset::empty(), imputer);
    out.a_only = metrics(test.Y, ridge_predict(m, x0_test));
  }
  {
    const RidgeModel m = ridge_fit(train.H, train.Y, cfg.lambda);
    out.h_only = metrics(test.Y, ridge_predict(m, test.H));
  }
  {
    Matrix xf_train(train.n(), train.A.cols() + train.H.cols());
    xf_train << train.A, train.H;
    Matrix xf_test(test.n(), test.A.cols() + test.H.cols());
    xf_test << test.A, test.H;
    const RidgeModel m = ridge_fit(xf_train, train.Y, cfg.lambda);
    out.full = metrics(test.Y, ridge_predict(m, xf_test));
  }

  out.completed = true;
  return out;
}

namespace {

AggregateMetric aggregate(const std::vector<double>& values) {
  AggregateMetric agg;
  const int n = static_cast<int>(values.size());
  if (n == 0) return agg;
  agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    const double sd = std::sqrt(ss / (n - 1));
    agg.half_width = normal_quantile(0.975) * sd / std::sqrt(n);
  }
  return agg;
}

AggregateSeries aggregate_series(const std::vector<SplitOutcome>& splits,
                                 Metrics SplitOutcome::*member) {
  std::vector<double> mae, rmse, r2;
  for (const auto& s : splits) {
    if (!s.completed) continue;
    mae.push_back((s.*member).mae);
    rmse.push_back((s.*member).rmse);
    r2.push_back((s.*member).r2);
  }
  AggregateSeries agg;
  agg.mae = aggregate(mae);
  agg.rmse = aggregate(rmse);
  agg.r2 = aggregate(r2);
  return agg;
}

}  // namespace

EvalReport run_pipeline(const Dataset& d, const PipelineConfig& cfg,
                        Exec exec) {
  cfg.validate();
  d.validate();
  const auto t0 = std::chrono::steady_clock::now();

  EvalReport report;
  report.config = cfg;
  report.n_rows = d.n();
  report.splits.resize(static_cast<std::size_t>(cfg.n_splits));

  parallel_for(
      cfg.n_splits,
      [&](std::int64_t s) {
        auto& slot = report.splits[static_cast<std::size_t>(s)];
        const std::uint64_t split_seed =
            derive_seed(cfg.seed, static_cast<std::uint64_t>(s),
                        seed_tag::kSplit);
        try {
          const SplitPlan plan =
              plan_split(d.n(), cfg.test_fraction, split_seed);
          slot = run_single_split(d, cfg, plan);
        } catch (const std::exception& e) {
          slot = SplitOutcome{};
          slot.seed = split_seed;
          slot.error = e.what();
        }
      },
      exec);

  for (const auto& s : report.splits)
    if (s.completed) ++report.n_completed;
  report.rule = aggregate_series(report.splits, &SplitOutcome::rule_metrics);
  report.a_only = aggregate_series(report.splits, &SplitOutcome::a_only);
  report.h_only = aggregate_series(report.splits, &SplitOutcome::h_only);
  report.full = aggregate_series(report.splits, &SplitOutcome::full);

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

double round_for_report(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

void write_json(const ordered_json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

ordered_json config_to_json(const PipelineConfig& cfg) {
  ordered_json j;
  j["rule"] = cfg.rule;
  j["n_sel"] = cfg.n_sel;
  j["lambda"] = cfg.lambda;
  j["lambda_r"] = cfg.lambda_r;
  j["lambda_imp"] = cfg.lambda_imp;
  j["k_inner"] = cfg.k_inner;
  j["k_outer"] = cfg.k_outer;
  j["test_fraction"] = cfg.test_fraction;
  j["n_splits"] = cfg.n_splits;
  j["seed"] = cfg.seed;
  j["second_stage_lambda"] = cfg.second_stage_lambda;
  j["context"] = cfg.context;
  j["agreement_proxy"] = cfg.agreement_proxy;
  if (!cfg.dataset_path.empty()) j["dataset"] = cfg.dataset_path;
  if (!cfg.schema_path.empty()) j["schema"] = cfg.schema_path;
  if (!cfg.dgp_path.empty()) j["dgp"] = cfg.dgp_path;
  if (!cfg.dgp_preset.empty()) j["preset"] = cfg.dgp_preset;
  if (cfg.n_rows > 0) j["n_rows"] = cfg.n_rows;
  return j;
}

ordered_json metrics_to_json(const Metrics& m) {
  ordered_json j;
  j["mae"] = round_for_report(m.mae);
  j["rmse"] = round_for_report(m.rmse);
  j["r2"] = round_for_report(m.r2);
  return j;
}

ordered_json series_to_json(const AggregateSeries& a) {
  auto one = [](const AggregateMetric& m) {
    ordered_json j;
    j["mean"] = round_for_report(m.mean);
    j["half_width_95"] = round_for_report(m.half_width);
    return j;
  };
  ordered_json j;
  j["mae"] = one(a.mae);
  j["rmse"] = one(a.rmse);
  j["r2"] = one(a.r2);
  return j;
}

ordered_json selections_to_json(const SelectionCounts& counts) {
  ordered_json arr = ordered_json::array();
  for (const auto& [subset, rows] : counts) {
    ordered_json e;
    e["subset"] = subset.to_string();
    e["rows"] = rows;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace

ordered_json report_to_json(const EvalReport& report) {
  ordered_json j;
  j["tool"] = "asel";
  j["report"] = "pipeline";
  j["schema_version"] = 1;
  j["config"] = config_to_json(report.config);
  j["seed_derivation"] = kSeedDerivationNote;
  j["n_rows"] = report.n_rows;
  j["n_splits"] = report.config.n_splits;
  j["n_completed"] = report.n_completed;
  j["splits"] = ordered_json::array();
  for (std::size_t s = 0; s < report.splits.size(); ++s) {
    const auto& split = report.splits[s];
    ordered_json sj;
    sj["split"] = s;
    sj["seed"] = split.seed;
    sj["completed"] = split.completed;
    if (!split.completed) {
      sj["error"] = split.error;
      j["splits"].push_back(sj);
      continue;
    }
    ordered_json folds = ordered_json::array();
    for (const auto& f : split.fold_selections)
      folds.push_back(selections_to_json(f));
    sj["fold_selections"] = folds;
    sj["test_selections"] = selections_to_json(split.test_selections);
    ordered_json mj;
    mj["rule"] = metrics_to_json(split.rule_metrics);
    mj["a_only"] = metrics_to_json(split.a_only);
    mj["h_only"] = metrics_to_json(split.h_only);
    mj["full"] = metrics_to_json(split.full);
    sj["metrics"] = mj;
    j["splits"].push_back(sj);
  }
  ordered_json agg;
  agg["rule"] = series_to_json(report.rule);
  agg["a_only"] = series_to_json(report.a_only);
  agg["h_only"] = series_to_json(report.h_only);
  agg["full"] = series_to_json(report.full);
  j["aggregate"] = agg;
  return j;
}

BiasScalingReport bias_scaling_experiment(const dgp::DgpSpec& spec,
                                          const Subset& pi,
                                          std::vector<double> deltas, int reps,
                                          int n, std::uint64_t seed, Exec exec,
                                          double g0, double g1) {
  if (deltas.empty()) throw ConfigError("bias_scaling: no deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] < 0.0)
      throw ConfigError("bias_scaling: deltas must be >= 0");
    if (i > 0 && deltas[i] <= deltas[i - 1])
      throw ConfigError("bias_scaling: deltas must be increasing");
  }
  if (reps < 2 || n < 2) throw ConfigError("bias_scaling: reps and n >= 2");

  const dgp::ConditionalMean cm = dgp::oracle_conditional_mean(spec, pi);
  const double oracle = dgp::oracle_reward(spec, pi);

  const auto n_deltas = static_cast<std::int64_t>(deltas.size());
  std::vector<double> estimates(static_cast<std::size_t>(n_deltas * reps));
  parallel_for(
      n_deltas * reps,
      [&](std::int64_t unit) {
        const auto di = static_cast<std::size_t>(unit / reps);
        const Dataset ds = dgp::sample(
            spec, n,
            derive_seed(seed, static_cast<std::uint64_t>(unit),
                        seed_tag::kBias));
        const Matrix obs = design_for_subset(ds, pi);
        const double delta = deltas[di];
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          const Vector row = obs.row(i).transpose();
          const double g = g0 + g1 * row.mean();
          const double m = cm.at_obs(row) + delta * g;
          acc += 2.0 * ds.Y(i) * m - m * m;
        }
        estimates[static_cast<std::size_t>(unit)] = acc / n;
      },
      exec);

  BiasScalingReport report;
  report.pi = pi;
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.g0 = g0;
  report.g1 = g1;
  report.oracle = oracle;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    BiasScalingPoint pt;
    pt.delta = deltas[di];
    double mean = 0.0;
    for (int r = 0; r < reps; ++r) mean += estimates[di * reps + r];
    mean /= reps;
    double ss = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double dev = estimates[di * reps + r] - mean;
      ss += dev * dev;
    }
    pt.mean_estimate = mean;
    pt.abs_bias = std::abs(mean - oracle);
    pt.mc_se = std::sqrt(ss / (reps - 1)) / std::sqrt(reps);
    report.points.push_back(pt);
  }

  // log-log slope over the positive deltas
  std::vector<double> lx, ly;
  for (const auto& pt : report.points)
    if (pt.delta > 0.0 && pt.abs_bias > 0.0) {
      lx.push_back(std::log(pt.delta));
      ly.push_back(std::log(pt.abs_bias));
    }
  if (lx.size() >= 2) {
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    report.slope = sxy / sxx;
  } else {
    report.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

ordered_json report_to_json(const BiasScalingReport& report) {
  ordered_json j;
  j["tool"] = "asel";
  j["report"] = "bias-scaling";
  j["schema_version"] = 1;
  j["pi"] = report.pi.to_string();
  j["n"] = report.n;
  j["reps"] = report.reps;
  j["seed"] = report.seed;
  j["seed_derivation"] = kSeedDerivationNote;
  j["g0"] = report.g0;
  j["g1"] = report.g1;
  j["oracle_reward"] = round_for_report(report.oracle);
  j["points"] = ordered_json::array();
  for (const auto& pt : report.points) {
    ordered_json p;
    p["delta"] = pt.delta;
    p["mean_estimate"] = round_for_report(pt.mean_estimate);
    p["abs_bias"] = round_for_report(pt.abs_bias);
    p["mc_se"] = round_for_report(pt.mc_se);
    j["points"].push_back(p);
  }
  j["loglog_slope"] = round_for_report(report.slope);
  return j;
}

CoverageReport coverage_experiment(const dgp::DgpSpec& spec, const Subset& pi,
                                   int n, int reps, double level,
                                   std::uint64_t seed, Exec exec) {
  if (!(level > 0.0 && level < 1.0))
    throw ConfigError("coverage: level must be in (0,1)");
  if (reps < 1 || n < 2) throw ConfigError("coverage: reps >= 1, n >= 2");

  const double oracle = dgp::oracle_reward(spec, pi);

  std::vector<int> covered(static_cast<std::size_t>(reps));
  std::vector<double> rewards(static_cast<std::size_t>(reps));
  std::vector<double> sigma2(static_cast<std::size_t>(reps));
  std::vector<int> flagged(static_cast<std::size_t>(reps));
  parallel_for(
      reps,
      [&](std::int64_t r) {
        const Dataset ds = dgp::sample(
            spec, n,
            derive_seed(seed, static_cast<std::uint64_t>(r),
                        seed_tag::kCoverage));
        const VarianceReport vr = asymptotic_variance(ds, pi, level);
        covered[static_cast<std::size_t>(r)] =
            (vr.ci_low <= oracle && oracle <= vr.ci_high) ? 1 : 0;
        rewards[static_cast<std::size_t>(r)] = vr.reward;
        sigma2[static_cast<std::size_t>(r)] = vr.sigma2;
        flagged[static_cast<std::size_t>(r)] = vr.low_rank_warning ? 1 : 0;
      },
      exec);

  CoverageReport report;
  report.pi = pi;
  report.n = n;
  report.reps = reps;
  report.level = level;
  report.seed = seed;
  report.oracle = oracle;
  report.covered = std::accumulate(covered.begin(), covered.end(), 0);
  report.coverage = static_cast<double>(report.covered) / reps;
  report.mean_reward =
      std::accumulate(rewards.begin(), rewards.end(), 0.0) / reps;
  report.mean_sigma2 =
      std::accumulate(sigma2.begin(), sigma2.end(), 0.0) / reps;
  report.flagged = std::accumulate(flagged.begin(), flagged.end(), 0) > 0;
  return report;
}

ordered_json report_to_json(const CoverageReport& report) {
  ordered_json j;
  j["tool"] = "asel";
  j["report"] = "coverage";
  j["schema_version"] = 1;
  j["pi"] = report.pi.to_string();
  j["n"] = report.n;
  j["reps"] = report.reps;
  j["level"] = report.level;
  j["seed"] = report.seed;
  j["seed_derivation"] = kSeedDerivationNote;
  j["oracle_reward"] = round_for_report(report.oracle);
  j["covered"] = report.covered;
  j["coverage"] = round_for_report(report.coverage);
  j["mean_reward"] = round_for_report(report.mean_reward);
  j["mean_sigma2"] = round_for_report(report.mean_sigma2);
  j["small_sample_flag"] = report.flagged;
  return j;
}

RewardTable reward_table(const Dataset& d,
                         const std::vector<std::string>& rules,
                         const std::vector<int>& budgets,
                         const PipelineConfig& cfg, Exec exec) {
  RewardTable table;
  table.config = cfg;
  for (const auto& rule : rules) {
    for (int budget : budgets) {
      PipelineConfig sub = cfg;
      sub.rule = rule;
      sub.n_sel = budget;
      sub.validate();

      RewardTableRow row;
      row.rule = rule;
      row.budget = budget;
      const EvalReport er = run_pipeline(d, sub, exec);
      row.agg = er.rule;
      row.completed = er.n_completed;

      const LearnedRule learned =
          learn_rule(d, sub, derive_seed(sub.seed, 0, seed_tag::kRule));
      if (learned.contextual) {
        row.subset = "contextual";
      } else {
        row.subset = learned.fixed.to_string();
        row.in_sample_reward =
            reward_linear_nonadaptive(d, learned.fixed, sub.lambda_r).value;
        row.has_reward = true;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

ordered_json report_to_json(const RewardTable& table) {
  ordered_json j;
  j["tool"] = "asel";
  j["report"] = "reward-table";
  j["schema_version"] = 1;
  j["config"] = config_to_json(table.config);
  j["seed_derivation"] = kSeedDerivationNote;
  // Published reference points from the motivating LLM-assisted peer-review
  // study; orientation only, never produced by this run.
  ordered_json ref;
  ref["llm_direct_prompt_mae"] = 1.9063;
  ref["model_on_ai_features_mae"] = 0.7;
  ref["single_human_query_mae_below"] = 0.55;
  ref["note"] =
      "reference values from a published LLM-assisted peer-review "
      "benchmark; context only";
  j["reference_points"] = ref;
  j["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r;
    r["rule"] = row.rule;
    r["budget"] = row.budget;
    r["subset"] = row.subset;
    if (row.has_reward)
      r["in_sample_reward"] = round_for_report(row.in_sample_reward);
    r["metrics"] = series_to_json(row.agg);
    r["completed_splits"] = row.completed;
    j["rows"].push_back(r);
  }
  return j;
}

}  // namespace asel
