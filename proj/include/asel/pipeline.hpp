#pragma once

#include "asel/dgp.hpp"
#include "asel/features.hpp"
#include "asel/parallel.hpp"
#include "asel/selection.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace asel {

// Seed-derivation tags; unit seeds are derive_seed(base, index, tag). The
// scheme is echoed in every report.
namespace seed_tag {
constexpr std::uint64_t kSplit = 1;
constexpr std::uint64_t kOuterFolds = 2;
constexpr std::uint64_t kRule = 3;
constexpr std::uint64_t kData = 4;
constexpr std::uint64_t kBias = 5;
constexpr std::uint64_t kCoverage = 6;
}  // namespace seed_tag

extern const char* const kSeedDerivationNote;

struct PipelineConfig {
  std::string rule = "singleton-linear";
  int n_sel = 1;
  double lambda = 1.0;      // downstream ridge
  double lambda_r = 1.0;    // reward / selection estimation
  double lambda_imp = 1.0;  // imputer
  int k_inner = 5;          // pseudo-outcome cross-fitting
  int k_outer = 5;          // out-of-sample selection folds
  double test_fraction = 0.2;
  int n_splits = 20;
  std::uint64_t seed = 0;
  double second_stage_lambda = 1.0;
  std::string context = "identity";
  bool agreement_proxy = false;

  // data source: either a CSV + schema, or a generator spec + row count
  std::string dataset_path;
  std::string schema_path;
  std::string dgp_path;
  std::string dgp_preset;
  int n_rows = 0;

  void validate() const;
};

const std::vector<std::string>& known_rules();

struct Metrics {
  double mae = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
};

Metrics metrics(const Vector& y_true, const Vector& y_pred);

// A selection rule fitted on a set of rows. Non-contextual rules carry one
// subset; the contextual rule carries a reward model per aspect and picks a
// subset per context.
struct LearnedRule {
  bool contextual = false;
  Subset fixed;
  std::vector<RewardEstimate> singleton_models;

  Subset select_for(const Vector& z, int n_sel) const;
};

LearnedRule learn_rule(const Dataset& train, const PipelineConfig& cfg,
                       std::uint64_t seed);

struct SplitPlan {
  std::vector<int> train;
  std::vector<int> test;
  std::uint64_t seed = 0;
};

SplitPlan plan_split(int n, double test_fraction, std::uint64_t seed);

using SelectionCounts = std::vector<std::pair<Subset, int>>;

struct SplitOutcome {
  bool completed = false;
  std::string error;
  std::uint64_t seed = 0;
  Metrics rule_metrics, a_only, h_only, full;
  std::vector<SelectionCounts> fold_selections;  // one per outer fold
  SelectionCounts test_selections;
  RidgeModel downstream;
  Vector test_predictions;
};

// One train/test split of the evaluation protocol: out-of-sample selection on
// the training rows via outer folds, imputation, downstream fit, and the
// three reference baselines. Test rows never influence any fitted object.
SplitOutcome run_single_split(const Dataset& d, const PipelineConfig& cfg,
                              const SplitPlan& plan);

struct AggregateMetric {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal interval over splits
};

struct AggregateSeries {
  AggregateMetric mae, rmse, r2;
};

struct EvalReport {
  PipelineConfig config;
  int n_rows = 0;
  std::vector<SplitOutcome> splits;
  int n_completed = 0;
  AggregateSeries rule, a_only, h_only, full;
  double runtime_seconds = 0.0;  // console-only; kept out of the file
};

EvalReport run_pipeline(const Dataset& d, const PipelineConfig& cfg,
                        Exec exec = Exec::Parallel);

nlohmann::ordered_json report_to_json(const EvalReport& report);

// Theorem-check harness: replace the first stage by the exact conditional
// mean plus delta * g and trace how the absolute bias of the averaged
// pseudo-outcome scales in delta. g(obs) = g0 + g1 * mean(obs).
struct BiasScalingPoint {
  double delta = 0.0;
  double mean_estimate = 0.0;
  double abs_bias = 0.0;
  double mc_se = 0.0;
};

struct BiasScalingReport {
  std::vector<BiasScalingPoint> points;
  double slope = 0.0;  // log-log over positive deltas
  double oracle = 0.0;
  Subset pi;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  double g0 = 0.0, g1 = 0.0;
};

BiasScalingReport bias_scaling_experiment(const dgp::DgpSpec& spec,
                                          const Subset& pi,
                                          std::vector<double> deltas, int reps,
                                          int n, std::uint64_t seed,
                                          Exec exec = Exec::Parallel,
                                          double g0 = 6.0, double g1 = 1.0);

nlohmann::ordered_json report_to_json(const BiasScalingReport& report);

// Monte Carlo check of the delta-method interval against the exact reward.
struct CoverageReport {
  double coverage = 0.0;
  int covered = 0;
  int reps = 0;
  int n = 0;
  double level = 0.95;
  double oracle = 0.0;
  double mean_reward = 0.0;
  double mean_sigma2 = 0.0;
  bool flagged = false;  // any replication tripped the low-rank warning
  Subset pi;
  std::uint64_t seed = 0;
};

CoverageReport coverage_experiment(const dgp::DgpSpec& spec, const Subset& pi,
                                   int n, int reps, double level,
                                   std::uint64_t seed,
                                   Exec exec = Exec::Parallel);

nlohmann::ordered_json report_to_json(const CoverageReport& report);

// Metric-versus-budget table across rules, plot ready.
struct RewardTableRow {
  std::string rule;
  int budget = 0;
  std::string subset;  // "contextual" for the contextual rule
  double in_sample_reward = 0.0;
  bool has_reward = false;
  AggregateSeries agg;
  int completed = 0;
};

struct RewardTable {
  std::vector<RewardTableRow> rows;
  PipelineConfig config;
};

RewardTable reward_table(const Dataset& d,
                         const std::vector<std::string>& rules,
                         const std::vector<int>& budgets,
                         const PipelineConfig& cfg,
                         Exec exec = Exec::Parallel);

nlohmann::ordered_json report_to_json(const RewardTable& table);

// Round to 6 significant digits; applied to every float that reaches a file.
double round_for_report(double v);

void write_json(const nlohmann::ordered_json& j, const std::string& path);

}  // namespace asel
