#pragma once

#include "asel/dataset.hpp"
#include "asel/regression.hpp"

#include <optional>
#include <string>

namespace asel {

// Context abstraction Z = f(A) used by adaptive rewards; identity by default.
enum class ContextKind { Identity, Constant };
ContextKind parse_context(const std::string& name);
Matrix context_matrix(const Dataset& d, ContextKind kind);

// Cross-fitted orthogonal pseudo-outcomes: phi_i = 2 y_i m_i - m_i^2 where
// m_i is an out-of-fold first-stage prediction for row i.
struct PseudoOutcomes {
  Vector values;
  int k_folds = 0;
  double lambda = 0.0;
};

PseudoOutcomes pseudo_outcomes(const Vector& y, const Vector& m_oof);

// Reward estimate for a fixed subset. Non-adaptive estimates carry a value
// and a standard error; adaptive estimates carry a fitted function of the
// context z (ridge second stage).
struct RewardEstimate {
  enum class Kind { NonAdaptive, Adaptive };
  Kind kind = Kind::NonAdaptive;
  double value = 0.0;                       // mean pseudo-outcome
  std::optional<double> std_error;          // non-adaptive only
  std::optional<RidgeModel> context_model;  // adaptive only
  Subset subset;
  int n_used = 0;
  bool degenerate_context_fallback = false;

  // evaluate at a context point (non-adaptive estimates ignore z)
  double at(const Vector& z) const;
};

RewardEstimate reward_nonadaptive(const PseudoOutcomes& phi,
                                  const Subset& pi = Subset());

// Second-stage ridge of phi on Z. If every Z column is constant the estimate
// falls back to the non-adaptive mean with a warning flag set.
RewardEstimate reward_adaptive(const PseudoOutcomes& phi, const Matrix& Z,
                               double second_stage_lambda,
                               const Subset& pi = Subset());

struct NpRewardConfig {
  int k_folds = 5;
  double lambda = 1.0;               // first-stage ridge penalty
  double second_stage_lambda = 1.0;  // adaptive second stage
  bool adaptive = false;
  ContextKind context = ContextKind::Identity;
  std::uint64_t seed = 0;
};

// End to end: folds -> out-of-fold first stage on (A, H_pi) -> pseudo
// outcomes -> averaging or second-stage regression.
RewardEstimate estimate_reward_np(const Dataset& d, const Subset& pi,
                                  const NpRewardConfig& cfg);

// Same, with a caller-owned fold plan so several subsets can share folds.
RewardEstimate estimate_reward_np(const Dataset& d, const Subset& pi,
                                  const NpRewardConfig& cfg,
                                  const FoldPlan& folds);

}  // namespace asel
