#pragma once

#include "asel/dataset.hpp"
#include "asel/parallel.hpp"
#include "asel/reward_nonparam.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace asel {

// Subset -> reward, deterministic for fixed inputs. `kind` names the
// estimator for traces and reports.
struct RewardEvaluator {
  std::function<double(const Subset&)> fn;
  std::string kind;

  double operator()(const Subset& pi) const { return fn(pi); }
};

RewardEvaluator linear_reward_evaluator(const Dataset& d, double lambda);
// All subsets share one fold plan derived from (n, k_folds, seed) so greedy
// steps and sweeps stay comparable and deterministic.
RewardEvaluator np_reward_evaluator(const Dataset& d,
                                    const NpRewardConfig& cfg);

struct SelectionResult {
  Subset subset;
  std::string rule;
  // one entry per decision step: the candidates scored at that step
  std::vector<std::vector<std::pair<Subset, double>>> trace;
  bool tie_break_applied = false;
};

// exhaustive search over subsets of size min(n_sel, J); J <= 20
SelectionResult select_bruteforce(const RewardEvaluator& eval, int j_count,
                                  int n_sel, Exec exec = Exec::Parallel);

// top n_sel indices by singleton reward, lower index first on ties
SelectionResult select_singleton(const std::vector<double>& singleton_rewards,
                                 int n_sel);

// forward greedy on marginal reward
SelectionResult select_greedy(const RewardEvaluator& eval, int j_count,
                              int n_sel);

// rank aspects by the norm of their orthogonalized-H coefficient block in a
// fit of Y on (A, H_perp)
SelectionResult select_importance(const Dataset& d, int n_sel, double lambda);

// rank aspects by predicted disagreement from a ridge map A -> S, masking
// aspects whose mean predicted relevance falls below 0.5. When the dataset
// has no S columns and `synthesize_proxy` is set, a proxy
// s_{j,1} = 1 - |A_j - H_j| / max is built from the given rows (training rows
// only; off by default because it reads H).
SelectionResult select_agreement(const Dataset& d, int n_sel, double lambda,
                                 bool synthesize_proxy = false);

// argmax over explicit candidate subsets of the fitted reward at context z
SelectionResult select_adaptive(
    const Vector& z, const std::map<Subset, RewardEstimate>& reward_functions,
    int n_sel);

// the proxy S used by select_agreement when S is absent
Matrix agreement_proxy(const Dataset& d);

}  // namespace asel
