#include "asel/selection.hpp"

#include "asel/features.hpp"
#include "asel/reward_linear.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace asel {

RewardEvaluator linear_reward_evaluator(const Dataset& d, double lambda) {
  RewardEvaluator eval;
  eval.kind = "linear";
  const Dataset* dp = &d;
  eval.fn = [dp, lambda](const Subset& pi) {
    return reward_linear_nonadaptive(*dp, pi, lambda).value;
  };
  return eval;
}

RewardEvaluator np_reward_evaluator(const Dataset& d,
                                    const NpRewardConfig& cfg) {
  RewardEvaluator eval;
  eval.kind = cfg.adaptive ? "np-adaptive" : "np";
  const Dataset* dp = &d;
  auto folds =
      std::make_shared<FoldPlan>(make_folds(d.n(), cfg.k_folds, cfg.seed));
  eval.fn = [dp, cfg, folds](const Subset& pi) {
    return estimate_reward_np(*dp, pi, cfg, *folds).value;
  };
  return eval;
}

namespace {

int clamp_budget(int n_sel, int j_count) {
  if (n_sel < 0) throw ConfigError("selection: negative budget");
  return std::min(n_sel, j_count);
}

}  // namespace

SelectionResult select_bruteforce(const RewardEvaluator& eval, int j_count,
                                  int n_sel, Exec exec) {
  if (j_count > 20)
    throw ConfigError("select_bruteforce: J > 20 enumeration guard");
  const int size = clamp_budget(n_sel, j_count);
  const auto candidates = subsets_of_size(j_count, size);

  std::vector<double> rewards(candidates.size());
  parallel_for(
      static_cast<std::int64_t>(candidates.size()),
      [&](std::int64_t i) {
        rewards[static_cast<std::size_t>(i)] =
            eval(candidates[static_cast<std::size_t>(i)]);
      },
      exec);

  SelectionResult res;
  res.rule = "bruteforce-" + eval.kind;
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (rewards[i] > rewards[best]) best = i;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (i != best && rewards[i] == rewards[best]) res.tie_break_applied = true;
  res.subset = candidates[best];
  res.trace.emplace_back();
  for (std::size_t i = 0; i < candidates.size(); ++i)
    res.trace.back().emplace_back(candidates[i], rewards[i]);
  return res;
}

SelectionResult select_singleton(const std::vector<double>& singleton_rewards,
                                 int n_sel) {
  const int j_count = static_cast<int>(singleton_rewards.size());
  if (j_count < 1) throw ConfigError("select_singleton: J must be >= 1");
  const int size = clamp_budget(n_sel, j_count);

  std::vector<int> order(static_cast<std::size_t>(j_count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = singleton_rewards[static_cast<std::size_t>(a)];
    const double rb = singleton_rewards[static_cast<std::size_t>(b)];
    if (ra != rb) return ra > rb;
    return a < b;
  });

  SelectionResult res;
  res.rule = "singleton";
  if (size > 0 && size < j_count) {
    const double boundary =
        singleton_rewards[static_cast<std::size_t>(order[size - 1])];
    const double next =
        singleton_rewards[static_cast<std::size_t>(order[size])];
    if (boundary == next) res.tie_break_applied = true;
  }
  res.subset = Subset(std::vector<int>(order.begin(), order.begin() + size));
  res.trace.emplace_back();
  for (int j = 0; j < j_count; ++j)
    res.trace.back().emplace_back(Subset{j},
                                  singleton_rewards[static_cast<std::size_t>(j)]);
  return res;
}

SelectionResult select_greedy(const RewardEvaluator& eval, int j_count,
                              int n_sel) {
  if (j_count < 1) throw ConfigError("select_greedy: J must be >= 1");
  const int size = clamp_budget(n_sel, j_count);

  SelectionResult res;
  res.rule = "greedy-" + eval.kind;
  std::vector<int> chosen;
  for (int step = 0; step < size; ++step) {
    res.trace.emplace_back();
    int best_j = -1;
    double best_reward = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < j_count; ++j) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      std::vector<int> trial = chosen;
      trial.push_back(j);
      const Subset candidate{std::move(trial)};
      const double r = eval(candidate);
      res.trace.back().emplace_back(candidate, r);
      if (r > best_reward) {
        best_reward = r;
        best_j = j;
      } else if (r == best_reward) {
        res.tie_break_applied = true;
      }
    }
    chosen.push_back(best_j);
    std::sort(chosen.begin(), chosen.end());
  }
  res.subset = Subset(std::move(chosen));
  return res;
}

SelectionResult select_importance(const Dataset& d, int n_sel, double lambda) {
  const int j_count = d.j_count();
  const int size = clamp_budget(n_sel, j_count);

  const Matrix h_perp = residualize(d.H, d.A);
  Matrix X(d.n(), d.A.cols() + h_perp.cols());
  X.leftCols(d.A.cols()) = d.A;
  X.rightCols(h_perp.cols()) = h_perp;
  const RidgeModel fit = ridge_fit(X, d.Y, lambda);

  std::vector<double> norms(static_cast<std::size_t>(j_count));
  for (int j = 0; j < j_count; ++j) {
    const int off = static_cast<int>(d.A.cols()) + d.blocks.h_offset(j);
    const int w = d.blocks.h_widths[static_cast<std::size_t>(j)];
    norms[static_cast<std::size_t>(j)] = fit.coef.segment(off, w).norm();
  }

  SelectionResult res = select_singleton(norms, size);
  res.rule = "importance";
  return res;
}

Matrix agreement_proxy(const Dataset& d) {
  const int j_count = d.j_count();
  Matrix dist(d.n(), j_count);
  for (int j = 0; j < j_count; ++j) {
    const int wa = d.blocks.a_widths[static_cast<std::size_t>(j)];
    const int wh = d.blocks.h_widths[static_cast<std::size_t>(j)];
    if (wa != wh)
      throw ConfigError(
          "agreement_proxy: aspect " + std::to_string(j) +
          " has unequal A/H block widths; proxy distance undefined");
    dist.col(j) = (d.A.middleCols(d.blocks.a_offset(j), wa) -
                   d.H.middleCols(d.blocks.h_offset(j), wh))
                      .rowwise()
                      .norm();
  }
  const double dmax = dist.maxCoeff();
  Matrix S(d.n(), 2 * j_count);
  for (int j = 0; j < j_count; ++j) {
    S.col(2 * j).setOnes();
    if (dmax > 0.0)
      S.col(2 * j + 1) = 1.0 - (dist.col(j) / dmax).array();
    else
      S.col(2 * j + 1).setOnes();
  }
  return S;
}

SelectionResult select_agreement(const Dataset& d, int n_sel, double lambda,
                                 bool synthesize_proxy) {
  const int j_count = d.j_count();
  const int size = clamp_budget(n_sel, j_count);

  Matrix S;
  if (d.S) {
    S = *d.S;
  } else if (synthesize_proxy) {
    S = agreement_proxy(d);
  } else {
    throw ConfigError(
        "select_agreement: dataset has no agreement columns and the proxy "
        "is disabled");
  }

  // learned agreement: predict S from A, then aggregate per aspect
  const Imputer map = fit_imputer(d.A, S, lambda);
  const Matrix s_hat = map.predict(d.A);

  std::vector<double> relevance(static_cast<std::size_t>(j_count));
  std::vector<double> disagreement(static_cast<std::size_t>(j_count));
  for (int j = 0; j < j_count; ++j) {
    relevance[static_cast<std::size_t>(j)] = s_hat.col(2 * j).mean();
    disagreement[static_cast<std::size_t>(j)] =
        1.0 - s_hat.col(2 * j + 1).mean();
  }

  std::vector<int> order(static_cast<std::size_t>(j_count));
  std::iota(order.begin(), order.end(), 0);
  auto eligible = [&](int j) {
    return relevance[static_cast<std::size_t>(j)] >= 0.5;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (eligible(a) != eligible(b)) return eligible(a);
    const double da = disagreement[static_cast<std::size_t>(a)];
    const double db = disagreement[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return a < b;
  });

  SelectionResult res;
  res.rule = "agreement";
  if (size > 0 && size < j_count) {
    const int last = order[static_cast<std::size_t>(size - 1)];
    const int next = order[static_cast<std::size_t>(size)];
    if (eligible(last) == eligible(next) &&
        disagreement[static_cast<std::size_t>(last)] ==
            disagreement[static_cast<std::size_t>(next)])
      res.tie_break_applied = true;
  }
  res.subset = Subset(std::vector<int>(order.begin(), order.begin() + size));
  res.trace.emplace_back();
  for (int j = 0; j < j_count; ++j)
    res.trace.back().emplace_back(Subset{j},
                                  relevance[static_cast<std::size_t>(j)]);
  res.trace.emplace_back();
  for (int j = 0; j < j_count; ++j)
    res.trace.back().emplace_back(Subset{j},
                                  disagreement[static_cast<std::size_t>(j)]);
  return res;
}

SelectionResult select_adaptive(
    const Vector& z, const std::map<Subset, RewardEstimate>& reward_functions,
    int n_sel) {
  if (reward_functions.empty())
    throw ConfigError("select_adaptive: no candidate subsets");

  SelectionResult res;
  res.rule = "adaptive";
  res.trace.emplace_back();
  bool have_best = false;
  double best_reward = 0.0;
  for (const auto& [pi, estimate] : reward_functions) {
    if (pi.size() > n_sel)
      throw ConfigError("select_adaptive: candidate " + pi.to_string() +
                        " exceeds the budget");
    const double r = estimate.at(z);
    res.trace.back().emplace_back(pi, r);
    if (!have_best || r > best_reward) {
      have_best = true;
      best_reward = r;
      res.subset = pi;
    } else if (r == best_reward) {
      res.tie_break_applied = true;
    }
  }
  return res;
}

}  // namespace asel
