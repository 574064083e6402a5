#include "asel/reward_nonparam.hpp"

#include <cmath>

namespace asel {

ContextKind parse_context(const std::string& name) {
  if (name == "identity") return ContextKind::Identity;
  if (name == "constant") return ContextKind::Constant;
  throw ConfigError("unknown context kind '" + name + "'");
}

Matrix context_matrix(const Dataset& d, ContextKind kind) {
  if (kind == ContextKind::Identity) return d.A;
  return Matrix::Ones(d.n(), 1);
}

PseudoOutcomes pseudo_outcomes(const Vector& y, const Vector& m_oof) {
  if (y.size() != m_oof.size())
    throw DimensionError("pseudo_outcomes: lengths differ");
  if (!all_finite(y) || !all_finite(m_oof))
    throw IngestError("pseudo_outcomes: non-finite input");
  PseudoOutcomes out;
  out.values = 2.0 * y.cwiseProduct(m_oof) - m_oof.cwiseProduct(m_oof);
  return out;
}

double RewardEstimate::at(const Vector& z) const {
  if (kind == Kind::Adaptive && context_model) {
    if (z.size() != context_model->coef.size())
      throw DimensionError("RewardEstimate::at: context width mismatch");
    return context_model->coef.dot(z) + context_model->intercept;
  }
  return value;
}

RewardEstimate reward_nonadaptive(const PseudoOutcomes& phi,
                                  const Subset& pi) {
  const int n = static_cast<int>(phi.values.size());
  if (n < 2)
    throw InsufficientDataError("reward_nonadaptive: need at least 2 rows");
  RewardEstimate est;
  est.kind = RewardEstimate::Kind::NonAdaptive;
  est.subset = pi;
  est.n_used = n;
  est.value = phi.values.mean();
  const double ss = (phi.values.array() - est.value).square().sum();
  est.std_error = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
  return est;
}

RewardEstimate reward_adaptive(const PseudoOutcomes& phi, const Matrix& Z,
                               double second_stage_lambda, const Subset& pi) {
  if (Z.rows() != phi.values.size())
    throw DimensionError("reward_adaptive: row counts differ");

  const Eigen::RowVectorXd zmax = Z.colwise().maxCoeff();
  const Eigen::RowVectorXd zmin = Z.colwise().minCoeff();
  if ((zmax - zmin).maxCoeff() <= 0.0) {
    RewardEstimate est = reward_nonadaptive(phi, pi);
    est.degenerate_context_fallback = true;
    return est;
  }

  RewardEstimate est;
  est.kind = RewardEstimate::Kind::Adaptive;
  est.subset = pi;
  est.n_used = static_cast<int>(phi.values.size());
  est.value = phi.values.mean();
  est.context_model = ridge_fit(Z, phi.values, second_stage_lambda);
  return est;
}

RewardEstimate estimate_reward_np(const Dataset& d, const Subset& pi,
                                  const NpRewardConfig& cfg) {
  return estimate_reward_np(d, pi, cfg,
                            make_folds(d.n(), cfg.k_folds, cfg.seed));
}

RewardEstimate estimate_reward_np(const Dataset& d, const Subset& pi,
                                  const NpRewardConfig& cfg,
                                  const FoldPlan& folds) {
  pi.check_range(d.j_count());
  const Matrix X = design_for_subset(d, pi);
  const Vector m = cross_fit_oof(X, d.Y, folds, cfg.lambda);
  PseudoOutcomes phi = pseudo_outcomes(d.Y, m);
  phi.k_folds = folds.k;
  phi.lambda = cfg.lambda;
  if (!cfg.adaptive) return reward_nonadaptive(phi, pi);
  return reward_adaptive(phi, context_matrix(d, cfg.context),
                         cfg.second_stage_lambda, pi);
}

}  // namespace asel
