#include "asel/reward_linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace asel {

MomentBundle moment_bundle(const Dataset& d, const Subset& pi) {
  pi.check_range(d.j_count());
  const Matrix V = design_for_subset(d, pi);
  const int n = d.n();
  const int p = static_cast<int>(V.cols());

  Matrix M(n, p + 2);
  M.leftCols(p) = V;
  M.col(p).setOnes();
  M.col(p + 1) = d.Y;

  MomentBundle mb;
  mb.n = n;
  mb.p = p;
  mb.second_moment = (M.transpose() * M) / static_cast<double>(n);
  mb.mean.resize(p + 1);
  mb.mean.head(p) = V.colwise().mean();
  mb.mean(p) = d.Y.mean();
  return mb;
}

RidgeModel theta_hat(const Dataset& d, const Subset& pi, double lambda) {
  pi.check_range(d.j_count());
  return ridge_fit(design_for_subset(d, pi), d.Y, lambda);
}

RewardEstimate reward_linear_nonadaptive(const Dataset& d, const Subset& pi,
                                         double lambda) {
  const RidgeModel theta = theta_hat(d, pi, lambda);
  const Matrix V = design_for_subset(d, pi);
  const Vector fitted = ridge_predict(theta, V);
  const double reward = fitted.squaredNorm() / static_cast<double>(d.n());

  // same number through the explicit quadratic form
  const MomentBundle mb = moment_bundle(d, pi);
  Vector theta_aug(mb.p + 1);
  theta_aug.head(mb.p) = theta.coef;
  theta_aug(mb.p) = theta.intercept;
  const double quad = theta_aug.dot(mb.xx() * theta_aug);
  if (std::abs(quad - reward) > 1e-10 * std::max(1.0, std::abs(reward)))
    throw Error("reward_linear_nonadaptive: internal consistency check "
                "failed");

  RewardEstimate est;
  est.kind = RewardEstimate::Kind::NonAdaptive;
  est.subset = pi;
  est.n_used = d.n();
  est.value = reward;
  return est;
}

double reward_linear_adaptive(const Dataset& d, const Subset& pi,
                              const Vector& z, double lambda,
                              int k_neighbors) {
  pi.check_range(d.j_count());
  const Matrix& Z = d.A;
  if (z.size() != Z.cols())
    throw DimensionError("reward_linear_adaptive: z width mismatch");
  const int n = d.n();
  int k = k_neighbors;
  if (k <= 0) k = static_cast<int>(std::ceil(std::sqrt(n)));
  if (k > n)
    throw ConfigError("reward_linear_adaptive: k_neighbors exceeds N");

  const Eigen::RowVectorXd zmax = Z.colwise().maxCoeff();
  const Eigen::RowVectorXd zmin = Z.colwise().minCoeff();
  if ((zmax - zmin).maxCoeff() <= 0.0) k = n;  // constant context

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Vector dist(n);
  for (int i = 0; i < n; ++i)
    dist(i) = (Z.row(i).transpose() - z).squaredNorm();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dist(a) != dist(b)) return dist(a) < dist(b);
    return a < b;
  });

  const RidgeModel theta = theta_hat(d, pi, lambda);
  const Matrix V = design_for_subset(d, pi);
  Vector theta_aug(V.cols() + 1);
  theta_aug.head(V.cols()) = theta.coef;
  theta_aug(V.cols()) = theta.intercept;

  // average of (x 1)(x 1)' over the neighborhood, contracted with theta
  double acc = 0.0;
  for (int r = 0; r < k; ++r) {
    const int i = order[static_cast<std::size_t>(r)];
    const double fit = V.row(i).dot(theta.coef) + theta.intercept;
    acc += fit * fit;
  }
  return acc / k;
}

VarianceReport asymptotic_variance(const Dataset& d, const Subset& pi,
                                   double level) {
  if (!(level > 0.0 && level < 1.0))
    throw ConfigError("asymptotic_variance: level must be in (0,1)");
  const MomentBundle mb = moment_bundle(d, pi);
  const int p = mb.p;
  const int n = mb.n;

  const Matrix sxx = mb.xx();
  const Vector sxy = mb.xy();

  Eigen::LDLT<Matrix> ldlt(sxx);
  const Vector diag = ldlt.vectorD();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (!(dmax > 0.0) || diag.minCoeff() <= 1e-12 * dmax)
    throw SingularityError(
        "asymptotic_variance: singular regressor second-moment matrix");
  const Vector theta = ldlt.solve(sxy);

  VarianceReport vr;
  vr.n = n;
  vr.level = level;
  vr.reward = sxy.dot(theta);

  // influence values w_i = 2 y_i yhat_i - yhat_i^2
  const Matrix V = design_for_subset(d, pi);
  const Vector fitted = (V * theta.head(p)).array() + theta(p);
  const Vector w =
      2.0 * d.Y.cwiseProduct(fitted) - fitted.cwiseProduct(fitted);
  const double w_mean = w.mean();
  vr.sigma2 = (w.array() - w_mean).square().sum() / static_cast<double>(n);
  vr.std_error = std::sqrt(vr.sigma2 / static_cast<double>(n));

  const double zq = normal_quantile(0.5 + level / 2.0);
  vr.ci_low = vr.reward - zq * vr.std_error;
  vr.ci_high = vr.reward + zq * vr.std_error;

  // gradient of f(S) = S_xy' S_xx^{-1} S_xy as a symmetric matrix over the
  // M = (X_hat, Y) coordinates, stored column-major
  const int dm = p + 2;
  Matrix G = Matrix::Zero(dm, dm);
  G.topLeftCorner(p + 1, p + 1) = -theta * theta.transpose();
  G.col(dm - 1).head(p + 1) = theta;
  G.row(dm - 1).head(p + 1) = theta.transpose();
  vr.gradient = Eigen::Map<const Vector>(G.data(), dm * dm);

  vr.low_rank_warning = n <= dm * dm;
  return vr;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("normal_quantile: p must be in (0,1)");

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};

  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace asel
