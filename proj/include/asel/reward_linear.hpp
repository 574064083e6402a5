#pragma once

#include "asel/dataset.hpp"
#include "asel/regression.hpp"
#include "asel/reward_nonparam.hpp"

namespace asel {

// Sample moments of the stacked vector M = (A, H_pi, 1, Y); the constant sits
// inside the regressor block so the intercept needs no special handling.
struct MomentBundle {
  Matrix second_moment;  // (p+2) x (p+2), p = d_a + width(H_pi)
  Vector mean;           // of (A, H_pi, Y), length p+1
  int n = 0;
  int p = 0;  // regressor count excluding the constant

  Matrix xx() const { return second_moment.topLeftCorner(p + 1, p + 1); }
  Vector xy() const { return second_moment.col(p + 1).head(p + 1); }
};

MomentBundle moment_bundle(const Dataset& d, const Subset& pi);

// Ridge coefficients for Y on (A, H_pi): gamma block first, then beta block,
// intercept separate.
RidgeModel theta_hat(const Dataset& d, const Subset& pi, double lambda);

// R_hat = theta' (1/N sum x x') theta, computed as the mean squared fitted
// value (the two agree by algebra; checked internally).
RewardEstimate reward_linear_nonadaptive(const Dataset& d, const Subset& pi,
                                         double lambda);

// Contextual linear reward theta' E[x x' | Z=z] theta with the conditional
// second moment estimated by averaging over the k nearest rows in Z
// (Euclidean; Z is the AI block). k <= 0 selects ceil(sqrt(N)). If Z is
// constant across rows the neighborhood widens to every row.
double reward_linear_adaptive(const Dataset& d, const Subset& pi,
                              const Vector& z, double lambda,
                              int k_neighbors = 0);

// Plug-in delta-method variance of the lambda=0 linear reward and a normal
// confidence interval. sigma2 is the variance of the influence term
// 2*y*yhat - yhat^2; identical to alpha' Gamma alpha with Gamma the sample
// covariance of vec(M M') contracted against the stored gradient.
struct VarianceReport {
  double reward = 0.0;
  double sigma2 = 0.0;
  double std_error = 0.0;  // sqrt(sigma2 / n)
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
  Vector gradient;  // vec of the symmetric gradient matrix over M
  int n = 0;
  bool low_rank_warning = false;  // n <= dim(vec(M M'))
};

VarianceReport asymptotic_variance(const Dataset& d, const Subset& pi,
                                   double level = 0.95);

// inverse standard normal CDF (Acklam's rational approximation, |e| < 1e-9)
double normal_quantile(double p);

}  // namespace asel
