#pragma once

#include "asel/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace asel::dgp {

// One Gaussian component over the stacked signal vector (A, H).
struct Component {
  double weight = 1.0;
  Vector mu;
  Matrix sigma;
};

// Synthetic generator with exactly computable population quantities.
//
//   (A, H) ~ sum_r weight_r * N(mu_r, Sigma_r)
//   Y = gamma'A + beta'H + intercept + noise_std * eps,  eps ~ N(0,1)
//
// With a single component the conditional mean E[Y | A, H_pi] is an affine
// function of the observed signals and every reward closed form below is
// exact. A second component is supported so that Var(H | A) can vary with A;
// in that regime the conditional-mean and conditional-moment oracles stay
// exact (posterior-weighted Gaussian conditioning) while the squared-mean
// reward oracle is only defined for single-component specs.
struct DgpSpec {
  std::string name;
  std::vector<int> a_widths;
  std::vector<int> h_widths;
  std::vector<Component> components;
  Vector gamma;
  Vector beta;
  double intercept = 0.0;
  double noise_std = 1.0;
  std::optional<Vector> ai_bias;  // bookkeeping; already encoded in mu
  std::uint64_t seed = 0;

  int j_count() const { return static_cast<int>(a_widths.size()); }
  int d_a() const;
  int d_h() const;
  int dim() const { return d_a() + d_h(); }
  bool single_component() const { return components.size() == 1; }

  void validate() const;
};

// Builder for the common proxy structure: H ~ N(mu_h, Sigma_H) and
// A = bias + loading * (H - mu_h) + noise, noise ~ N(0, noise_a^2 I).
DgpSpec make_proxy_spec(int j_count, const Matrix& sigma_h, double loading,
                        double noise_a, const Vector& bias,
                        const Vector& gamma, const Vector& beta,
                        double intercept, double noise_std);

// Named presets: symmetric, planted-pair, single-informative, biased-ai,
// heteroskedastic. j_count = 0 keeps each preset's default J.
DgpSpec preset(const std::string& name, int j_count = 0);
std::vector<std::string> preset_names();

DgpSpec load_dgp(const std::string& path);
void save_dgp(const DgpSpec& spec, const std::string& path);

Dataset sample(const DgpSpec& spec, int n, std::uint64_t seed);

// Exact E[Y | A=a, H_pi=h_pi]. Affine for single-component specs (the affine
// coefficients are exposed for moment arithmetic); posterior-weighted affine
// for mixtures.
class ConditionalMean {
 public:
  double operator()(const Vector& a, const Vector& h_pi) const;
  double at_obs(const Vector& obs) const;  // obs = (a, h_pi) stacked

  bool affine() const { return comps_.size() == 1; }
  // valid only when affine()
  double affine_intercept() const;
  const Vector& affine_weights() const;

  int obs_dim() const { return obs_dim_; }

 private:
  friend ConditionalMean oracle_conditional_mean(const DgpSpec&,
                                                 const Subset&);
  struct CompTerm {
    double log_weight;
    Vector mu_obs;
    Eigen::LLT<Matrix> chol;  // of Sigma_obs
    double log_norm;
    double alpha0;
    Vector w;
  };
  std::vector<CompTerm> comps_;
  int obs_dim_ = 0;
  int d_a_ = 0;
};

ConditionalMean oracle_conditional_mean(const DgpSpec& spec, const Subset& pi);

// Population moments of X_hat = (A, H_pi, 1) and of Y; exact for any number
// of components. theta is the population linear projection coefficient.
struct OracleMoments {
  Matrix xhat_second_moment;
  Vector xhat_y;
  double mean_y = 0.0;
  double var_y = 0.0;
  Vector theta;
};

OracleMoments oracle_moments(const DgpSpec& spec, const Subset& pi);

// E[(E[Y | A, H_pi])^2]; single-component specs only.
double oracle_reward(const DgpSpec& spec, const Subset& pi);

// E[X_hat X_hat' | A = z] and the contextual linear reward
// theta' E[X_hat X_hat' | z] theta; exact for mixtures too.
Matrix oracle_conditional_xhat_second_moment(const DgpSpec& spec,
                                             const Subset& pi,
                                             const Vector& z);
double oracle_adaptive_linear_reward(const DgpSpec& spec, const Subset& pi,
                                     const Vector& z);

// argmax of oracle_reward over subsets of size <= n_sel (ties resolved to
// the first subset in size-then-lexicographic order). J <= 20.
Subset oracle_optimal_subset(const DgpSpec& spec, int n_sel);

// Symmetric positive semidefinite solve via eigendecomposition with a
// relative cutoff; stable for the deliberately near-singular oracle cases.
Vector spectral_solve(const Matrix& sym, const Vector& rhs,
                      double rel_tol = 1e-13);

}  // namespace asel::dgp
