#include "asel/reward_linear.hpp"

#include "asel/dgp.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

using namespace asel;

namespace {

Dataset exact_linear_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.blocks.a_widths = {1, 1};
  d.blocks.h_widths = {1, 1};
  d.A.resize(n, 2);
  d.H.resize(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) {
      d.A(i, j) = rng.normal();
      d.H(i, j) = rng.normal();
    }
  // Y depends on A and H_{0} only, exactly
  d.Y = 0.7 * d.A.col(0) - 0.4 * d.A.col(1) + 1.2 * d.H.col(0);
  d.Y.array() += 0.9;
  return d;
}

double bootstrap_se(const Dataset& d, const Subset& pi, int b_reps,
                    std::uint64_t seed) {
  std::vector<double> values;
  for (int b = 0; b < b_reps; ++b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    std::vector<int> rows(static_cast<std::size_t>(d.n()));
    for (auto& r : rows)
      r = static_cast<int>(rng.below(static_cast<std::uint64_t>(d.n())));
    values.push_back(
        reward_linear_nonadaptive(d.rows(rows), pi, 0.0).value);
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / b_reps;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (b_reps - 1));
}

}  // namespace

TEST_CASE("theta_hat recovers exact coefficients at lambda 0") {
  const Dataset d = exact_linear_dataset(50, 71);
  const RidgeModel m = theta_hat(d, Subset{0}, 0.0);
  CHECK(m.coef(0) == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(m.coef(1) == doctest::Approx(-0.4).epsilon(1e-8));
  CHECK(m.coef(2) == doctest::Approx(1.2).epsilon(1e-8));
  CHECK(m.intercept == doctest::Approx(0.9).epsilon(1e-8));
}

TEST_CASE("empty subset regresses on the AI block alone") {
  const Dataset d = exact_linear_dataset(40, 73);
  const RidgeModel a = theta_hat(d, Subset::empty(), 0.5);
  const RidgeModel b = ridge_fit(d.A, d.Y, 0.5);
  CHECK(test::bit_equal(a.coef, b.coef));
  CHECK(a.intercept == b.intercept);
}

TEST_CASE("theta_hat approaches the population projection") {
  const auto spec = dgp::preset("symmetric");
  const Dataset d = dgp::sample(spec, 10000, 75);
  const Subset pi{0, 4};
  const RidgeModel m = theta_hat(d, pi, 0.0);
  const auto om = dgp::oracle_moments(spec, pi);
  Vector fitted(m.coef.size() + 1);
  fitted.head(m.coef.size()) = m.coef;
  fitted(m.coef.size()) = m.intercept;
  CHECK((fitted - om.theta).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("reward edge cases") {
  Dataset d = test::tiny_dataset();
  SUBCASE("zero target gives zero reward") {
    d.Y.setZero();
    CHECK(reward_linear_nonadaptive(d, Subset{0}, 1.0).value ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("constant target gives the squared constant") {
    d.Y.setConstant(-2.5);
    CHECK(reward_linear_nonadaptive(d, Subset::full(2), 0.7).value ==
          doctest::Approx(6.25).epsilon(1e-12));
  }
}

TEST_CASE("estimate sits within bootstrap error of the population reward") {
  const auto spec = dgp::preset("planted-pair");
  const Dataset d = dgp::sample(spec, 5000, 77);
  for (const Subset& pi : {Subset{2}, Subset{2, 7}, Subset{0, 5}}) {
    const double est = reward_linear_nonadaptive(d, pi, 0.0).value;
    const double se = bootstrap_se(d, pi, 120, 78);
    CHECK(std::abs(est - dgp::oracle_reward(spec, pi)) <= 3.0 * se);
  }
}

TEST_CASE("moment-form and fitted-value-form rewards agree at lambda 0") {
  const Dataset d = dgp::sample(dgp::preset("symmetric", 5), 400, 79);
  for (const Subset& pi : {Subset::empty(), Subset{1}, Subset{0, 3}}) {
    const double ridge_route = reward_linear_nonadaptive(d, pi, 0.0).value;
    const double moment_route = asymptotic_variance(d, pi).reward;
    CHECK(std::abs(ridge_route - moment_route) < 1e-10);
  }
}

TEST_CASE("in-sample reward is monotone under inclusion at lambda 0") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = dgp::sample(dgp::preset("symmetric", 5), 300, seed);
    const auto all = subsets_up_to(5, 5);
    std::map<std::uint64_t, double> reward;
    for (const Subset& pi : all)
      reward[pi.mask()] = reward_linear_nonadaptive(d, pi, 0.0).value;
    for (const Subset& small : all)
      for (const Subset& big : all) {
        if ((small.mask() & big.mask()) != small.mask()) continue;
        CHECK(reward[small.mask()] <= reward[big.mask()] + 1e-10);
      }
  }
}

TEST_CASE("affine target transforms shift every reward the same way") {
  const Dataset d = dgp::sample(dgp::preset("symmetric", 4), 500, 83);
  Dataset d2 = d;
  d2.Y = 2.0 * d.Y;
  d2.Y.array() += 3.0;
  const double ybar = d.Y.mean();
  for (const Subset& pi : subsets_up_to(4, 2)) {
    const double r = reward_linear_nonadaptive(d, pi, 0.0).value;
    const double r2 = reward_linear_nonadaptive(d2, pi, 0.0).value;
    CHECK(r2 == doctest::Approx(4.0 * r + 12.0 * ybar + 9.0).epsilon(1e-8));
  }
}

TEST_CASE("contextual linear reward") {
  SUBCASE("k = N equals the non-adaptive value") {
    const Dataset d = dgp::sample(dgp::preset("symmetric", 3), 250, 85);
    const Vector z = d.A.row(7).transpose();
    const double adaptive = reward_linear_adaptive(d, Subset{1}, z, 1.0, d.n());
    const double flat = reward_linear_nonadaptive(d, Subset{1}, 1.0).value;
    CHECK(adaptive == doctest::Approx(flat).epsilon(1e-12));
  }
  SUBCASE("constant context equals the non-adaptive value for any z") {
    Dataset d = test::tiny_dataset();
    d.A.setConstant(1.0);
    Dataset big;
    big.blocks = d.blocks;
    big.A = d.A.replicate(4, 1);
    big.H = d.H.replicate(4, 1);
    big.Y = d.Y.replicate(4, 1);
    Vector z(2);
    z << 5.0, -3.0;
    const double adaptive = reward_linear_adaptive(big, Subset{0}, z, 1.0, 3);
    const double flat = reward_linear_nonadaptive(big, Subset{0}, 1.0).value;
    CHECK(adaptive == doctest::Approx(flat).epsilon(1e-12));
  }
  SUBCASE("high-variance contexts carry higher reward") {
    const auto spec = dgp::preset("heteroskedastic");
    const Dataset d = dgp::sample(spec, 6000, 87);
    const int J = spec.j_count();
    const Subset pi{0};
    const Vector z_lo = Vector::Constant(J, -1.2);
    const Vector z_hi = Vector::Constant(J, 1.2);
    const double lo = reward_linear_adaptive(d, pi, z_lo, 1.0);
    const double hi = reward_linear_adaptive(d, pi, z_hi, 1.0);
    CHECK(hi > lo);
    CHECK(dgp::oracle_adaptive_linear_reward(spec, pi, z_hi) >
          dgp::oracle_adaptive_linear_reward(spec, pi, z_lo));
    // the kNN estimate should be in the oracle's neighborhood
    CHECK(hi == doctest::Approx(
                    dgp::oracle_adaptive_linear_reward(spec, pi, z_hi))
                    .epsilon(0.35));
  }
  SUBCASE("k out of range") {
    const Dataset d = test::tiny_dataset();
    CHECK_THROWS_AS(
        reward_linear_adaptive(d, Subset{0}, Vector::Zero(2), 1.0, 99),
        ConfigError);
  }
}

TEST_CASE("delta-method variance report") {
  SUBCASE("interval brackets the point estimate and sigma2 is nonnegative") {
    const Dataset d = dgp::sample(dgp::preset("symmetric", 4), 800, 91);
    const VarianceReport vr = asymptotic_variance(d, Subset{0, 2});
    CHECK(vr.sigma2 >= 0.0);
    CHECK(vr.ci_low <= vr.reward);
    CHECK(vr.reward <= vr.ci_high);
    CHECK(!vr.low_rank_warning);
  }
  SUBCASE("independent outcome: interval covers zero in most replications") {
    const auto spec = test::independence_spec(2);
    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const Dataset d =
          dgp::sample(spec, 500, derive_seed(93, static_cast<std::uint64_t>(rep)));
      const VarianceReport vr = asymptotic_variance(d, Subset{0});
      if (vr.ci_low <= 0.0 && 0.0 <= vr.ci_high) ++covered;
    }
    CHECK(covered >= 90);
  }
  SUBCASE("scaling the data scales the report homogeneously") {
    const Dataset d = dgp::sample(dgp::preset("symmetric", 3), 400, 95);
    Dataset scaled = d;
    const double c = 2.5;
    scaled.A *= c;
    scaled.H *= c;
    scaled.Y *= c;
    const VarianceReport base = asymptotic_variance(d, Subset{1});
    const VarianceReport big = asymptotic_variance(scaled, Subset{1});
    CHECK(big.reward == doctest::Approx(c * c * base.reward).epsilon(1e-8));
    CHECK(big.sigma2 ==
          doctest::Approx(c * c * c * c * base.sigma2).epsilon(1e-8));
    const double t_base = base.reward / base.std_error;
    const double t_big = big.reward / big.std_error;
    CHECK(t_big == doctest::Approx(t_base).epsilon(1e-8));
  }
  SUBCASE("stored gradient contracts the explicit moment covariance") {
    const Dataset d = dgp::sample(dgp::preset("symmetric", 1), 60, 97);
    const Subset pi{0};
    const VarianceReport vr = asymptotic_variance(d, pi);

    // explicit Gamma: sample covariance of vec(M M') with M = (A, H_0, 1, Y)
    const int dm = 4;
    Matrix m_rows(d.n(), dm);
    m_rows << d.A, d.H, Matrix::Ones(d.n(), 1), d.Y;
    Matrix vecs(d.n(), dm * dm);
    for (int i = 0; i < d.n(); ++i) {
      const Matrix outer =
          m_rows.row(i).transpose() * m_rows.row(i);
      vecs.row(i) = Eigen::Map<const Eigen::RowVectorXd>(outer.data(),
                                                         dm * dm);
    }
    const Eigen::RowVectorXd mean = vecs.colwise().mean();
    const Matrix centered = vecs.rowwise() - mean;
    const Matrix gamma =
        centered.transpose() * centered / static_cast<double>(d.n());
    REQUIRE(vr.gradient.size() == dm * dm);
    const double sigma2 = vr.gradient.dot(gamma * vr.gradient);
    CHECK(sigma2 == doctest::Approx(vr.sigma2).epsilon(1e-10));
    CHECK(!vr.low_rank_warning);  // n = 60 > dim(vec(MM')) = 16
  }
  SUBCASE("small samples trip the low-rank flag") {
    const Dataset d = dgp::sample(dgp::preset("symmetric", 1), 12, 98);
    CHECK(asymptotic_variance(d, Subset{0}).low_rank_warning);
  }
  SUBCASE("levels are validated") {
    const Dataset d = test::tiny_dataset();
    CHECK_THROWS_AS(asymptotic_variance(d, Subset{0}, 1.5), ConfigError);
  }
}

TEST_CASE("normal quantile values") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-7));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(normal_quantile(0.75) == doctest::Approx(0.67448975).epsilon(1e-6));
  CHECK(normal_quantile(0.025) ==
        doctest::Approx(-1.959963985).epsilon(1e-7));
}
