#include "asel/regression.hpp"

#include "asel/dgp.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace asel;

TEST_CASE("ridge_fit recovers exact linear data at lambda 0") {
  Matrix x(3, 1);
  x << 1, 2, 3;
  Vector y(3);
  y << 2, 4, 6;
  const RidgeModel m = ridge_fit(x, y, 0.0);
  CHECK(m.coef(0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(m.intercept == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("huge penalty shrinks to the mean") {
  Matrix x(4, 2);
  x << 1, 0.5, 2, -1, 3, 2, 4, 0;
  Vector y(4);
  y << 1, 3, 2, 4;
  const RidgeModel m = ridge_fit(x, y, 1e12);
  CHECK(m.coef.norm() < 1e-9);
  const Vector pred = ridge_predict(m, x);
  for (int i = 0; i < 4; ++i)
    CHECK(pred(i) == doctest::Approx(y.mean()).epsilon(1e-6));
}

TEST_CASE("penalized solution matches the closed-form normal equations") {
  // centered Gram + lambda, cross moment, intercept from the means
  Matrix x(2, 1);
  x << 1, 2;
  Vector y(2);
  y << 1, 2;
  const double lambda = 1.0;
  const double xc = 0.5;  // centered first row is -0.5, second 0.5
  const double gram = 2 * xc * xc + lambda;
  const double cross = 2 * xc * xc;  // x and y centered identically
  const double slope = cross / gram;
  const double intercept = 1.5 - 1.5 * slope;
  const RidgeModel m = ridge_fit(x, y, lambda);
  CHECK(m.coef(0) == doctest::Approx(slope).epsilon(1e-12));
  CHECK(m.intercept == doctest::Approx(intercept).epsilon(1e-12));
}

TEST_CASE("lambda 0 equals ordinary least squares on random designs") {
  for (int rep = 0; rep < 20; ++rep) {
    Rng rng(derive_seed(11, static_cast<std::uint64_t>(rep)));
    const int n = 30, p = 4;
    Matrix x(n, p);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
      y(i) = rng.normal();
    }
    const RidgeModel m = ridge_fit(x, y, 0.0);

    // independent route: QR on the design with an explicit constant column
    Matrix xa(n, p + 1);
    xa.leftCols(p) = x;
    xa.col(p).setOnes();
    const Vector sol = xa.colPivHouseholderQr().solve(y);
    CHECK((m.coef - sol.head(p)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(m.intercept - sol(p)) < 1e-8);
  }
}

TEST_CASE("rank-deficient Gram at lambda 0 names the remedy") {
  Matrix x(5, 2);
  for (int i = 0; i < 5; ++i) {
    x(i, 0) = i;
    x(i, 1) = 2.0 * i;  // exact duplicate direction
  }
  Vector y = Vector::Ones(5);
  CHECK_THROWS_WITH_AS(ridge_fit(x, y, 0.0),
                       doctest::Contains("lambda > 0"), SingularityError);
  CHECK_NOTHROW(ridge_fit(x, y, 0.5));
}

TEST_CASE("ridge_predict basics") {
  RidgeModel m;
  m.coef = Vector::Zero(2);
  m.intercept = 3.5;
  const Matrix x = Matrix::Random(4, 2);
  const Vector pred = ridge_predict(m, x);
  for (int i = 0; i < 4; ++i) CHECK(pred(i) == 3.5);
  CHECK_THROWS_AS(ridge_predict(m, Matrix::Random(4, 3)), DimensionError);
}

TEST_CASE("residualize projects out the AI signal") {
  SUBCASE("self projection is zero") {
    const Matrix a = Matrix::Random(20, 3);
    const Matrix r = residualize(a, a);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("orthogonal zero-mean input passes through") {
    Matrix a(4, 1), h(4, 1);
    a << 1, 1, -1, -1;
    h << 1, -1, 1, -1;
    const Matrix r = residualize(h, a);
    CHECK((r - h).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("four-row case against the explicit moment formula") {
    Matrix a(4, 2), h(4, 1);
    a << 0.2, -1.0, 1.4, 0.3, -0.7, 2.0, 0.9, -0.5;
    h << 1.0, -2.0, 0.5, 3.0;
    const Eigen::RowVectorXd am = a.colwise().mean();
    const Eigen::RowVectorXd hm = h.colwise().mean();
    const Matrix ac = a.rowwise() - am;
    const Matrix hc = h.rowwise() - hm;
    const Matrix expected =
        hc - ac * (ac.transpose() * ac).inverse() * (ac.transpose() * hc);
    CHECK((residualize(h, a) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("output moments satisfy the contract") {
    Rng rng(3);
    Matrix a(50, 3), h(50, 4);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
      for (int j = 0; j < 4; ++j) h(i, j) = rng.normal() + 0.5 * a(i, 0);
    }
    const Matrix r = residualize(h, a);
    CHECK(r.colwise().mean().cwiseAbs().maxCoeff() < 1e-10);
    const Matrix cross = (a.rowwise() - a.colwise().mean()).transpose() * r /
                         (a.rows() - 1.0);
    CHECK(cross.cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("singular Gram with stabilization disabled") {
    const Matrix a = Matrix::Random(3, 5);  // N <= d_A
    const Matrix h = Matrix::Random(3, 1);
    CHECK_THROWS_AS(residualize(h, a, false), SingularityError);
    CHECK_NOTHROW(residualize(h, a, true));
  }
}

TEST_CASE("make_folds balance and determinism") {
  const FoldPlan even = make_folds(10, 5, 7);
  std::vector<int> sizes(5, 0);
  for (int f : even.assignment) ++sizes[static_cast<std::size_t>(f)];
  for (int s : sizes) CHECK(s == 2);

  const FoldPlan again = make_folds(10, 5, 7);
  CHECK(even.assignment == again.assignment);
  CHECK(make_folds(10, 5, 8).assignment != even.assignment);

  const FoldPlan uneven = make_folds(7, 3, 1);
  std::vector<int> sz(3, 0);
  for (int f : uneven.assignment) ++sz[static_cast<std::size_t>(f)];
  std::sort(sz.begin(), sz.end());
  CHECK(sz == std::vector<int>{2, 2, 3});

  CHECK_THROWS_AS(make_folds(3, 4, 0), ConfigError);
  CHECK_THROWS_AS(make_folds(3, 1, 0), ConfigError);
}

TEST_CASE("cross_fit_oof") {
  SUBCASE("constant target predicts the constant") {
    const Matrix x = Matrix::Random(12, 2);
    const Vector y = Vector::Constant(12, 4.25);
    const Vector m = cross_fit_oof(x, y, make_folds(12, 4, 1), 1.0);
    for (int i = 0; i < 12; ++i)
      CHECK(m(i) == doctest::Approx(4.25).epsilon(1e-12));
  }
  SUBCASE("leave-one-out on exact linear data reproduces y") {
    Matrix x(6, 1);
    x << 1, 2, 3, 4, 5, 6;
    Vector y = 3.0 * x.col(0);
    y.array() += 1.0;
    const Vector m = cross_fit_oof(x, y, make_folds(6, 6, 0), 0.0);
    CHECK((m - y).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("tiny training complement is rejected") {
    const Matrix x = Matrix::Random(2, 1);
    const Vector y = Vector::Random(2);
    CHECK_THROWS_AS(cross_fit_oof(x, y, make_folds(2, 2, 0), 0.5),
                    InsufficientDataError);
  }
  SUBCASE("out-of-fold predictions approach the oracle conditional mean") {
    const auto spec = dgp::preset("symmetric");
    const Dataset d = dgp::sample(spec, 5000, 21);
    const Subset pi{0};
    const Matrix x = design_for_subset(d, pi);
    const Vector m = cross_fit_oof(x, d.Y, make_folds(d.n(), 5, 2), 1.0);
    const auto cm = dgp::oracle_conditional_mean(spec, pi);
    double gap = 0.0;
    for (int i = 0; i < d.n(); ++i) {
      const double diff = m(i) - cm.at_obs(x.row(i).transpose());
      gap += diff * diff;
    }
    gap /= d.n();
    const double var_y = dgp::oracle_moments(spec, pi).var_y;
    CHECK(gap < 0.05 * var_y);
  }
}

TEST_CASE("AI-block coefficients decouple from the orthogonalized human block") {
  const auto spec = dgp::preset("symmetric", 6);
  const Dataset d = dgp::sample(spec, 800, 5);
  const RidgeModel a_only = ridge_fit(d.A, d.Y, 0.0);

  Vector first_coef;
  for (int j = 0; j < d.j_count(); ++j) {
    const Matrix h_perp = residualize(d.h_columns(Subset{j}), d.A);
    Matrix x(d.n(), d.A.cols() + h_perp.cols());
    x << d.A, h_perp;
    const RidgeModel fit = ridge_fit(x, d.Y, 0.0);
    const Vector a_coef = fit.coef.head(d.A.cols());
    CHECK((a_coef - a_only.coef).cwiseAbs().maxCoeff() < 1e-8);
    if (j == 0)
      first_coef = a_coef;
    else
      CHECK((a_coef - first_coef).cwiseAbs().maxCoeff() < 1e-8);
  }
}
