#include "asel/regression.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

namespace asel {

namespace {

constexpr double kPivotRelTol = 1e-12;

// Solve (Xc'Xc + lambda I) b = rhs with a rank check at lambda == 0.
Vector solve_penalized(const Matrix& gram_plus, const Vector& rhs,
                       bool check_rank) {
  Eigen::LDLT<Matrix> ldlt(gram_plus);
  if (check_rank) {
    const Vector d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(dmax > 0.0) || d.minCoeff() <= kPivotRelTol * dmax)
      throw SingularityError(
          "ridge_fit: Gram matrix is rank-deficient at lambda=0; "
          "use lambda > 0");
  }
  return ldlt.solve(rhs);
}

}  // namespace

RidgeModel ridge_fit(const Matrix& X, const Vector& y, double lambda) {
  if (X.rows() != y.size())
    throw DimensionError("ridge_fit: X rows and y length differ");
  if (X.rows() < 1) throw InsufficientDataError("ridge_fit: empty design");
  if (lambda < 0.0) throw ConfigError("ridge_fit: lambda must be >= 0");
  if (!all_finite(X) || !all_finite(y))
    throw IngestError("ridge_fit: non-finite input");

  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  const Matrix Xc = X.rowwise() - x_mean;
  const Vector yc = y.array() - y_mean;

  Matrix gram = Xc.transpose() * Xc;
  gram.diagonal().array() += lambda;

  RidgeModel m;
  m.lambda = lambda;
  m.coef = solve_penalized(gram, Xc.transpose() * yc, lambda == 0.0);
  m.intercept = y_mean - x_mean.dot(m.coef);
  return m;
}

Vector ridge_predict(const RidgeModel& model, const Matrix& X) {
  if (X.cols() != model.coef.size())
    throw DimensionError("ridge_predict: design width " +
                         std::to_string(X.cols()) + " != coefficient length " +
                         std::to_string(model.coef.size()));
  return (X * model.coef).array() + model.intercept;
}

Matrix residualize(const Matrix& H, const Matrix& A, bool stabilize) {
  if (H.rows() != A.rows())
    throw DimensionError("residualize: row counts differ");
  const Eigen::RowVectorXd a_mean = A.colwise().mean();
  const Eigen::RowVectorXd h_mean = H.colwise().mean();
  const Matrix Ac = A.rowwise() - a_mean;
  const Matrix Hc = H.rowwise() - h_mean;

  Matrix gram = Ac.transpose() * Ac;
  Eigen::LDLT<Matrix> ldlt(gram);
  Vector d = ldlt.vectorD();
  double dmax = d.cwiseAbs().maxCoeff();
  if (!(dmax > 0.0) || d.minCoeff() <= 1e-12 * dmax) {
    if (!stabilize)
      throw SingularityError(
          "residualize: centered Gram of A is singular (N <= d_A?)");
    std::cerr << "[asel] residualize: singular Gram, stabilizing with "
                 "eps=1e-8 on the diagonal\n";
    gram.diagonal().array() += 1e-8;
    ldlt.compute(gram);
  }
  const Matrix B = ldlt.solve(Ac.transpose() * Hc);
  return Hc - Ac * B;
}

std::vector<int> FoldPlan::fold_rows(int fold) const {
  std::vector<int> rows;
  for (int i = 0; i < n(); ++i)
    if (assignment[static_cast<std::size_t>(i)] == fold) rows.push_back(i);
  return rows;
}

std::vector<int> FoldPlan::complement_rows(int fold) const {
  std::vector<int> rows;
  for (int i = 0; i < n(); ++i)
    if (assignment[static_cast<std::size_t>(i)] != fold) rows.push_back(i);
  return rows;
}

FoldPlan make_folds(int n, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("make_folds: need K >= 2");
  if (k > n)
    throw ConfigError("make_folds: K=" + std::to_string(k) + " exceeds n=" +
                      std::to_string(n));

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(static_cast<std::size_t>(n), -1);
  const int base = n / k;
  const int rem = n % k;
  int pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < rem ? 1 : 0);
    for (int s = 0; s < size; ++s)
      plan.assignment[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos++)])] = f;
  }
  return plan;
}

RegressorFn ridge_regressor(double lambda) {
  return [lambda](const Matrix& X, const Vector& y) {
    return ridge_fit(X, y, lambda);
  };
}

Vector cross_fit_oof(const Matrix& X, const Vector& y, const FoldPlan& folds,
                     const RegressorFn& regressor) {
  if (X.rows() != y.size() || X.rows() != folds.n())
    throw DimensionError("cross_fit_oof: inconsistent row counts");

  Vector out(X.rows());
  for (int f = 0; f < folds.k; ++f) {
    const auto train = folds.complement_rows(f);
    const auto held = folds.fold_rows(f);
    if (train.size() < 2)
      throw InsufficientDataError(
          "cross_fit_oof: training complement of fold " + std::to_string(f) +
          " has fewer than 2 rows");
    Matrix Xt(static_cast<int>(train.size()), X.cols());
    Vector yt(static_cast<int>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      Xt.row(static_cast<int>(i)) = X.row(train[i]);
      yt(static_cast<int>(i)) = y(train[i]);
    }
    const RidgeModel model = regressor(Xt, yt);
    for (int r : held) out(r) = model.at(X.row(r));
  }
  return out;
}

Vector cross_fit_oof(const Matrix& X, const Vector& y, const FoldPlan& folds,
                     double lambda) {
  return cross_fit_oof(X, y, folds, ridge_regressor(lambda));
}

}  // namespace asel
