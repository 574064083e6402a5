#pragma once

#include "asel/common.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace asel {

// Linear model with an unpenalized intercept. The penalty applies to the
// slope coefficients only; fitting goes through the penalized normal
// equations on centered data.
struct RidgeModel {
  Vector coef;
  double intercept = 0.0;
  double lambda = 0.0;

  double at(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    return row.dot(coef) + intercept;
  }
};

// minimize sum_i (y_i - x_i' b - c)^2 + lambda * |b|^2
RidgeModel ridge_fit(const Matrix& X, const Vector& y, double lambda);
Vector ridge_predict(const RidgeModel& model, const Matrix& X);

// H minus its sample linear projection onto A, both centered. Output columns
// have zero sample mean and zero sample cross-covariance with A. When the
// centered Gram of A is numerically singular, a ridge of eps=1e-8 is added to
// the diagonal (and noted on stderr) unless `stabilize` is false, in which
// case a SingularityError is thrown.
Matrix residualize(const Matrix& H, const Matrix& A, bool stabilize = true);

// Deterministic K-fold partition: seeded Fisher-Yates shuffle of 0..n-1, then
// contiguous chunking. Fold sizes differ by at most one.
struct FoldPlan {
  std::vector<int> assignment;  // fold id per row
  int k = 0;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(assignment.size()); }
  std::vector<int> fold_rows(int fold) const;
  std::vector<int> complement_rows(int fold) const;
};

FoldPlan make_folds(int n, int k, std::uint64_t seed);

// Pluggable first/second-stage regressor contract; ridge is the default
// family used throughout.
using RegressorFn = std::function<RidgeModel(const Matrix&, const Vector&)>;
RegressorFn ridge_regressor(double lambda);

// Out-of-fold predictions: row i is predicted by the model fitted on the
// complement of fold(i).
Vector cross_fit_oof(const Matrix& X, const Vector& y, const FoldPlan& folds,
                     const RegressorFn& regressor);
Vector cross_fit_oof(const Matrix& X, const Vector& y, const FoldPlan& folds,
                     double lambda);

}  // namespace asel
