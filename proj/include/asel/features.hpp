#pragma once

#include "asel/dataset.hpp"
#include "asel/regression.hpp"

namespace asel {

// One ridge fit of each human column on the full AI signal; used to fill in
// human blocks that were not queried. Raw substitution of the AI column would
// carry its bias into the features, so predictions of E[H | A] are used
// instead.
struct Imputer {
  Matrix coef;       // d_a x d_h, column k predicts H column k
  Vector intercept;  // d_h
  double lambda = 0.0;

  int input_width() const { return static_cast<int>(coef.rows()); }
  int output_width() const { return static_cast<int>(coef.cols()); }

  Vector predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& a_row) const;
  Matrix predict(const Matrix& A) const;
  RidgeModel column_model(int k) const;
};

Imputer fit_imputer(const Matrix& A, const Matrix& H, double lambda_imp);

// Feature vector of one instance under selection pi. Layout is per aspect:
// [ a_j | h_j or imputed | queried indicator ], aspects in order, total
// length d_a + d_h + J.
struct FeatureVector {
  Vector values;
  const AspectBlocks* blocks = nullptr;

  int aspect_offset(int j) const;
  double queried(int j) const;
  Eigen::VectorXd h_slot(int j) const;
};

int feature_width(const AspectBlocks& blocks);

FeatureVector build_features(const Eigen::Ref<const Eigen::RowVectorXd>& a_row,
                             const Eigen::Ref<const Eigen::RowVectorXd>& h_row,
                             const Subset& pi, const Imputer& imputer,
                             const AspectBlocks& blocks);

// Row-wise feature matrix; `per_row_subsets` may hold one subset for all rows
// or one per row.
Matrix build_feature_matrix(const Dataset& d,
                            const std::vector<Subset>& per_row_subsets,
                            const Imputer& imputer);
Matrix build_feature_matrix(const Dataset& d, const Subset& pi,
                            const Imputer& imputer);

}  // namespace asel
