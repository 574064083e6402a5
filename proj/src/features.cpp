#include "asel/features.hpp"

namespace asel {

Vector Imputer::predict_row(
    const Eigen::Ref<const Eigen::RowVectorXd>& a_row) const {
  if (a_row.size() != input_width())
    throw DimensionError("imputer: input width mismatch");
  return (a_row * coef).transpose() + intercept;
}

Matrix Imputer::predict(const Matrix& A) const {
  if (A.cols() != input_width())
    throw DimensionError("imputer: input width mismatch");
  return (A * coef).rowwise() + intercept.transpose();
}

RidgeModel Imputer::column_model(int k) const {
  RidgeModel m;
  m.coef = coef.col(k);
  m.intercept = intercept(k);
  m.lambda = lambda;
  return m;
}

Imputer fit_imputer(const Matrix& A, const Matrix& H, double lambda_imp) {
  if (A.rows() != H.rows())
    throw DimensionError("fit_imputer: row counts differ");
  if (A.rows() < 2)
    throw InsufficientDataError("fit_imputer: need at least 2 rows");
  if (lambda_imp < 0.0) throw ConfigError("fit_imputer: lambda must be >= 0");

  // one factorization, all H columns as right-hand sides
  const Eigen::RowVectorXd a_mean = A.colwise().mean();
  const Eigen::RowVectorXd h_mean = H.colwise().mean();
  const Matrix Ac = A.rowwise() - a_mean;
  const Matrix Hc = H.rowwise() - h_mean;
  Matrix gram = Ac.transpose() * Ac;
  gram.diagonal().array() += lambda_imp;

  Eigen::LDLT<Matrix> ldlt(gram);
  if (lambda_imp == 0.0) {
    const Vector d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(dmax > 0.0) || d.minCoeff() <= 1e-12 * dmax)
      throw SingularityError(
          "fit_imputer: Gram matrix is rank-deficient at lambda_imp=0; "
          "use lambda_imp > 0");
  }

  Imputer imp;
  imp.lambda = lambda_imp;
  imp.coef = ldlt.solve(Ac.transpose() * Hc);
  imp.intercept = (h_mean - a_mean * imp.coef).transpose();
  return imp;
}

int feature_width(const AspectBlocks& blocks) {
  return blocks.d_a() + blocks.d_h() + blocks.j_count();
}

int FeatureVector::aspect_offset(int j) const {
  int at = 0;
  for (int q = 0; q < j; ++q)
    at += blocks->a_widths[static_cast<std::size_t>(q)] +
          blocks->h_widths[static_cast<std::size_t>(q)] + 1;
  return at;
}

double FeatureVector::queried(int j) const {
  const int off = aspect_offset(j);
  return values(off + blocks->a_widths[static_cast<std::size_t>(j)] +
                blocks->h_widths[static_cast<std::size_t>(j)]);
}

Eigen::VectorXd FeatureVector::h_slot(int j) const {
  const int off = aspect_offset(j);
  return values.segment(off + blocks->a_widths[static_cast<std::size_t>(j)],
                        blocks->h_widths[static_cast<std::size_t>(j)]);
}

FeatureVector build_features(const Eigen::Ref<const Eigen::RowVectorXd>& a_row,
                             const Eigen::Ref<const Eigen::RowVectorXd>& h_row,
                             const Subset& pi, const Imputer& imputer,
                             const AspectBlocks& blocks) {
  if (a_row.size() != blocks.d_a() || h_row.size() != blocks.d_h())
    throw DimensionError("build_features: row widths do not match blocks");
  pi.check_range(blocks.j_count());

  const Vector imputed = imputer.predict_row(a_row);

  FeatureVector fv;
  fv.blocks = &blocks;
  fv.values.resize(feature_width(blocks));
  int at = 0;
  for (int j = 0; j < blocks.j_count(); ++j) {
    const int wa = blocks.a_widths[static_cast<std::size_t>(j)];
    const int wh = blocks.h_widths[static_cast<std::size_t>(j)];
    fv.values.segment(at, wa) = a_row.segment(blocks.a_offset(j), wa);
    at += wa;
    if (pi.contains(j)) {
      fv.values.segment(at, wh) = h_row.segment(blocks.h_offset(j), wh);
      fv.values(at + wh) = 1.0;
    } else {
      fv.values.segment(at, wh) = imputed.segment(blocks.h_offset(j), wh);
      fv.values(at + wh) = 0.0;
    }
    at += wh + 1;
  }
  return fv;
}

Matrix build_feature_matrix(const Dataset& d,
                            const std::vector<Subset>& per_row_subsets,
                            const Imputer& imputer) {
  if (per_row_subsets.size() != 1 &&
      static_cast<int>(per_row_subsets.size()) != d.n())
    throw DimensionError(
        "build_feature_matrix: need one subset or one per row");
  Matrix X(d.n(), feature_width(d.blocks));
  for (int i = 0; i < d.n(); ++i) {
    const Subset& pi = per_row_subsets.size() == 1
                           ? per_row_subsets[0]
                           : per_row_subsets[static_cast<std::size_t>(i)];
    X.row(i) =
        build_features(d.A.row(i), d.H.row(i), pi, imputer, d.blocks).values;
  }
  return X;
}

Matrix build_feature_matrix(const Dataset& d, const Subset& pi,
                            const Imputer& imputer) {
  return build_feature_matrix(d, std::vector<Subset>{pi}, imputer);
}

}  // namespace asel
