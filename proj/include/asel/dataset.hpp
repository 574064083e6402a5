#pragma once

#include "asel/common.hpp"
#include "asel/subset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace asel {

// Column layout of the AI and human signal matrices: aspect j owns a
// contiguous block of columns in A and one in H. Blocks partition the
// columns with no overlap and no gap.
struct AspectBlocks {
  std::vector<int> a_widths;
  std::vector<int> h_widths;

  int j_count() const { return static_cast<int>(a_widths.size()); }
  int d_a() const;
  int d_h() const;
  int a_offset(int j) const;
  int h_offset(int j) const;

  void validate() const;
};

struct Dataset {
  Matrix A;  // N x d_a
  Matrix H;  // N x d_h
  Vector Y;  // N
  AspectBlocks blocks;
  std::optional<Matrix> S;  // N x 2J; columns (s{j}_0, s{j}_1) per aspect
  std::vector<std::string> ids;  // optional row labels

  int n() const { return static_cast<int>(A.rows()); }
  int j_count() const { return blocks.j_count(); }

  // throws IngestError / DimensionError when an invariant is violated
  void validate() const;

  // columns of H belonging to the aspects in pi, ascending
  Matrix h_columns(const Subset& pi) const;
  // width of H_pi
  int h_width(const Subset& pi) const;

  Dataset rows(const std::vector<int>& index) const;
};

// [A | H_pi] design used by both reward estimators
Matrix design_for_subset(const Dataset& d, const Subset& pi);

// Schema sidecar: J, per-aspect block widths, presence of agreement columns
// and ids, and the exact column order of the CSV.
struct DatasetSchema {
  AspectBlocks blocks;
  bool has_agreement = false;
  bool has_ids = false;

  std::vector<std::string> column_names() const;  // canonical order
};

DatasetSchema schema_for(const Dataset& d);

DatasetSchema load_schema(const std::string& path);
void save_schema(const DatasetSchema& schema, const std::string& path);

// CSV with one header row; values written with 17 significant digits so a
// write/load round trip is bit exact.
Dataset load_dataset(const std::string& csv_path,
                     const DatasetSchema& schema);
Dataset load_dataset(const std::string& csv_path,
                     const std::string& schema_path);
void write_dataset(const Dataset& d, const std::string& csv_path);

}  // namespace asel
