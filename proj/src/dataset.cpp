#include "asel/dataset.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace asel {

using ordered_json = nlohmann::ordered_json;

int AspectBlocks::d_a() const {
  return std::accumulate(a_widths.begin(), a_widths.end(), 0);
}

int AspectBlocks::d_h() const {
  return std::accumulate(h_widths.begin(), h_widths.end(), 0);
}

int AspectBlocks::a_offset(int j) const {
  return std::accumulate(a_widths.begin(), a_widths.begin() + j, 0);
}

int AspectBlocks::h_offset(int j) const {
  return std::accumulate(h_widths.begin(), h_widths.begin() + j, 0);
}

void AspectBlocks::validate() const {
  if (a_widths.empty() || a_widths.size() != h_widths.size())
    throw DimensionError("aspect blocks: need matching a/h width lists");
  for (std::size_t j = 0; j < a_widths.size(); ++j) {
    if (a_widths[j] < 1 || h_widths[j] < 1)
      throw DimensionError("aspect blocks: width must be >= 1 (aspect " +
                           std::to_string(j) + ")");
  }
}

void Dataset::validate() const {
  blocks.validate();
  const int N = n();
  if (N < 1) throw IngestError("dataset: needs at least one row");
  if (A.cols() != blocks.d_a() || H.cols() != blocks.d_h())
    throw DimensionError("dataset: matrix widths do not match aspect blocks");
  if (H.rows() != N || Y.size() != N)
    throw DimensionError("dataset: row counts differ between A, H, Y");
  if (!all_finite(A) || !all_finite(H) || !all_finite(Y))
    throw IngestError("dataset: non-finite entry");
  if (S) {
    if (S->rows() != N || S->cols() != 2 * j_count())
      throw DimensionError("dataset: agreement matrix must be N x 2J");
    if (!all_finite(*S)) throw IngestError("dataset: non-finite entry in S");
  }
  if (!ids.empty() && static_cast<int>(ids.size()) != N)
    throw DimensionError("dataset: id count differs from row count");
}

Matrix Dataset::h_columns(const Subset& pi) const {
  pi.check_range(j_count());
  Matrix out(n(), h_width(pi));
  int at = 0;
  for (int j : pi.indices()) {
    const int w = blocks.h_widths[static_cast<std::size_t>(j)];
    out.middleCols(at, w) = H.middleCols(blocks.h_offset(j), w);
    at += w;
  }
  return out;
}

int Dataset::h_width(const Subset& pi) const {
  int w = 0;
  for (int j : pi.indices()) w += blocks.h_widths[static_cast<std::size_t>(j)];
  return w;
}

Dataset Dataset::rows(const std::vector<int>& index) const {
  Dataset out;
  out.blocks = blocks;
  const int m = static_cast<int>(index.size());
  out.A.resize(m, A.cols());
  out.H.resize(m, H.cols());
  out.Y.resize(m);
  if (S) out.S = Matrix(m, S->cols());
  if (!ids.empty()) out.ids.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const int r = index[static_cast<std::size_t>(i)];
    out.A.row(i) = A.row(r);
    out.H.row(i) = H.row(r);
    out.Y(i) = Y(r);
    if (S) out.S->row(i) = S->row(r);
    if (!ids.empty())
      out.ids[static_cast<std::size_t>(i)] = ids[static_cast<std::size_t>(r)];
  }
  return out;
}

Matrix design_for_subset(const Dataset& d, const Subset& pi) {
  Matrix X(d.n(), d.blocks.d_a() + d.h_width(pi));
  X.leftCols(d.blocks.d_a()) = d.A;
  if (pi.size() > 0) X.rightCols(d.h_width(pi)) = d.h_columns(pi);
  return X;
}

std::vector<std::string> DatasetSchema::column_names() const {
  std::vector<std::string> cols;
  if (has_ids) cols.push_back("id");
  const int J = blocks.j_count();
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < blocks.a_widths[static_cast<std::size_t>(j)]; ++k)
      cols.push_back("a" + std::to_string(j) + "_" + std::to_string(k));
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < blocks.h_widths[static_cast<std::size_t>(j)]; ++k)
      cols.push_back("h" + std::to_string(j) + "_" + std::to_string(k));
  if (has_agreement) {
    for (int j = 0; j < J; ++j) {
      cols.push_back("s" + std::to_string(j) + "_0");
      cols.push_back("s" + std::to_string(j) + "_1");
    }
  }
  cols.push_back("y");
  return cols;
}

DatasetSchema schema_for(const Dataset& d) {
  DatasetSchema s;
  s.blocks = d.blocks;
  s.has_agreement = d.S.has_value();
  s.has_ids = !d.ids.empty();
  return s;
}

DatasetSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("schema: cannot open " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IngestError("schema: parse failure in " + path + ": " + e.what());
  }
  DatasetSchema s;
  try {
    s.blocks.a_widths = j.at("a_widths").get<std::vector<int>>();
    s.blocks.h_widths = j.at("h_widths").get<std::vector<int>>();
    s.has_agreement = j.value("agreement", false);
    s.has_ids = j.value("ids", false);
    const int J = j.at("J").get<int>();
    if (J != s.blocks.j_count())
      throw IngestError("schema: J does not match width lists in " + path);
  } catch (const ordered_json::exception& e) {
    throw IngestError("schema: missing or malformed field in " + path + ": " +
                      e.what());
  }
  s.blocks.validate();
  if (j.contains("columns")) {
    const auto want = s.column_names();
    const auto got = j.at("columns").get<std::vector<std::string>>();
    if (got != want)
      throw IngestError("schema: column list does not match canonical order");
  }
  return s;
}

void save_schema(const DatasetSchema& schema, const std::string& path) {
  ordered_json j;
  j["J"] = schema.blocks.j_count();
  j["a_widths"] = schema.blocks.a_widths;
  j["h_widths"] = schema.blocks.h_widths;
  j["agreement"] = schema.has_agreement;
  j["ids"] = schema.has_ids;
  j["columns"] = schema.column_names();
  std::ofstream out(path);
  if (!out) throw IngestError("schema: cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_cell(const std::string& text, const std::string& path, int line,
                  const std::string& column) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw IngestError(path + ":" + std::to_string(line) + ": column '" +
                      column + "' is not numeric: '" + text + "'");
  if (!std::isfinite(v))
    throw IngestError(path + ":" + std::to_string(line) + ": column '" +
                      column + "' is not finite");
  return v;
}

}  // namespace

Dataset load_dataset(const std::string& csv_path,
                     const DatasetSchema& schema) {
  std::ifstream in(csv_path);
  if (!in) throw IngestError("dataset: cannot open " + csv_path);

  const auto columns = schema.column_names();

  std::string line;
  if (!std::getline(in, line))
    throw IngestError("dataset: empty file " + csv_path);
  const auto header = split_csv_line(line);
  if (header.size() != columns.size())
    throw IngestError(csv_path + ":1: header has " +
                      std::to_string(header.size()) + " columns, schema has " +
                      std::to_string(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (header[c] != columns[c])
      throw IngestError(csv_path + ":1: header column " + std::to_string(c) +
                        " is '" + header[c] + "', expected '" + columns[c] +
                        "'");
  }

  std::vector<std::vector<double>> values;
  std::vector<std::string> ids;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != columns.size())
      throw IngestError(csv_path + ":" + std::to_string(line_no) + ": row has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(columns.size()));
    std::vector<double> row;
    row.reserve(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (schema.has_ids && c == 0) {
        ids.push_back(fields[c]);
        continue;
      }
      row.push_back(parse_cell(fields[c], csv_path, line_no, columns[c]));
    }
    values.push_back(std::move(row));
  }
  if (values.empty()) throw IngestError("dataset: no data rows in " + csv_path);

  const int N = static_cast<int>(values.size());
  const int d_a = schema.blocks.d_a();
  const int d_h = schema.blocks.d_h();
  const int J = schema.blocks.j_count();

  Dataset d;
  d.blocks = schema.blocks;
  d.A.resize(N, d_a);
  d.H.resize(N, d_h);
  d.Y.resize(N);
  if (schema.has_agreement) d.S = Matrix(N, 2 * J);
  if (schema.has_ids) d.ids = std::move(ids);

  for (int i = 0; i < N; ++i) {
    const auto& row = values[static_cast<std::size_t>(i)];
    int at = 0;
    for (int c = 0; c < d_a; ++c) d.A(i, c) = row[static_cast<std::size_t>(at++)];
    for (int c = 0; c < d_h; ++c) d.H(i, c) = row[static_cast<std::size_t>(at++)];
    if (schema.has_agreement)
      for (int c = 0; c < 2 * J; ++c)
        (*d.S)(i, c) = row[static_cast<std::size_t>(at++)];
    d.Y(i) = row[static_cast<std::size_t>(at)];
  }
  d.validate();
  return d;
}

Dataset load_dataset(const std::string& csv_path,
                     const std::string& schema_path) {
  return load_dataset(csv_path, load_schema(schema_path));
}

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_dataset(const Dataset& d, const std::string& csv_path) {
  d.validate();
  const DatasetSchema schema = schema_for(d);
  std::ofstream out(csv_path);
  if (!out) throw IngestError("dataset: cannot write " + csv_path);

  const auto columns = schema.column_names();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c];
  }
  out << '\n';

  for (int i = 0; i < d.n(); ++i) {
    bool first = true;
    auto emit = [&](const std::string& s) {
      if (!first) out << ',';
      out << s;
      first = false;
    };
    if (schema.has_ids) emit(d.ids[static_cast<std::size_t>(i)]);
    for (int c = 0; c < d.A.cols(); ++c) emit(format_value(d.A(i, c)));
    for (int c = 0; c < d.H.cols(); ++c) emit(format_value(d.H(i, c)));
    if (schema.has_agreement)
      for (int c = 0; c < d.S->cols(); ++c) emit(format_value((*d.S)(i, c)));
    emit(format_value(d.Y(i)));
    out << '\n';
  }
}

}  // namespace asel
