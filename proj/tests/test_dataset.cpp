#include "asel/dataset.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <fstream>

using namespace asel;
using asel::test::temp_path;

namespace {

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

DatasetSchema tiny_schema() {
  DatasetSchema s;
  s.blocks.a_widths = {1, 1};
  s.blocks.h_widths = {1, 1};
  return s;
}

}  // namespace

TEST_CASE("load_dataset parses a small file") {
  const std::string csv = temp_path("tiny.csv");
  write_file(csv,
             "a0_0,a1_0,h0_0,h1_0,y\n"
             "0.5,-1,1,0,2\n"
             "1.5,2,-0.5,2.5,-1\n"
             "-0.25,0.75,0.25,-1.25,0.5\n");
  const Dataset d = load_dataset(csv, tiny_schema());
  CHECK(d.n() == 3);
  CHECK(d.j_count() == 2);
  CHECK(d.A(0, 0) == 0.5);
  CHECK(d.H(1, 1) == 2.5);
  CHECK(d.Y(2) == 0.5);
}

TEST_CASE("ingestion errors carry row and column locations") {
  SUBCASE("NaN cell") {
    const std::string csv = temp_path("nan.csv");
    write_file(csv, "a0_0,a1_0,h0_0,h1_0,y\n0.5,nan,1,0,2\n");
    CHECK_THROWS_WITH_AS(load_dataset(csv, tiny_schema()),
                         doctest::Contains("column 'a1_0'"), IngestError);
    CHECK_THROWS_WITH_AS(load_dataset(csv, tiny_schema()),
                         doctest::Contains(":2:"), IngestError);
  }
  SUBCASE("non-numeric cell") {
    const std::string csv = temp_path("text.csv");
    write_file(csv, "a0_0,a1_0,h0_0,h1_0,y\n0.5,1,oops,0,2\n");
    CHECK_THROWS_WITH_AS(load_dataset(csv, tiny_schema()),
                         doctest::Contains("column 'h0_0'"), IngestError);
  }
  SUBCASE("missing column") {
    const std::string csv = temp_path("missing.csv");
    write_file(csv, "a0_0,a1_0,h0_0,y\n0.5,1,0,2\n");
    CHECK_THROWS_AS(load_dataset(csv, tiny_schema()), IngestError);
  }
  SUBCASE("ragged row") {
    const std::string csv = temp_path("ragged.csv");
    write_file(csv, "a0_0,a1_0,h0_0,h1_0,y\n0.5,1,0,2\n");
    CHECK_THROWS_WITH_AS(load_dataset(csv, tiny_schema()),
                         doctest::Contains(":2:"), IngestError);
  }
}

TEST_CASE("write then load reproduces every value bit-exactly") {
  Dataset d = test::tiny_dataset();
  d.A(0, 0) = 1.0 / 3.0;
  d.A(1, 1) = -0.0;
  d.H(2, 0) = 3.141592653589793;
  d.H(0, 1) = 1e-17;
  d.Y(1) = -2.2250738585072014e-308;
  d.S = Matrix(3, 4);
  *d.S << 1, 0.75, 0, 0.5, 1, 1, 1, 0.25, 0, 0.5, 1, 2.0 / 3.0;
  d.ids = {"p1", "p2", "p3"};

  const std::string csv = temp_path("round.csv");
  const std::string schema = temp_path("round.schema.json");
  write_dataset(d, csv);
  save_schema(schema_for(d), schema);
  const Dataset back = load_dataset(csv, schema);

  CHECK(test::bit_equal(back.A, d.A));
  CHECK(test::bit_equal(back.H, d.H));
  CHECK(test::bit_equal(back.Y, d.Y));
  CHECK(test::bit_equal(*back.S, *d.S));
  CHECK(back.ids == d.ids);
}

TEST_CASE("dataset invariants are enforced") {
  Dataset d = test::tiny_dataset();
  SUBCASE("row count mismatch") {
    d.H = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(d.validate(), DimensionError);
  }
  SUBCASE("non-finite entry") {
    d.A(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(d.validate(), IngestError);
  }
  SUBCASE("S shape") {
    d.S = Matrix::Zero(3, 3);
    CHECK_THROWS_AS(d.validate(), DimensionError);
  }
}

TEST_CASE("design_for_subset stacks A with the selected H blocks") {
  const Dataset d = test::tiny_dataset();
  const Matrix x = design_for_subset(d, Subset{1});
  CHECK(x.cols() == 3);
  CHECK(x.col(0) == d.A.col(0));
  CHECK(x.col(2) == d.H.col(1));
  const Matrix x0 = design_for_subset(d, Subset::empty());
  CHECK(x0.cols() == 2);
}

TEST_CASE("subset enumeration and encoding") {
  CHECK(subsets_of_size(4, 2).size() == 6);
  CHECK(subsets_up_to(4, 2).size() == 1 + 4 + 6);
  const Subset s{2, 0};
  CHECK(s.indices() == std::vector<int>{0, 2});
  CHECK(Subset::from_mask(s.mask()) == s);
  CHECK_THROWS_AS(Subset({1, 1}), ConfigError);
  CHECK_THROWS_AS(Subset{-1}, ConfigError);
  CHECK(Subset::full(3).to_string() == "{0,1,2}");
}
