#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "causal/dataset.hpp"
#include "causal/error.hpp"
#include "causal/rng.hpp"

using namespace causal;

namespace {

Dataset small() {
  return Dataset({"t", "y"}, {{0, 1, 0, 1}, {1.5, 2.5, 0.5, 3.5}});
}

}  // namespace

TEST_CASE("construction and access") {
  Dataset d = small();
  CHECK(d.rows() == 4);
  CHECK(d.cols() == 2);
  CHECK(d.has_column("t"));
  CHECK_FALSE(d.has_column("x"));
  CHECK(d.column("y")[2] == 0.5);
  CHECK_THROWS_AS(d.column("x"), ArgumentError);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(Dataset({"a", "a"}, {{1}, {2}}), ArgumentError);
  CHECK_THROWS_AS(Dataset({"a", "b"}, {{1, 2}, {3}}), ArgumentError);
  CHECK_THROWS_AS(Dataset({"a"}, {{std::nan("")}}), ArgumentError);
  CHECK_THROWS_AS(
      Dataset({"a"}, {{std::numeric_limits<double>::infinity()}}),
      ArgumentError);
  CHECK_THROWS_AS(Dataset({""}, {{1}}), ArgumentError);
  CHECK_THROWS_AS(Dataset({"bad name"}, {{1}}), ArgumentError);
  CHECK_THROWS_AS(Dataset({"a", "b"}, {{1}}), ArgumentError);
}

TEST_CASE("with_column and replace_column") {
  Dataset d = small();
  Dataset e = d.with_column("w", {9, 8, 7, 6});
  CHECK(e.cols() == 3);
  CHECK(d.cols() == 2);
  CHECK(e.column("w")[0] == 9);
  CHECK_THROWS_AS(d.with_column("t", {0, 0, 0, 0}), ArgumentError);
  CHECK_THROWS_AS(d.with_column("w", {1, 2}), ArgumentError);

  Dataset r = d.replace_column("t", {1, 1, 1, 1});
  CHECK(r.column("t")[0] == 1);
  CHECK(d.column("t")[0] == 0);
  CHECK_THROWS_AS(d.replace_column("w", {0, 0, 0, 0}), ArgumentError);
}

TEST_CASE("bootstrap sample") {
  Dataset d = small();
  Rng rng(42);
  Dataset b = d.bootstrap_sample(rng);
  CHECK(b.rows() == d.rows());
  CHECK(b.column_names() == d.column_names());
  // Every resampled row must be one of the original rows.
  std::set<std::pair<double, double>> orig;
  for (std::size_t i = 0; i < d.rows(); ++i)
    orig.insert({d.column("t")[i], d.column("y")[i]});
  for (std::size_t i = 0; i < b.rows(); ++i)
    CHECK(orig.count({b.column("t")[i], b.column("y")[i]}) == 1);

  // Deterministic given the rng state.
  Rng r1(7), r2(7);
  CHECK(d.bootstrap_sample(r1).to_csv() == d.bootstrap_sample(r2).to_csv());
}

TEST_CASE("subset sample") {
  std::vector<double> col(100);
  for (int i = 0; i < 100; ++i) col[i] = i;
  Dataset d({"x"}, {col});

  Rng rng(1);
  Dataset s = d.subset_sample(0.8, rng);
  CHECK(s.rows() == 80);
  // Without replacement: all values distinct.
  std::set<double> seen(s.column("x").begin(), s.column("x").end());
  CHECK(seen.size() == 80);

  CHECK(d.subset_sample(0.001, rng).rows() == 1);  // ceil
  CHECK(d.subset_sample(1.0, rng).rows() == 100);
  CHECK_THROWS_AS(d.subset_sample(0.0, rng), ArgumentError);
  CHECK_THROWS_AS(d.subset_sample(1.5, rng), ArgumentError);
}

TEST_CASE("csv round trip is exact") {
  Dataset d({"a", "b"},
            {{0.1, 1e-300, -3.5, 12345678901234.5},
             {1.0 / 3.0, -0.0, 2.5e17, 7}});
  Dataset back = parse_csv(d.to_csv());
  CHECK(back.column_names() == d.column_names());
  for (const auto& name : d.column_names())
    for (std::size_t i = 0; i < d.rows(); ++i)
      CHECK(back.column(name)[i] == d.column(name)[i]);
}

TEST_CASE("csv parsing") {
  Dataset d = parse_csv("t,y\n0,1.5\n1,2.5\n");
  CHECK(d.rows() == 2);
  CHECK(d.column("y")[1] == 2.5);

  CHECK_NOTHROW(parse_csv("t,y\n0,1\n", {"t"}));
  CHECK_THROWS_AS(parse_csv("t,y\n0,1\n", {"w"}), ParseError);
  CHECK_THROWS_AS(parse_csv(""), ParseError);
  CHECK_THROWS_AS(parse_csv("t,t\n0,1\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("t,y\n0\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("t,y\n0,1,2\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("t,y\n0,abc\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("t,y\n0,nan\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("t,y\n0, 1\n"), ParseError);

  try {
    parse_csv("t,y\n0,1\n0,oops\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("file round trip and io errors") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "causal_test_data.csv";
  Dataset d = small();
  d.save_csv(path.string());
  Dataset back = load_csv(path.string(), {"t", "y"});
  CHECK(back.to_csv() == d.to_csv());
  fs::remove(path);

  CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv"), IoError);
}
