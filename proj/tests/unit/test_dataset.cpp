#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "miscls/dataset.hpp"

using namespace miscls;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("miscls_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("load_csv_dataset basic counts") {
  TempDir tmp;
  write_file(tmp.file("d.csv"),
             "y_star,y,x1,x2\n"
             "1,1,0.5,1\n"
             "0,,1.25,0\n"
             "1,0,-0.5,1\n"
             "0,NA,2.0,0\n");
  ColumnSchema schema;
  schema.discrete = {"x2"};
  const Dataset ds = load_csv_dataset(tmp.file("d.csv"), schema);
  CHECK(ds.n() == 4);
  CHECK(ds.n_validation() == 2);
  CHECK(ds.delta() == doctest::Approx(0.5));
  CHECK(ds.p1 == 1);
  CHECK(ds.p2 == 1);
  CHECK(ds.column_names[0] == "x1");
  CHECK(ds.column_names[1] == "x2");
  CHECK(ds.y[0] == 1);
  CHECK(ds.y[1] == -1);
  CHECK(ds.z(1, 0) == doctest::Approx(1.25));
}

TEST_CASE("loader errors carry row information") {
  TempDir tmp;
  write_file(tmp.file("bad_y.csv"), "y_star,y,x1\n1,2,0.5\n");
  CHECK_THROWS_WITH_AS(load_csv_dataset(tmp.file("bad_y.csv"), {}),
                       doctest::Contains("non-binary response at row 2"), std::invalid_argument);

  write_file(tmp.file("bad_ystar.csv"), "y_star,y,x1\n7,1,0.5\n");
  CHECK_THROWS_AS(load_csv_dataset(tmp.file("bad_ystar.csv"), {}), std::invalid_argument);

  write_file(tmp.file("missing_z.csv"), "y_star,y,x1\n1,1,\n");
  CHECK_THROWS_WITH_AS(load_csv_dataset(tmp.file("missing_z.csv"), {}),
                       doctest::Contains("missing covariate in row 2"), std::invalid_argument);

  write_file(tmp.file("empty.csv"), "");
  CHECK_THROWS_AS(load_csv_dataset(tmp.file("empty.csv"), {}), std::invalid_argument);

  write_file(tmp.file("no_ystar.csv"), "y,x1\n1,0.5\n");
  CHECK_THROWS_WITH_AS(load_csv_dataset(tmp.file("no_ystar.csv"), {}),
                       doctest::Contains("y_star"), std::invalid_argument);

  // no validated rows
  write_file(tmp.file("no_y.csv"), "y_star,y,x1\n1,,0.5\n0,,0.2\n");
  CHECK_THROWS_AS(load_csv_dataset(tmp.file("no_y.csv"), {}), std::invalid_argument);
}

TEST_CASE("nhanes-like fixture loads with declared split") {
  TempDir tmp;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  std::ostringstream csv;
  csv << "y_star,y";
  for (int j = 1; j <= 20; ++j) csv << ",z" << j;
  csv << "\n";
  std::ostringstream schema;
  schema << R"({"discrete": ["z17","z18","z19","z20"]})";
  for (int i = 0; i < 60; ++i) {
    csv << (i % 2) << ',' << (i % 5 == 0 ? std::to_string(i % 2) : "");
    for (int j = 0; j < 16; ++j) csv << ',' << gauss(rng);
    for (int j = 0; j < 4; ++j) csv << ',' << (i + j) % 2;
    csv << "\n";
  }
  write_file(tmp.file("n.csv"), csv.str());
  write_file(tmp.file("n.schema.json"), schema.str());
  const Dataset ds = load_csv_dataset(tmp.file("n.csv"), load_schema(tmp.file("n.schema.json")));
  CHECK(ds.p() == 20);
  CHECK(ds.p1 == 16);
  CHECK(ds.p2 == 4);
  CHECK(ds.n() == 60);
}

TEST_CASE("csv round trip preserves numeric fields bit-exactly") {
  TempDir tmp;
  write_file(tmp.file("d.csv"),
             "y_star,y,x1,x2\n"
             "1,1,0.1,3\n"
             "0,,1e-3,-2.5\n"
             "1,0,123456.789012345,0.30000000000000004\n");
  const Dataset ds = load_csv_dataset(tmp.file("d.csv"), {});
  write_csv(ds, tmp.file("out.csv"));
  const Dataset ds2 = load_csv_dataset(tmp.file("out.csv"), {});
  REQUIRE(ds2.n() == ds.n());
  for (int i = 0; i < ds.n(); ++i) {
    CHECK(ds2.y_star[i] == ds.y_star[i]);
    CHECK(ds2.y[i] == ds.y[i]);
    for (int c = 0; c < ds.p(); ++c) {
      CHECK(ds2.z(i, c) == ds.z(i, c));  // bitwise
    }
  }
}

namespace {

Dataset fully_observed(int n, std::mt19937_64& rng) {
  Dataset ds;
  ds.p1 = 1;
  ds.p2 = 0;
  ds.z.resize(n, 1);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < n; ++i) {
    ds.z(i, 0) = gauss(rng);
    ds.y_star.push_back(i % 2);
    ds.y.push_back(i % 2);
    ds.in_validation.push_back(1);
    ds.validation_ids.push_back(i);
  }
  ds.column_names = {"z1"};
  return ds;
}

}  // namespace

TEST_CASE("make_validation_split sizes and determinism") {
  std::mt19937_64 rng(1);
  const Dataset full = fully_observed(1000, rng);

  const Dataset a = make_validation_split(full, 0.1, 77);
  CHECK(a.n_validation() == 100);
  const Dataset b = make_validation_split(full, 0.1, 77);
  CHECK(a.validation_ids == b.validation_ids);

  const Dataset c = make_validation_split(full, 1.0, 5);
  CHECK(c.n_validation() == 1000);
  for (int i = 0; i < c.n(); ++i) CHECK(c.y[i] == full.y[i]);

  CHECK_THROWS_AS(make_validation_split(full, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_validation_split(full, 1.5, 1), std::invalid_argument);

  // erased outside the validation set
  int with_y = 0;
  for (int i = 0; i < a.n(); ++i) {
    if (a.y[i] >= 0) ++with_y;
  }
  CHECK(with_y == 100);
}

TEST_CASE("split positions do not depend on row contents") {
  std::mt19937_64 rng(2);
  const Dataset full = fully_observed(200, rng);
  Dataset permuted = full;
  // reverse the rows
  for (int i = 0; i < 200; ++i) {
    permuted.z(i, 0) = full.z(199 - i, 0);
    permuted.y_star[i] = full.y_star[199 - i];
    permuted.y[i] = full.y[199 - i];
  }
  const Dataset sa = make_validation_split(full, 0.25, 31);
  const Dataset sb = make_validation_split(permuted, 0.25, 31);
  CHECK(sa.validation_ids == sb.validation_ids);
}
