#include <doctest.h>

#include <filesystem>

#include "nepdf/dataset_io.hpp"
#include "nepdf/error.hpp"

using namespace nepdf;
namespace fs = std::filesystem;

namespace {

PairDataset sample_dataset() {
  PairDataset ds;
  ds.config_digest = 0x0123456789ABCDEFULL;
  PairSample a;
  a.id = "sys0/xy";
  a.x = {0.1, -2.5, 1e-300, 3.14159265358979};
  a.y = {1.0, 2.0, -0.333333333333333315, 4.0};
  a.label = 1;
  a.weight = 0.25;
  PairSample b;
  b.id = "sys0/yx";
  b.x = a.y;
  b.y = a.x;
  b.label = -1;
  b.weight = 1.0;
  PairSample c;
  c.id = "solo";
  c.x = {5.0};
  c.y = {7.0};
  c.label = 0;
  c.weight = 1.0;
  ds.pairs = {a, b, c};
  return ds;
}

}  // namespace

TEST_CASE("dataset round-trips exactly") {
  const PairDataset ds = sample_dataset();
  const std::string text = serialize_dataset(ds);
  const PairDataset back = parse_dataset(text);
  CHECK(back.config_digest == ds.config_digest);
  REQUIRE(back.pairs.size() == ds.pairs.size());
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    CHECK(back.pairs[i].id == ds.pairs[i].id);
    CHECK(back.pairs[i].label == ds.pairs[i].label);
    CHECK(back.pairs[i].weight == ds.pairs[i].weight);
    CHECK(back.pairs[i].x == ds.pairs[i].x);
    CHECK(back.pairs[i].y == ds.pairs[i].y);
  }
  // serialization is a fixed point
  CHECK(serialize_dataset(back) == text);
}

TEST_CASE("dataset file round-trip") {
  const auto path = fs::temp_directory_path() / "nepdf_test_ds.csv";
  const PairDataset ds = sample_dataset();
  write_dataset(path, ds);
  const PairDataset back = read_dataset(path);
  CHECK(serialize_dataset(back) == serialize_dataset(ds));
  CHECK(dataset_digest(back) == dataset_digest(ds));
  fs::remove(path);
}

TEST_CASE("parser rejects malformed input") {
  const std::string header = "id,label,weight,x,y\n";
  CHECK_THROWS_AS(parse_dataset("no header\n"), ConfigError);
  CHECK_THROWS_AS(parse_dataset(header + "a,2,1,1 2,3 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_dataset(header + "a,1,1,1 2,3\n"), ConfigError);
  CHECK_THROWS_AS(parse_dataset(header + "a,1,1,1 nan,3 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_dataset(header + "a,1,-2,1,3\n"), ConfigError);
  CHECK_THROWS_AS(parse_dataset(header + "a,1,1,,\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_dataset(header + "a,1,1,1,2\na,1,1,1,2\n"), ConfigError);
  // well-formed minimal case
  const PairDataset ok = parse_dataset(header + "a,1,1,1 2,3 4\n");
  CHECK(ok.pairs.size() == 1);
  CHECK(ok.config_digest == 0);
}

TEST_CASE("empty weight field defaults to 1") {
  const PairDataset ds =
      parse_dataset("id,label,weight,x,y\na,1,,1 2,3 4\n");
  CHECK(ds.pairs[0].weight == 1.0);
}

TEST_CASE("format_double round-trips through parse_double") {
  for (double v : {0.1, -1e-17, 3.141592653589793, 1e300, -0.0, 5.0})
    CHECK(parse_double(format_double(v)) == v);
  CHECK_THROWS_AS(parse_double("1.5x"), ConfigError);
  CHECK_THROWS_AS(parse_double(""), ConfigError);
}

TEST_CASE("dataset digest reacts to content changes") {
  PairDataset a = sample_dataset();
  PairDataset b = sample_dataset();
  CHECK(dataset_digest(a) == dataset_digest(b));
  b.pairs[0].x[0] += 1e-9;
  CHECK(dataset_digest(a) != dataset_digest(b));
}
