#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "bits/io.hpp"

using namespace bits;

namespace {
std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("format_double round-trips arbitrary doubles") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 5000; ++i) {
    const double v = std::ldexp(mant(rng), expo(rng));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  for (double v : {0.0, -0.0, 1.0, -1.0, 0.1, 1e-308, std::numeric_limits<double>::max(),
                   std::numeric_limits<double>::min(),
                   std::numeric_limits<double>::denorm_min()})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("csv write and read round trip") {
  CsvTable t;
  t.header = {"iteration", "z", "T"};
  t.rows = {{"1", format_double(0.123456789012345678), format_double(361.07)},
            {"2", format_double(-1e-17), format_double(4.9e300)}};
  const std::string path = temp_path("bits_test_io.csv");
  write_csv(path, t);
  const CsvTable back = read_csv(path);
  REQUIRE(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    REQUIRE(back.rows[r].size() == t.rows[r].size());
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) CHECK(back.rows[r][c] == t.rows[r][c]);
  }
  // numeric fidelity through the file
  CHECK(std::strtod(back.rows[0][1].c_str(), nullptr) == 0.123456789012345678);
  CHECK(std::strtod(back.rows[1][2].c_str(), nullptr) == 4.9e300);
  std::remove(path.c_str());
}

TEST_CASE("column lookup") {
  CsvTable t;
  t.header = {"a", "b", "c"};
  CHECK(t.column("a") == 0);
  CHECK(t.column("c") == 2);
  CHECK(t.column("missing") == -1);
}

TEST_CASE("reader tolerates CRLF line endings") {
  const std::string path = temp_path("bits_test_crlf.csv");
  {
    std::ofstream out(path, std::ios::binary);
    out << "x,y\r\n1.5,2.5\r\n3.5,4.5\r\n";
  }
  const CsvTable t = read_csv(path);
  REQUIRE(t.header.size() == 2);
  CHECK(t.header[1] == "y");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "2.5");
  CHECK(t.rows[1][0] == "3.5");
  std::remove(path.c_str());
}

TEST_CASE("reader keeps empty trailing fields") {
  const std::string path = temp_path("bits_test_trail.csv");
  {
    std::ofstream out(path);
    out << "x,y,note\n1,2,\n";
  }
  const CsvTable t = read_csv(path);
  REQUIRE(t.rows.size() == 1);
  REQUIRE(t.rows[0].size() == 3);
  CHECK(t.rows[0][2].empty());
  std::remove(path.c_str());
}
