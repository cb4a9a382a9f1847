#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uplr/csv.hpp"
#include "uplr/matrix_market.hpp"
#include "uplr/random.hpp"

using namespace uplr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / fs::path("uplr_io_test")) {
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
}

}  // namespace

TEST_CASE("matrix market round trip is exact and deterministic", "[io]") {
  TempDir tmp;
  Rng rng(801);
  ComplexMatrix A = random_gaussian(7, 4, rng);
  const std::string path = tmp.file("a.mtx");
  write_matrix_market(path, A, {"generated for a round-trip check"});
  ComplexMatrix back = read_matrix_market(path);
  REQUIRE(back.rows() == 7);
  REQUIRE(back.cols() == 4);
  CHECK((back - A).cwiseAbs().maxCoeff() == 0.0);  // full-precision output round-trips exactly

  write_matrix_market(tmp.file("b.mtx"), A, {"generated for a round-trip check"});
  CHECK(slurp(path) == slurp(tmp.file("b.mtx")));  // byte-identical reruns
  CHECK_FALSE(fs::exists(path + ".tmp"));          // atomic write cleans up

  std::string text = slurp(path);
  CHECK(text.rfind("%%MatrixMarket matrix array complex general", 0) == 0);
  CHECK(text.find("% generated for a round-trip check") != std::string::npos);
}

TEST_CASE("matrix market reader accepts standard variants", "[io]") {
  TempDir tmp;
  SECTION("coordinate complex entries, duplicates summed") {
    const std::string path = tmp.file("coord.mtx");
    spit(path,
         "%%MatrixMarket matrix coordinate complex general\n"
         "% comment line\n"
         "3 2 3\n"
         "1 1 1.5 -2.0\n"
         "3 2 0.25 0.0\n"
         "1 1 0.5 1.0\n");
    ComplexMatrix M = read_matrix_market(path);
    REQUIRE(M.rows() == 3);
    REQUIRE(M.cols() == 2);
    CHECK(M(0, 0) == Complex(2.0, -1.0));
    CHECK(M(2, 1) == Complex(0.25, 0.0));
    CHECK(M(1, 0) == Complex(0.0, 0.0));
  }
  SECTION("real array entries get zero imaginary parts") {
    const std::string path = tmp.file("real.mtx");
    spit(path,
         "%%MatrixMarket matrix array real general\n"
         "2 2\n"
         "1.0\n-2.0\n3.0\n4.0\n");
    ComplexMatrix M = read_matrix_market(path);
    CHECK(M(0, 0) == Complex(1.0));
    CHECK(M(1, 0) == Complex(-2.0));  // column-major order
    CHECK(M(0, 1) == Complex(3.0));
    CHECK(M(1, 1) == Complex(4.0));
  }
}

TEST_CASE("matrix market reader reports structured errors", "[io]") {
  TempDir tmp;
  auto expect_error = [&](const std::string& name, const std::string& content,
                          const std::string& needle) {
    const std::string path = tmp.file(name);
    spit(path, content);
    try {
      read_matrix_market(path);
      FAIL("expected an IoError for " << name);
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  CHECK_THROWS_AS(read_matrix_market(tmp.file("missing.mtx")), IoError);
  expect_error("banner.mtx", "%%NotMatrixMarket whatever\n1 1\n0 0\n", "banner");
  expect_error("pattern.mtx", "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n",
               "unsupported field");
  expect_error("sym.mtx", "%%MatrixMarket matrix array complex hermitian\n2 2\n", "symmetry");
  expect_error("range.mtx",
               "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n",
               "out of range");
  expect_error("short.mtx", "%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n",
               "unexpected end of file");
  expect_error("trailing.mtx",
               "%%MatrixMarket matrix array real general\n1 1\n1.0\n2.0\n", "trailing");
  expect_error("badnum.mtx", "%%MatrixMarket matrix array real general\n1 1\nbogus\n",
               "malformed numeric");
  // Errors carry the offending line number.
  expect_error("lineno.mtx", "%%MatrixMarket matrix array real general\n1 1\nbogus\n", ":3:");
}

TEST_CASE("csv round trip preserves values and metadata", "[io]") {
  TempDir tmp;
  CsvTable t;
  t.comments = {"run parameters: n=4", "columns follow"};
  t.header = {"step", "coupling"};
  t.rows = {{1.0, 0.5}, {2.0, 2.5e-17}};
  const std::string path = tmp.file("t.csv");
  write_csv(path, t);
  CsvTable back = read_csv(path);
  REQUIRE(back.header.size() == 2);
  CHECK(back.header[0] == "step");
  CHECK(back.header[1] == "coupling");
  REQUIRE(back.comments.size() == 2);
  CHECK(back.comments[0] == "run parameters: n=4");
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[1][1] == 2.5e-17);  // full-precision numeric round trip
  CHECK_FALSE(fs::exists(path + ".tmp"));

  write_csv(tmp.file("t2.csv"), t);
  CHECK(slurp(path) == slurp(tmp.file("t2.csv")));
}

TEST_CASE("csv reader reports structured errors", "[io]") {
  TempDir tmp;
  SECTION("row width mismatch") {
    spit(tmp.file("w.csv"), "a,b\n1.0\n");
    CHECK_THROWS_AS(read_csv(tmp.file("w.csv")), IoError);
  }
  SECTION("malformed number") {
    spit(tmp.file("n.csv"), "a,b\n1.0,zap\n");
    try {
      read_csv(tmp.file("n.csv"));
      FAIL("expected an IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("zap") != std::string::npos);
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SECTION("missing header") {
    spit(tmp.file("e.csv"), "");
    CHECK_THROWS_AS(read_csv(tmp.file("e.csv")), IoError);
  }
  SECTION("mismatched table rejected at write time") {
    CsvTable bad;
    bad.header = {"a"};
    bad.rows = {{1.0, 2.0}};
    CHECK_THROWS_AS(write_csv(tmp.file("bad.csv"), bad), PreconditionError);
  }
}
