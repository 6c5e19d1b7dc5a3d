#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <matspec/csv.hpp>
#include <matspec/rng.hpp>
#include <matspec/svg.hpp>
#include <sstream>

using namespace matspec;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("csv_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("series csv round trips at full precision") {
  Rng rng(901);
  TimeSeries ts;
  ts.values.resize(17, 3);
  for (int t = 0; t < 17; ++t)
    for (int c = 0; c < 3; ++c) ts.values(t, c) = rng.normal() * std::pow(10.0, c - 1);

  for (bool header : {false, true}) {
    TempFile f(header ? "hdr.csv" : "nohdr.csv");
    {
      std::ofstream out(f.path, std::ios::binary);
      write_series_csv(out, ts, header);
    }
    const TimeSeries back = read_series_csv(f.path);
    REQUIRE(back.n() == 17);
    REQUIRE(back.d() == 3);
    CHECK((back.values - ts.values).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("strict parser reports row and column of malformed input") {
  {
    std::istringstream ragged("1,2\n3,4\n5\n");
    CHECK_THROWS_WITH_AS(read_csv(ragged, "t.csv"), doctest::Contains("row 3"), std::runtime_error);
  }
  {
    TempFile f("badnum.csv");
    std::ofstream(f.path) << "1,2\n3,oops\n";
    try {
      read_series_csv(f.path);
      FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("row 2") != std::string::npos);
      CHECK(msg.find("column 2") != std::string::npos);
      CHECK(msg.find("oops") != std::string::npos);
    }
  }
  {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), std::runtime_error);
  }
}

TEST_CASE("summary csv round trips") {
  Rng rng(907);
  std::vector<double> grid = {0.5, 1.0, 1.5};
  std::vector<std::vector<Matrix>> draws;
  for (int m = 0; m < 15; ++m) {
    std::vector<Matrix> f;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      Matrix a(2, 2);
      const double x = 1.0 + rng.uniform();
      a << Complex(x, 0), Complex(0.2, 0.1 * x), Complex(0.2, -0.1 * x), Complex(2 * x, 0);
      f.push_back(a);
    }
    draws.push_back(f);
  }
  const SpectralSummary s = summarize_draws(draws, grid);

  TempFile f("summary.csv");
  {
    std::ofstream out(f.path, std::ios::binary);
    write_summary_csv(out, s);
  }
  const SpectralSummary back = read_summary_csv(f.path);
  REQUIRE(back.grid.size() == grid.size());
  CHECK((back.median - s.median).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.uniform_hi - s.uniform_hi).cwiseAbs().maxCoeff() == 0.0);

  const auto med = summary_median_spectrum(back);
  REQUIRE(med.size() == grid.size());
  for (const auto& m : med) CHECK(is_hermitian(m));
  CHECK(med[0](0, 0).real() == doctest::Approx(s.median(0, 0)));
  CHECK(med[0](1, 0).imag() == doctest::Approx(-s.median(2, 0)));
}

TEST_CASE("svg plot contains the expected panels") {
  Rng rng(911);
  std::vector<double> grid;
  for (int i = 1; i <= 16; ++i) grid.push_back(0.19 * i);
  std::vector<std::vector<Matrix>> draws;
  for (int m = 0; m < 11; ++m) {
    std::vector<Matrix> f;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      Matrix a(2, 2);
      const double x = 1.0 + 0.1 * rng.normal();
      a << Complex(x, 0), Complex(0.3, 0.1), Complex(0.3, -0.1), Complex(x + 0.5, 0);
      f.push_back(a);
    }
    draws.push_back(f);
  }
  const SpectralSummary s = summarize_draws(draws, grid);
  std::ostringstream out;
  write_summary_svg(out, s);
  const std::string svg = out.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("f11") != std::string::npos);
  CHECK(svg.find("Re f12") != std::string::npos);
  CHECK(svg.find("Im f12") != std::string::npos);
  CHECK(svg.find("f22") != std::string::npos);
  // d=2 -> 4 panels
  std::size_t panels = 0;
  for (std::size_t p = svg.find("<rect x="); p != std::string::npos; p = svg.find("<rect x=", p + 1)) ++panels;
  CHECK(panels == 4);
}

TEST_CASE("format_double survives a parse round trip") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456789.123456789, -2.5e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
