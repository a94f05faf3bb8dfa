#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corner_euler/io.hpp"
#include "corner_euler/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace corner_euler;

namespace {

// Minimal RFC 4180 reader for one record.
std::vector<std::string> parse_record(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> e(-300.0, 300.0), s(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = s(rng) * std::pow(10.0, e(rng));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv_field quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_field("") == "");
  for (std::string s : {"x,y", "q\"q", "\"", ",,", "a\rb"}) {
    const std::string rec = csv_field(s) + "," + csv_field("tail");
    if (s.find_first_of("\r\n") != std::string::npos) continue;
    const auto f = parse_record(rec);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == s);
    CHECK(f[1] == "tail");
  }
}

TEST_CASE("trajectory csv") {
  Trajectory t;
  t.id = 3;
  t.kind = PointKind::particle;
  t.times = {0.0, 0.5};
  t.disk_positions = {{0.1, 0.2}, {0.3, -0.4}};
  t.physical_positions = {{1.0, 2.0}, {3.0, 4.0}};
  std::ostringstream os;
  write_trajectory_csv(os, std::span<const Trajectory>(&t, 1));
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "t,id,kind,y1,y2,x1,x2");
  const auto r = parse_record(ls[2]);
  REQUIRE(r.size() == 7);
  CHECK(r[0] == "0.5");
  CHECK(r[1] == "3");
  CHECK(r[2] == "particle");
  CHECK(std::stod(r[4]) == -0.4);

  std::ostringstream no_header;
  write_trajectory_csv(no_header, std::span<const Trajectory>(&t, 1), false);
  CHECK(lines(no_header.str()).size() == 2);
}

TEST_CASE("vorticity csv and snapshot json") {
  DiskVorticity v = single_vortex({0.25, -0.5}, 2.0);
  std::ostringstream os;
  write_vorticity_csv(os, v);
  CHECK(os.str() == "z1,z2,w\n0.25,-0.5,2\n");

  const std::vector<Vec2> pos{{0.1, 0.2}};
  const std::vector<double> w{3.0};
  const auto j = nlohmann::json::parse(snapshot_json(1.5, pos, w));
  CHECK(j["t"] == 1.5);
  CHECK(j["particles"][0][1] == 0.2);
  CHECK(j["particles"][0][2] == 3.0);
  const std::vector<double> w2{1.0, 2.0};
  CHECK_THROWS_AS(snapshot_json(0.0, pos, w2), std::invalid_argument);
}

TEST_CASE("linear_fit") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const LinearFit f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const std::vector<double> one{1.0}, same{2.0, 2.0};
  CHECK_THROWS_AS(linear_fit(one, one), std::invalid_argument);
  CHECK_THROWS_AS(linear_fit(same, x), std::invalid_argument);
}

TEST_CASE("report json") {
  FitReport r;
  r.name = "demo";
  r.n_samples = 10;
  r.max_ratio = 0.5;
  r.fitted_constant = std::numeric_limits<double>::infinity();
  r.pass = true;
  r.threshold = 1.0;
  r.details = {{"k", 2.0}};
  const auto j = nlohmann::json::parse(to_json(r));
  for (const char* key : {"name", "n_samples", "max_ratio", "fitted_constant", "slope", "r_squared", "pass"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["fitted_constant"].is_null());
  CHECK(j["slope"].is_null());
  CHECK(j["details"]["k"] == 2.0);
  CHECK(summary(r).rfind("PASS demo", 0) == 0);
  r.pass = false;
  CHECK(summary(r).rfind("FAIL", 0) == 0);
}
