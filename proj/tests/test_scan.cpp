#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scsgp/scan.hpp"

using namespace scsgp;
using namespace scsgp::scan;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(std::stod(f));
  return out;
}

GridSpec small_numeric() {
  GridSpec g;
  g.family = states::Family::entangled;
  g.theta = kPi / 4;
  g.lambda = 0.25;
  g.r0 = g.r1 = 0.2;
  g.alpha0 = {-1.0, 1.0, 3};
  g.alpha1 = {-0.5, 1.0, 4};
  g.mode = Mode::both;
  return g;
}

}  // namespace

TEST_CASE("range and angle parsing") {
  const Range r = parse_range("-3:3:121");
  CHECK(r.start == -3.0);
  CHECK(r.stop == 3.0);
  CHECK(r.count == 121);
  const auto v = r.values();
  CHECK(v.front() == -3.0);
  CHECK(v.back() == 3.0);
  CHECK(v[60] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse_range("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("0:1:2.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("a:1:3"), std::invalid_argument);
  CHECK_THROWS_AS(Range({1.0, 1.0, 3}).validate("a"), std::invalid_argument);
  CHECK_THROWS_AS(Range({0.0, 1.0, 1}).validate("a"), std::invalid_argument);

  CHECK(parse_angle("pi/4") == doctest::Approx(kPi / 4).epsilon(1e-16));
  CHECK(parse_angle("3*pi/4") == doctest::Approx(3 * kPi / 4).epsilon(1e-16));
  CHECK(parse_angle("-pi/2") == doctest::Approx(-kPi / 2).epsilon(1e-16));
  CHECK(parse_angle("pi") == kPi);
  CHECK(parse_angle("0.785398") == 0.785398);
  CHECK(parse_angle(" 0.5*pi ") == doctest::Approx(kPi / 2).epsilon(1e-16));
  CHECK_THROWS_AS(parse_angle("pie"), std::invalid_argument);
  CHECK_THROWS_AS(parse_angle("pi/0"), std::invalid_argument);

  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.r0 = 0.2;
  g.r1 = 0.5;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // r_ref needed
  g.r_ref = 0.3;
  CHECK_NOTHROW(g.validate());

  GridSpec n = small_numeric();
  n.alpha0 = {-2.0, 2.0, 3};
  CHECK_THROWS_AS(n.validate(), std::invalid_argument);
  n.force = true;
  CHECK(n.validate().size() == 1);
  n.mode = Mode::analytic;
  n.force = false;
  CHECK(n.validate().empty());

  GridSpec bad = small_numeric();
  bad.lambda = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = small_numeric();
  bad.theta = 4.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(small_numeric().resolved_r_ref() == 0.2);
}

TEST_CASE("analytic contour scan") {
  GridSpec g;
  g.family = states::Family::sep_balanced;
  g.theta = parse_angle("0.785398");
  g.lambda = 0.5;
  g.r0 = g.r1 = 0.2;
  g.alpha0 = parse_range("-3:3:121");
  g.alpha1 = parse_range("-3:3:121");
  const auto rep = run_scan(g);
  const auto csv = lines(to_csv(rep));
  REQUIRE(csv.size() == 14642u);
  CHECK(csv[0] == "alpha0,alpha1,gp_analytic,gp_wrapped");
  // row-major: alpha1 varies fastest
  CHECK(fields(csv[1])[0] == -3.0);
  CHECK(fields(csv[1])[1] == -3.0);
  CHECK(fields(csv[2])[0] == -3.0);
  CHECK(fields(csv[122])[0] == doctest::Approx(-2.95));
  const auto row = fields(csv[1 + 121 * 30 + 100]);
  CHECK(row[2] == phase::gp_analytic({g.family, g.lambda, {row[0], g.r0}, {row[1], g.r1}}, g.theta));
  CHECK(row[3] == doctest::Approx(phase::wrap(row[2])).epsilon(1e-15));
  CHECK(to_csv(rep).find('\r') == std::string::npos);
}

TEST_CASE("degenerate grid at the origin") {
  GridSpec g;
  g.family = states::Family::sep_unbalanced;
  g.theta = kPi / 3;
  g.lambda = 0.5;
  g.r0 = g.r1 = 0.2;
  g.alpha0 = {0.0, 1.0, 2};
  g.alpha1 = {0.0, 1.0, 2};
  const auto rep = run_scan(g);
  REQUIRE(rep.rows.size() == 4u);
  for (const auto& r : rep.rows) {
    if (r.alpha0 * r.alpha1 == 0.0) {
      CHECK(r.gp_analytic == 0.0);
    } else {
      CHECK(r.gp_analytic == doctest::Approx(-2 * kPi * std::exp(0.4) * std::sin(kPi / 3)).epsilon(1e-14));
    }
  }
}

TEST_CASE("numeric scan columns") {
  const auto rep = run_scan(small_numeric());
  const auto csv = lines(to_csv(rep));
  CHECK(csv[0] == "alpha0,alpha1,gp_analytic,gp_wrapped,gp_numeric,gp_total,gp_dynamical,abs_err_mod2pi");
  REQUIRE(csv.size() == 13u);
  for (std::size_t i = 1; i < csv.size(); ++i) {
    const auto f = fields(csv[i]);
    REQUIRE(f.size() == 8u);
    CHECK(f[4] == doctest::Approx(f[5] - f[6]).epsilon(1e-14));
    CHECK(f[7] <= 1e-5);
  }
  CHECK(rep.summary.max_abs_err_mod2pi <= 1e-5);
  CHECK(rep.summary.total_phase_claim);
  CHECK(rep.n_max_reached >= 24);

  const auto m = manifest(rep);
  CHECK(m["command"] == "scan");
  CHECK(m["inputs"]["r_ref"] == 0.2);
  CHECK(m["truncation_reached"]["nmax"] == rep.n_max_reached);
  CHECK(m["summary"].contains("max_abs_err_mod2pi"));
}

TEST_CASE("determinism") {
  GridSpec g = small_numeric();
  g.workers = 1;
  const std::string serial = to_csv(run_scan(g));
  g.workers = 3;
  const auto par = run_scan(g);
  CHECK(to_csv(par) == serial);

  const auto rerun = run_scan(grid_from_manifest(json::parse(manifest(par).dump())));
  CHECK(to_csv(rerun) == serial);
  CHECK_THROWS(grid_from_manifest(json{{"command", "line"}}));
}

TEST_CASE("line scan") {
  LineSpec s;
  s.theta = kPi / 4;
  s.lambda = 0.5;
  s.r0 = 0.2;
  s.r1 = 0.5;
  s.alpha = {-2.0, 2.0, 41};
  const auto rep = run_line(s);
  REQUIRE(rep.rows.size() == 41u);
  CHECK(lines(to_csv(rep))[0] == "alpha,abs_gp_ent,abs_gp_sep_unbal,abs_gp_sep_bal");
  const auto& mid = rep.rows[20];
  CHECK(mid.alpha == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(mid.abs_gp_ent == 0.0);
  CHECK(mid.abs_gp_sep_unbal == 0.0);
  CHECK(mid.abs_gp_sep_bal == 0.0);
  for (int i = 0; i < 20; ++i) {
    const auto& a = rep.rows[i];
    const auto& b = rep.rows[40 - i];
    CHECK(std::abs(a.abs_gp_ent - b.abs_gp_ent) <= 1e-12);
    CHECK(std::abs(a.abs_gp_sep_unbal - b.abs_gp_sep_unbal) <= 1e-12);
    CHECK(std::abs(a.abs_gp_sep_bal - b.abs_gp_sep_bal) <= 1e-12);
  }

  // eta0 < eta1: the balanced modulus falls as lambda grows
  double prev = 1e300;
  for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    s.lambda = lam;
    s.alpha = {0.5, 1.0, 2};
    const double v = run_line(s).rows.back().abs_gp_sep_bal;
    CHECK(v < prev);
    prev = v;
  }
  CHECK(to_csv(run_line(line_from_manifest(manifest(rep)))) == to_csv(rep));
}

TEST_CASE("unwritable output") {
  CHECK_THROWS_AS(write_file("/nonexistent-dir/out.csv", "x"), std::runtime_error);
}
