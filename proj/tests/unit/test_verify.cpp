#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "tcpp/densities.hpp"
#include "tcpp/error.hpp"
#include "tcpp/finite_difference.hpp"
#include "tcpp/serialize.hpp"
#include "tcpp/verify.hpp"

using namespace tcpp;
using namespace tcpp::verify;

TEST_CASE("shift powers") {
  const std::vector<double> v = {1.0, 2.0, 4.0};
  CHECK(shift_power(v, 0) == v);
  CHECK(shift_power(v, 1) == std::vector<double>{1.0, 1.0, 2.0});
  CHECK(shift_power(v, 2) == std::vector<double>{1.0, 0.0, 1.0});
}

TEST_CASE("finite differences") {
  auto f = [](double t) { return std::sin(t); };
  CHECK(central_difference(f, 1.0, 1e-3, 1) == doctest::Approx(std::cos(1.0)).epsilon(1e-6));
  CHECK(central_difference(f, 1.0, 1e-2, 2, true) == doctest::Approx(-std::sin(1.0)).epsilon(1e-9));
  CHECK(forward_difference(f, 1.0, 1e-3) == doctest::Approx(std::cos(1.0)).epsilon(1e-5));
  std::vector<double> u;
  for (int i = 0; i < 40; ++i) u.push_back(std::exp(0.1 + 0.05 * i));
  const TimeSeries d = fd_derivative(TimeSeries::uniform(0.1, 0.05, u), 2);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d.value(i) == doctest::Approx(std::exp(d.time(i))).epsilon(1e-3));
  }
  CHECK_THROWS_AS(fd_derivative(TimeSeries::uniform(0.1, 0.05, {1.0, 2.0}), 4), GridError);
}

TEST_CASE("convergence order") {
  const std::vector<LevelResidual> clean = {{0.1, 1e-2, 1e-2}, {0.05, 2.5e-3, 2.5e-3}, {0.025, 6.25e-4, 6.25e-4}};
  const OrderEstimate e = convergence_order(clean);
  CHECK(e.order == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(e.floor_limited);
  const std::vector<LevelResidual> floor = {{0.1, 1e-11, 0}, {0.05, 9e-12, 0}, {0.025, 1.1e-11, 0}};
  CHECK(convergence_order(floor).floor_limited);
  CHECK_THROWS_AS(convergence_order(std::vector<LevelResidual>(clean.begin(), clean.begin() + 2)), DomainError);
}

TEST_CASE("grid validation") {
  CHECK_NOTHROW(GridSpec{}.validate());
  CHECK_NOTHROW((GridSpec{0.5, 2.0, 8, 2}.validate()));
  CHECK(GridSpec{}.evaluation_times().size() == 8u);
  CHECK_THROWS_AS((GridSpec{2.0, 1.0, 8, 4}.validate()), GridError);
  CHECK_THROWS_AS((GridSpec{0.5, 2.0, 1, 4}.validate()), GridError);
  CHECK_THROWS_AS((GridSpec{0.5, 2.0, 8, 7}.validate()), GridError);
  CHECK_THROWS_AS((GridSpec{0.0, 2.0, 8, 4}.validate()), GridError);
}

TEST_CASE("equation ids") {
  auto [id, p] = parse_equation_id("prop3.1(2)");
  CHECK(id == "prop3.1");
  CHECK(p.at("n") == 2.0);
  auto [fid, fp] = parse_equation_id("frac-dde(1/4)");
  CHECK(fid == "frac-dde");
  CHECK(fp.at("beta") == 0.25);
  CHECK(parse_equation_id("deblassie(1,3)").second.size() == 2u);
  CHECK(parse_equation_id("prop2.1").second.empty());
  CHECK_THROWS_AS(parse_equation_id("eq9.9"), InputError);
  CHECK_THROWS_AS(equation_info("nope"), InputError);
  CHECK(registry().size() == 14u);
}

TEST_CASE("a raw Poisson-IG equation converges at second order") {
  const ResidualReport r = check_equation("prop2.1", {}, GridSpec{});
  CHECK(r.pass);
  CHECK(r.levels.size() == 4u);
  CHECK(r.estimated_order == doctest::Approx(2.0).epsilon(0.1));
  for (std::size_t i = 1; i < r.levels.size(); ++i) CHECK(r.levels[i].max_residual < r.levels[i - 1].max_residual);
}

TEST_CASE("analytic derivatives satisfy the equations to rounding") {
  CHECK(exactness_prop21(1.0, 1.0, 1.0, GridSpec{}).pass);
  CHECK(exactness_thm31(1.0, GridSpec{0.25, 4.0, 8, 4}).pass);
  const auto f = exactness_frac_dde(1.0, GridSpec{0.25, 2.0, 8, 4});
  CHECK(f.pass);
  for (double r : f.level_residuals) CHECK(r <= 1e-8);
}

TEST_CASE("tempered equations approach the untempered ones as mu -> 0") {
  const ResidualReport tempered = check_equation("rmk4.1(2)", {{"mu", 1e-6}}, GridSpec{});
  const ResidualReport plain = check_equation("prop3.1(1)", {}, GridSpec{});
  CHECK(tempered.pass);
  CHECK(plain.pass);
  REQUIRE(tempered.levels.size() == plain.levels.size());
  for (std::size_t i = 0; i < plain.levels.size(); ++i) {
    CHECK(std::abs(tempered.levels[i].max_residual - plain.levels[i].max_residual) <= 1e-3);
  }
}

TEST_CASE("inverse stable density at the boundary") {
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(inverse_stable_density(1e-10, t, 0.5) ==
          doctest::Approx(1.0 / (std::sqrt(t) * std::sqrt(std::numbers::pi))).epsilon(1e-6));
    CHECK(inverse_stable_density(60.0, t, 0.5) < 1e-12);
  }
}

TEST_CASE("source terms of the composed-clock equations") {
  // (-lambda)^j (1 - shift)^j applied to the unit sequence: p'_k(0) = -lambda, lambda, 0.
  const double lambda = 1.7;
  const std::vector<double> unit = {1.0, 0.0, 0.0};
  const std::vector<double> d = shift_power(unit, 1);
  CHECK(-lambda * d[0] == -lambda);
  CHECK(-lambda * d[1] == lambda);
  CHECK(-lambda * d[2] == 0.0);
  CHECK(shift_power(unit, 2) == std::vector<double>{1.0, -2.0, 1.0});
}

TEST_CASE("report and campaign serialization") {
  const ResidualReport r = check_equation("prop2.1", {}, GridSpec{});
  const std::string j = io::report_json(r);
  CHECK(j.find("\"estimated_order\"") != std::string::npos);
  CHECK(j.find("\"levels\"") != std::string::npos);
  std::ostringstream csv;
  io::write_summary_csv(csv, {r});
  CHECK(csv.str().rfind("equation_id,finest_residual,order,pass\n", 0) == 0);

  const io::Campaign c = io::parse_campaign(R"j({"requests":[{"equation_id":"prop3.1(2)"}],"out_dir":"x"})j");
  CHECK(c.out_dir == "x");
  CHECK(c.requests.size() == 1u);
  CHECK_THROWS_AS(io::parse_campaign("[]"), InputError);
  CHECK_THROWS_AS(io::parse_campaign(R"([{"equation_id":"zzz"}])"), InputError);
  CHECK_THROWS_AS(io::parse_campaign(R"([{"equation_id":"prop2.1","tolerance":1}])"), InputError);
  CHECK_THROWS_AS(io::parse_campaign(R"([{"equation_id":"prop2.1","grid":{"points":"8"}}])"), InputError);
  CHECK_THROWS_AS(io::parse_campaign("{"), InputError);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(2.0) == "2");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
