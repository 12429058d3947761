#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "tcpp/densities.hpp"
#include "tcpp/error.hpp"
#include "tcpp/mixing.hpp"
#include "tcpp/quadrature.hpp"
#include "tcpp/samplers.hpp"
#include "tcpp/spec.hpp"
#include "tcpp/specfun.hpp"

using namespace tcpp;

namespace {

double mass(const std::function<double(double)>& f) {
  return quad::integrate_half_line(f, quad::detect_mass_center(f)).value;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("spec JSON round trip") {
  const SubordinatorSpec s = SubordinatorSpec::inverse(
      SubordinatorSpec::compose({SubordinatorSpec::stable(0.5), SubordinatorSpec::ig(1.0, 0.0)}));
  CHECK(spec_from_json(to_json(s)) == s);
  const SubordinatorSpec t = spec_from_json(R"({"type":"tempered","beta":0.5,"mu":1})");
  CHECK(t == SubordinatorSpec::tempered(0.5, 1.0));
  CHECK(t.describe().find("tempered") != std::string::npos);
}

TEST_CASE("invalid specs are input errors") {
  CHECK_THROWS_AS(spec_from_json(R"({"type":"stable","beta":1.5})"), InputError);
  CHECK_THROWS_AS(spec_from_json(R"({"type":"ig","delta":-1,"gamma":1})"), InputError);
  CHECK_THROWS_AS(spec_from_json(R"({"type":"warp"})"), InputError);
  CHECK_THROWS_AS(spec_from_json("not json"), InputError);
  CHECK_THROWS_AS(SubordinatorSpec::compose({}), InputError);
  CHECK_THROWS_AS(SubordinatorSpec::stable(0.5).base(), CapabilityError);
  CHECK_THROWS_AS(SubordinatorSpec::inverse(SubordinatorSpec::stable(0.5)).laplace_exponent(1.0),
                  CapabilityError);
}

TEST_CASE("Laplace exponents") {
  CHECK(SubordinatorSpec::ig(2.0, 1.0).laplace_exponent(1.5) ==
        doctest::Approx(2.0 * (std::sqrt(4.0) - 1.0)));
  CHECK(SubordinatorSpec::stable(0.3).laplace_exponent(2.0) == doctest::Approx(std::pow(2.0, 0.3)));
  CHECK(SubordinatorSpec::tempered(0.5, 1.0).laplace_exponent(3.0) == doctest::Approx(1.0));
  const auto c = SubordinatorSpec::compose({SubordinatorSpec::stable(0.5), SubordinatorSpec::stable(0.5)});
  CHECK(c.laplace_exponent(16.0) == doctest::Approx(2.0));
  CHECK(simplify(c) == SubordinatorSpec::stable(0.25));
}

TEST_CASE("densities integrate to one") {
  CHECK(mass([](double x) { return ig_density(x, 1.5, 1.0, 0.7); }) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mass([](double x) { return stable_density(x, 1.0, 0.3); }) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(mass([](double x) { return tempered_stable_density(x, 2.0, 0.6, 0.5); }) ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK(mass([](double x) { return inverse_stable_density(x, 1.0, 0.7); }) ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK(mass([](double x) { return hitting_time_density_ig(x, 2.0, 1.0, 1.0); }) ==
        doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("one-half stable density: closed form and integral representation") {
  for (double x : {0.05, 0.3, 1.0, 4.0, 20.0}) {
    const double levy = std::exp(-1.0 / (4.0 * x)) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 1.5));
    CHECK(stable_density(x, 1.0, 0.5) == doctest::Approx(levy).epsilon(1e-12));
    CHECK(stable_density_integral(x, 0.5) == doctest::Approx(levy).epsilon(1e-8));
  }
  // Scaling: D(t) =_d t^{1/beta} D(1).
  const double beta = 0.7, t = 2.0, x = 1.7, c = std::pow(t, 1.0 / beta);
  CHECK(stable_density(x, t, beta) == doctest::Approx(stable_density(x / c, 1.0, beta) / c).epsilon(1e-9));
}

TEST_CASE("distribution functions") {
  for (double x : {0.1, 1.0, 5.0}) {
    CHECK(stable_cdf(x, 1.0, 0.5) + stable_sf(x, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    // Levy: P(D(1) <= x) = erfc(1 / (2 sqrt x)).
    CHECK(stable_cdf(x, 1.0, 0.5) == doctest::Approx(std::erfc(0.5 / std::sqrt(x))).epsilon(1e-10));
  }
  const double ig = quad::integrate([](double y) { return ig_density(y, 1.0, 1.0, 1.0); }, 0.0, 1.3).value;
  CHECK(ig_cdf(1.3, 1.0, 1.0, 1.0) == doctest::Approx(ig).epsilon(1e-9));
}

TEST_CASE("inverse stable density at the origin and duality") {
  const double beta = 0.4, t = 1.5;
  CHECK(inverse_stable_density(0.0, t, beta) ==
        doctest::Approx(std::pow(t, -beta) / std::tgamma(1.0 - beta)).epsilon(1e-10));
  for (double x : {0.3, 1.0, 2.5}) {
    CHECK(inverse_stable_cdf(x, t, beta) == doctest::Approx(stable_sf(t, x, beta)).epsilon(1e-10));
    CHECK(hitting_time_cdf_ig(x, 2.0, 1.0, 1.0) == doctest::Approx(1.0 - ig_cdf(2.0, x, 1.0, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("hitting-time density: analytic vs finite difference") {
  for (double x : {0.2, 1.0, 3.0}) {
    CHECK(hitting_time_density_ig(x, 2.0, 1.0, 0.5) ==
          doctest::Approx(hitting_time_density_ig_fd(x, 2.0, 1.0, 0.5)).epsilon(1e-6));
  }
}

TEST_CASE("tempered Levy tail") {
  // mu = 0: c u^{-beta} / beta.
  const double beta = 0.5, u = 2.0;
  CHECK(tempered_levy_tail(u, beta, 0.0) ==
        doctest::Approx(std::pow(u, -beta) / std::tgamma(1.0 - beta)).epsilon(1e-8));
  // Closed form through the upper incomplete gamma.
  const double mu = 1.3;
  const double ref = beta / std::tgamma(1.0 - beta) * std::pow(mu, beta) *
                     boost::math::tgamma(-beta + 1.0, mu * u) / (-beta) +
                     beta / std::tgamma(1.0 - beta) * std::pow(u, -beta) * std::exp(-mu * u) / beta;
  CHECK(tempered_levy_tail(u, beta, mu) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("samplers are reproducible and have the right means") {
  const auto ig = SubordinatorSpec::ig(1.0, 2.0);
  const SampleBatch a = sample(ig, 3.0, 20000, 11);
  SamplerOptions par;
  par.jobs = 3;
  const SampleBatch b = sample(ig, 3.0, 20000, 11, par);
  CHECK(a.values == b.values);
  // E G(t) = delta t / gamma, Var = delta t / gamma^3.
  CHECK(std::abs(mean_of(a.values) - 1.5) <= 4.0 * std::sqrt(3.0 / 8.0 / 20000.0));

  const SampleBatch e = sample(SubordinatorSpec::inverse(SubordinatorSpec::stable(0.5)), 2.0, 20000, 12);
  // E E(t) = t^beta / Gamma(1 + beta); sd of E(2) is below 1.
  CHECK(std::abs(mean_of(e.values) - std::sqrt(2.0) / std::tgamma(1.5)) <= 4.0 / std::sqrt(20000.0));

  const SampleBatch tmp = sample(SubordinatorSpec::tempered(0.5, 1.0), 1.0, 20000, 13);
  // E D_mu(1) = beta mu^{beta-1} = 0.5, Var = beta (1 - beta) mu^{beta-2} = 0.25.
  CHECK(std::abs(mean_of(tmp.values) - 0.5) <= 4.0 * 0.5 / std::sqrt(20000.0));

  std::vector<double> times = {0.5, 1.0, 1.5, 2.0};
  Rng rng = make_stream(14, 0);
  const auto path = sample_path(SubordinatorSpec::inverse(SubordinatorSpec::ig(1.0, 1.0)), times, rng);
  CHECK(std::is_sorted(path.begin(), path.end()));
}

TEST_CASE("fractional stable moments") {
  for (auto [beta, p] : std::vector<std::pair<double, double>>{{0.5, 0.25}, {0.7, 0.3}, {0.3, 0.1}}) {
    CHECK(stable_moment(beta, p) ==
          doctest::Approx(std::tgamma(1.0 - p / beta) / std::tgamma(1.0 - p)).epsilon(1e-7));
  }
  CHECK_THROWS_AS(stable_moment(0.5, 0.5), DomainError);
}

TEST_CASE("mixing rules carry unit weight and the right mean") {
  const MixingRule ig = mixing_rule(SubordinatorSpec::ig(1.0, 1.0), 2.0);
  CHECK(ig.total_weight() == doctest::Approx(1.0).epsilon(1e-10));
  double m = 0.0;
  for (const auto& n : ig.nodes) m += n.w * n.x;
  CHECK(m == doctest::Approx(2.0).epsilon(1e-9));
  for (const auto& spec : {SubordinatorSpec::stable(0.3), SubordinatorSpec::inverse(SubordinatorSpec::stable(0.5)),
                           SubordinatorSpec::compose({SubordinatorSpec::stable(0.5), SubordinatorSpec::ig(1.0, 1.0)})}) {
    const MixingRule r = mixing_rule(spec, 1.0);
    CHECK(r.total_weight() == doctest::Approx(1.0).epsilon(1e-7));
    double lt = 0.0;
    if (!spec.is<InverseOf>()) {
      for (const auto& n : r.nodes) lt += n.w * std::exp(-n.x);
      CHECK(lt == doctest::Approx(std::exp(-spec.laplace_exponent(1.0))).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(clock_density(SubordinatorSpec::compose({SubordinatorSpec::ig(1.0, 1.0), SubordinatorSpec::ig(1.0, 1.0)}), 1.0, 1.0),
                  CapabilityError);
}

TEST_CASE("exact and first-passage draws of the inverse stable clock agree") {
  const auto spec = SubordinatorSpec::inverse(SubordinatorSpec::stable(0.6));
  const SampleBatch exact = sample(spec, 1.5, 4000, 21);
  Rng rng = make_stream(22, 0);
  const std::vector<double> level = {1.5};
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(sample_path(spec, level, rng)[0]);
  // Both against E E(t) = t^beta / Gamma(1 + beta); Var E(1.5) < 1.
  const double mean = std::pow(1.5, 0.6) / std::tgamma(1.6);
  CHECK(std::abs(mean_of(exact.values) - mean) <= 4.0 / std::sqrt(4000.0));
  CHECK(std::abs(mean_of(grid) - mean) <= 4.0 / std::sqrt(1000.0));
}

namespace {

// Kolmogorov-Smirnov distance between a sample and a distribution function.
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

}  // namespace

TEST_CASE("samplers match their distribution functions") {
  const std::size_t n = 10000;
  const double critical = 1.949 / std::sqrt(static_cast<double>(n));  // 0.1% level
  struct Case {
    SubordinatorSpec spec;
    double t;
    std::function<double(double)> cdf;
  };
  const std::vector<Case> cases = {
      {SubordinatorSpec::ig(1.0, 0.5), 2.0, [](double x) { return ig_cdf(x, 2.0, 1.0, 0.5); }},
      {SubordinatorSpec::stable(0.7), 1.0, [](double x) { return stable_cdf(x, 1.0, 0.7); }},
      {SubordinatorSpec::tempered(0.5, 1.0), 1.5, [](double x) { return tempered_stable_cdf(x, 1.5, 0.5, 1.0); }},
      {SubordinatorSpec::inverse(SubordinatorSpec::stable(0.3)), 1.0,
       [](double x) { return inverse_stable_cdf(x, 1.0, 0.3); }},
  };
  std::uint64_t seed = 31;
  for (const auto& c : cases) {
    CHECK(ks_distance(sample(c.spec, c.t, n, seed++).values, c.cdf) < critical);
  }
  std::vector<double> hit;
  Rng rng = make_stream(40, 0);
  const std::vector<double> level = {2.0};
  for (int i = 0; i < 2000; ++i) {
    hit.push_back(sample_path(SubordinatorSpec::inverse(SubordinatorSpec::ig(1.0, 1.0)), level, rng)[0]);
  }
  CHECK(ks_distance(hit, [](double x) { return hitting_time_cdf_ig(x, 2.0, 1.0, 1.0); }) < 1.949 / std::sqrt(2000.0));
}

TEST_CASE("composed stable clocks are stable with the product index") {
  const SampleBatch b = sample(SubordinatorSpec::compose({SubordinatorSpec::stable(0.7), SubordinatorSpec::stable(0.5)}),
                               2.0, 50000, 51);
  for (double s : {0.5, 1.0, 2.0}) {
    double m = 0.0, m2 = 0.0;
    for (double x : b.values) {
      m += std::exp(-s * x);
      m2 += std::exp(-2.0 * s * x);
    }
    m /= 50000.0;
    const double se = std::sqrt((m2 / 50000.0 - m * m) / 50000.0);
    CHECK(std::abs(m - std::exp(-2.0 * std::pow(s, 0.35))) <= 4.0 * se);
  }
}
