// Acceptance suite: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is the number of failed criteria.

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tcpp/densities.hpp"
#include "tcpp/error.hpp"
#include "tcpp/quadrature.hpp"
#include "tcpp/rng.hpp"
#include "tcpp/samplers.hpp"
#include "tcpp/serialize.hpp"
#include "tcpp/specfun.hpp"
#include "tcpp/timechange.hpp"
#include "tcpp/verify.hpp"

using namespace tcpp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const SubordinatorSpec kHalf = SubordinatorSpec::stable(0.5);

double integral_half_line(const std::function<double(double)>& f) {
  return quad::integrate_half_line(f, quad::detect_mass_center(f)).value;
}

// Empirical mean of exp(-s X) and its standard error.
std::pair<double, double> empirical_lt(const std::vector<double>& xs, double s) {
  double m = 0.0, m2 = 0.0;
  for (double x : xs) {
    const double e = std::exp(-s * x);
    m += e;
    m2 += e * e;
  }
  const double n = static_cast<double>(xs.size());
  m /= n;
  return {m, std::sqrt(std::max(0.0, m2 / n - m * m) / n)};
}

// ------------------------------------------------------------------------

Outcome triple_agreement() {
  double worst_quad = 0.0, worst_z = 0.0;
  std::uint64_t seed = 101;
  for (double lambda : {0.5, 2.0}) {
    for (double gamma : {0.5, 1.0}) {
      for (double t : {0.5, 1.0, 5.0}) {
        const SubordinatorSpec ig = SubordinatorSpec::ig(1.0, gamma);
        const PmfTable mc = pmf_monte_carlo(30, t, lambda, ig, 100000, seed++);
        for (int k = 0; k <= 30; ++k) {
          const double b = pmf_bessel_ig(k, t, lambda, 1.0, gamma);
          worst_quad = std::max(worst_quad, std::abs(b - pmf_quadrature(k, t, lambda, ig)));
          const double se = std::sqrt(b * (1.0 - b) / 100000.0);
          if (se > 0.0) worst_z = std::max(worst_z, std::abs(mc.values[k] - b) / se);
        }
      }
    }
  }
  return {worst_quad <= 1e-8 && worst_z <= 4.0,
          "max |bessel - quadrature| = " + fmt("%.2e", worst_quad) +
              ", max MC z-score = " + fmt("%.2f", worst_z)};
}

Outcome closed_form_anchor() {
  double worst = 0.0;
  for (double lambda : {0.5, 2.0}) {
    for (double gamma : {0.5, 1.0}) {
      for (double t : {0.5, 1.0, 5.0}) {
        const double exact = std::exp(gamma * t - t * std::sqrt(gamma * gamma + 2.0 * lambda));
        worst = std::max(worst, std::abs(pmf_bessel_ig(0, t, lambda, 1.0, gamma) - exact));
      }
    }
  }
  return {worst <= 1e-10, "max |p_0 - exp(delta gamma t - delta t sqrt(gamma^2 + 2 lambda))| = " +
                              fmt("%.2e", worst)};
}

Outcome normalization() {
  double worst_table = 0.0;
  auto check = [&](const PmfTable& tab) {
    worst_table = std::max(worst_table, std::abs(tab.total() + tab.tail_bound - 1.0));
  };
  for (double lambda : {0.5, 2.0}) {
    for (double t : {0.5, 1.0, 5.0}) check(pmf_table_bessel(1.0, 1.0, lambda, t));
  }
  const std::vector<SubordinatorSpec> specs = {
      SubordinatorSpec::ig(1.0, 1.0),
      SubordinatorSpec::ig(1.0, 0.0),
      SubordinatorSpec::stable(0.7),
      SubordinatorSpec::tempered(0.5, 1.0),
      SubordinatorSpec::inverse(kHalf),
      SubordinatorSpec::inverse(SubordinatorSpec::ig(1.0, 1.0)),
      SubordinatorSpec::inverse(SubordinatorSpec::tempered(0.5, 1.0)),
      SubordinatorSpec::compose({kHalf, kHalf}),
  };
  for (const auto& s : specs) check(pmf_table_quadrature(s, 1.0, 1.0));
  check(pmf_monte_carlo(std::nullopt, 1.0, 1.0, SubordinatorSpec::ig(1.0, 1.0), 10000, 7));
  check(pmf_monte_carlo(20, 1.0, 1.0, kHalf, 10000, 8));

  const std::vector<std::function<double(double)>> densities = {
      [](double x) { return ig_density(x, 1.0, 1.0, 1.0); },
      [](double x) { return ig_density(x, 2.0, 1.0, 0.5); },
      [](double x) { return stable_density(x, 1.0, 0.25); },
      [](double x) { return stable_density(x, 1.0, 0.5); },
      [](double x) { return stable_density(x, 1.0, 0.7); },
      [](double x) { return tempered_stable_density(x, 1.0, 0.5, 1.0); },
      [](double x) { return tempered_stable_density(x, 1.0, 0.25, 2.0); },
      [](double x) { return inverse_stable_density(x, 1.0, 0.5); },
      [](double x) { return inverse_stable_density(x, 2.0, 0.25); },
      [](double x) { return inverse_tempered_density(x, 1.0, 0.5, 1.0); },
      [](double x) { return hitting_time_density_ig(x, 1.0, 1.0, 1.0); },
  };
  double worst_density = 0.0;
  for (const auto& f : densities) {
    worst_density = std::max(worst_density, std::abs(integral_half_line(f) - 1.0));
  }
  return {worst_table <= 1e-6 && worst_density <= 1e-6,
          "max |sum + tail - 1| = " + fmt("%.2e", worst_table) +
              ", max |integral of density - 1| = " + fmt("%.2e", worst_density)};
}

Outcome campaign() {
  std::ifstream in(TCPP_DEFAULT_CAMPAIGN);
  std::stringstream text;
  text << in.rdbuf();
  const io::Campaign c = io::parse_campaign(text.str());
  int passed = 0;
  std::string failed;
  for (const auto& r : c.requests) {
    const verify::ResidualReport rep =
        verify::check_equation(r.equation_id, r.params, r.grid, r.k_range);
    std::fprintf(stderr, "    %-22s order %.3f in [%.2f, %.2f], finest %.3e, %s\n",
                 rep.variant.c_str(), rep.estimated_order, rep.band_lo, rep.band_hi,
                 rep.levels.back().max_residual, rep.pass ? "pass" : "FAIL");
    if (rep.pass && rep.levels.size() >= 3) {
      ++passed;
    } else {
      failed += " " + rep.variant;
    }
  }
  std::set<std::string> ids;
  for (const auto& r : c.requests) ids.insert(verify::parse_equation_id(r.equation_id).first);
  const bool all_ids = ids.size() == verify::registry().size();
  return {passed == static_cast<int>(c.requests.size()) && all_ids,
          std::to_string(passed) + "/" + std::to_string(c.requests.size()) +
              " requests pass, " + std::to_string(ids.size()) + " distinct equations" +
              (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome exactness() {
  const auto a = verify::exactness_prop21(1.0, 1.0, 1.0, verify::GridSpec{0.5, 2.0, 8, 4});
  const auto b = verify::exactness_thm31(1.0, verify::GridSpec{0.25, 4.0, 8, 4});
  const double wa = *std::max_element(a.level_residuals.begin(), a.level_residuals.end());
  const double wb = *std::max_element(b.level_residuals.begin(), b.level_residuals.end());
  return {a.pass && b.pass, "prop2.1 k=0 worst " + fmt("%.2e", wa) + " (<= 1e-8), thm3.1(2) k=0 worst " +
                                fmt("%.2e", wb) + " (<= 1e-6)"};
}

Outcome moments() {
  double worst = 0.0;
  PmfOptions opts;
  opts.tail_tol = 1e-13;
  for (auto [lambda, delta, gamma, t] :
       std::vector<std::array<double, 4>>{{2, 1, 1, 3}, {1, 1, 0.5, 1}, {0.5, 2, 1, 5}}) {
    const Moments m = moments_ig(t, lambda, delta, gamma);
    const Moments s = table_moments(pmf_table_bessel(delta, gamma, lambda, t, std::nullopt, opts));
    worst = std::max({worst, std::abs(m.mean - s.mean), std::abs(m.variance - s.variance)});
  }
  // Monte Carlo at lambda = 2, delta = 1, gamma = 1, t = 3.
  const double lambda = 2.0, t = 3.0;
  const SampleBatch g = sample(SubordinatorSpec::ig(1.0, 1.0), t, 100000, 202);
  std::vector<double> n;
  Rng rng = make_stream(203, 0);
  for (double x : g.values) n.push_back(std::poisson_distribution<long long>(lambda * x)(rng));
  const double cnt = static_cast<double>(n.size());
  double mean = 0.0;
  for (double v : n) mean += v;
  mean /= cnt;
  double m2 = 0.0, m4 = 0.0;
  for (double v : n) {
    m2 += (v - mean) * (v - mean);
    m4 += std::pow(v - mean, 4);
  }
  m2 /= cnt - 1.0;
  m4 /= cnt;
  const Moments exact = moments_ig(t, lambda, 1.0, 1.0);
  const double z_mean = std::abs(mean - exact.mean) / std::sqrt(m2 / cnt);
  const double z_var = std::abs(m2 - exact.variance) / std::sqrt((m4 - m2 * m2) / cnt);
  return {worst <= 1e-6 && z_mean <= 4.0 && z_var <= 4.0,
          "closed form vs pmf sums " + fmt("%.2e", worst) + ", MC mean z " + fmt("%.2f", z_mean) +
              ", MC variance z " + fmt("%.2f", z_var)};
}

Outcome mixed_poisson() {
  const double t = 2.0, lambda = 1.0;
  const std::size_t n = 100000;
  const SampleBatch g = sample(SubordinatorSpec::ig(1.0, 0.0), t, n, 303);
  Rng rng_a = make_stream(304, 0);
  Rng rng_b = make_stream(305, 0);
  std::normal_distribution<double> normal;
  constexpr int kBins = 30;
  std::vector<double> a(kBins + 1, 0.0), b(kBins + 1, 0.0);
  auto bin = [](double mean, Rng& rng) {
    if (mean > 1e9) return kBins;
    return static_cast<int>(std::min<long long>(kBins, std::poisson_distribution<long long>(mean)(rng)));
  };
  for (double x : g.values) a[bin(lambda * x, rng_a)] += 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = normal(rng_b);
    b[bin(lambda * t * t / (z * z), rng_b)] += 1.0;
  }
  double chi2 = 0.0;
  int df = -1;
  for (int k = 0; k <= kBins; ++k) {
    if (a[k] + b[k] == 0.0) continue;
    chi2 += (a[k] - b[k]) * (a[k] - b[k]) / (a[k] + b[k]);
    ++df;
  }
  const double pval = boost::math::gamma_q(0.5 * df, 0.5 * chi2);
  return {pval > 0.001, "chi-square " + fmt("%.2f", chi2) + " on " + std::to_string(df) +
                            " df, p = " + fmt("%.3f", pval)};
}

Outcome laplace_exponents() {
  const double t = 1.0;
  double worst = 0.0, worst_z = 0.0;
  struct Case {
    SubordinatorSpec spec;
    std::function<double(double)> density;  // in x at time t
    std::function<double(double)> lt;       // E exp(-s X(t))
  };
  std::vector<Case> cases = {
      {SubordinatorSpec::ig(1.0, 1.0), [](double x) { return ig_density(x, 1.0, 1.0, 1.0); },
       [](double s) { return std::exp(-(std::sqrt(1.0 + 2.0 * s) - 1.0)); }},
      {SubordinatorSpec::tempered(0.5, 1.0),
       [](double x) { return tempered_stable_density(x, 1.0, 0.5, 1.0); },
       [](double s) { return std::exp(-(std::sqrt(s + 1.0) - 1.0)); }},
  };
  for (double beta : {0.25, 0.5, 0.7}) {
    cases.push_back({SubordinatorSpec::stable(beta),
                     [beta](double x) { return stable_density(x, 1.0, beta); },
                     [beta](double s) { return std::exp(-std::pow(s, beta)); }});
  }
  std::uint64_t seed = 401;
  for (const auto& c : cases) {
    const SampleBatch batch = sample(c.spec, t, 100000, seed++);
    for (double s : {0.5, 1.0, 2.0}) {
      worst = std::max(worst, std::abs(specfun::laplace_numeric(c.density, s) - c.lt(s)));
      const auto [m, se] = empirical_lt(batch.values, s);
      worst_z = std::max(worst_z, std::abs(m - c.lt(s)) / se);
    }
  }
  // Inverse stable: the transform in t of m(x, t) is s^{beta - 1} exp(-x s^beta), and
  // E exp(-s E(t)) = E_beta(-s t^beta).
  for (double beta : {0.25, 0.5, 0.7}) {
    for (double x : {0.5, 1.0}) {
      for (double s : {0.5, 1.0, 2.0}) {
        const double num = specfun::laplace_numeric(
            [&](double tt) { return inverse_stable_density(x, tt, beta); }, s);
        worst = std::max(worst, std::abs(num - std::pow(s, beta - 1.0) * std::exp(-x * std::pow(s, beta))));
      }
    }
    const SampleBatch batch = sample(SubordinatorSpec::inverse(SubordinatorSpec::stable(beta)), t, 100000, seed++);
    for (double s : {0.5, 1.0, 2.0}) {
      const auto [m, se] = empirical_lt(batch.values, s);
      worst_z = std::max(worst_z, std::abs(m - specfun::mittag_leffler(beta, -s)) / se);
    }
  }
  return {worst <= 1e-7 && worst_z <= 4.0,
          "max |numerical LT - closed form| = " + fmt("%.2e", worst) +
              ", max sampled LT z-score = " + fmt("%.2f", worst_z)};
}

Outcome composition_closure() {
  const SampleBatch batch = sample(SubordinatorSpec::compose({kHalf, kHalf}), 1.0, 100000, 501);
  double worst_z = 0.0;
  for (double s : {0.5, 1.0, 2.0}) {
    const auto [m, se] = empirical_lt(batch.values, s);
    worst_z = std::max(worst_z, std::abs(m - std::exp(-std::pow(s, 0.25))) / se);
  }
  return {worst_z <= 4.0, "max z-score against exp(-s^{1/4}) = " + fmt("%.2f", worst_z)};
}

Outcome duality() {
  const std::vector<double> lattice = {0.25, 0.5, 1.0, 2.0, 4.0};
  quad::Options q;
  q.abs_tol = 1e-11;
  q.rel_tol = 1e-11;
  double worst = 0.0;
  for (double beta : {0.25, 0.5}) {
    for (double x : lattice) {
      for (double t : lattice) {
        const double e = quad::integrate([&](double y) { return inverse_stable_density(y, t, beta); }, 0.0, x, q).value;
        worst = std::max(worst, std::abs(e - stable_sf(t, x, beta)));
      }
    }
  }
  for (double x : lattice) {
    for (double t : lattice) {
      const double e = quad::integrate([&](double y) { return inverse_tempered_density(y, t, 0.5, 1.0); }, 0.0, x, q).value;
      worst = std::max(worst, std::abs(e - (1.0 - tempered_stable_cdf(t, x, 0.5, 1.0))));
    }
  }
  return {worst <= 1e-5, "max |P(E(t) <= x) - P(D(x) >= t)| = " + fmt("%.2e", worst)};
}

Outcome growth_rate() {
  const double t = 200.0, delta = 1.0, gamma = 1.0;
  std::string detail;
  bool pass = true;
  for (double lambda : {1.0, 2.0}) {
    const std::vector<double> times = {t};
    double mean = 0.0;
    for (int p = 0; p < 100; ++p) {
      Rng rng = make_stream(601 + static_cast<std::uint64_t>(lambda), p);
      const double g = sample_path(SubordinatorSpec::ig(delta, gamma), times, rng).back();
      mean += std::poisson_distribution<long long>(lambda * g)(rng) / t;
    }
    mean /= 100.0;
    const double corrected = lambda * delta / gamma, stated = delta / (lambda * gamma);
    const bool ok = std::abs(mean / corrected - 1.0) <= 0.05;
    const bool stated_ok = std::abs(mean / stated - 1.0) <= 0.05;
    if (lambda == 1.0) pass = ok;
    detail += (detail.empty() ? "" : "; ") + std::string("lambda=") + fmt("%g", lambda) +
              ": mean N(G(200))/200 = " + fmt("%.4f", mean) + " vs lambda delta/gamma = " +
              fmt("%g", corrected) + (ok ? " (inside 5%)" : " (outside 5%)") +
              ", stated delta/(lambda gamma) = " + fmt("%g", stated) +
              (stated_ok ? " (inside)" : " (rejected)");
  }
  return {pass, detail};
}

Outcome waiting_times() {
  const double delta = 1.0 / std::sqrt(2.0), gamma = 1.0, lambda = 1.0;
  const std::size_t n = 100000;
  const std::vector<double> j = sample_waiting_times(lambda, delta, gamma, n, 701);
  double worst_z = 0.0;
  for (double x : {0.5, 1.0, 2.0}) {
    const double exact = waiting_time_survival(x, lambda, delta, gamma);
    const double frac = static_cast<double>(std::count_if(j.begin(), j.end(), [x](double v) { return v > x; })) / n;
    worst_z = std::max(worst_z, std::abs(frac - exact) / std::sqrt(exact * (1.0 - exact) / n));
  }
  double worst_lt = 0.0;
  const std::vector<double> j0 = sample_waiting_times(lambda, delta, 0.0, n, 702);
  for (double s : {0.5, 1.0, 2.0}) {
    const double closed = lambda / (lambda + std::sqrt(s));
    worst_lt = std::max(worst_lt, std::abs(waiting_time_lt(s, lambda, delta, 0.0) - closed));
    const auto [m, se] = empirical_lt(j0, s);
    worst_z = std::max(worst_z, std::abs(m - closed) / se);
  }
  return {worst_z <= 4.0 && worst_lt <= 1e-12,
          "max z-score (survival and sampled LT) = " + fmt("%.2f", worst_z) +
              ", |LT - lambda/(lambda + sqrt s)| = " + fmt("%.1e", worst_lt)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"triple agreement of Bessel, quadrature and Monte Carlo pmfs", triple_agreement},
      {"closed-form k=0 anchor", closed_form_anchor},
      {"normalization of tables and densities", normalization},
      {"full verification campaign", campaign},
      {"analytic exactness spot checks", exactness},
      {"moments", moments},
      {"mixed-Poisson identity", mixed_poisson},
      {"Laplace exponents", laplace_exponents},
      {"composition closure", composition_closure},
      {"duality of inverse and direct clocks", duality},
      {"growth rate", growth_rate},
      {"waiting times", waiting_times},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %zu: %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
