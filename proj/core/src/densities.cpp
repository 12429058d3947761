#include "tcpp/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "tcpp/error.hpp"
#include "tcpp/quadrature.hpp"
#include "tcpp/specfun.hpp"
#include "zolotarev.hpp"

namespace tcpp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void require_positive(double v, const char* name, const char* op) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << op << ": " << name << " must be positive and finite, got " << v;
    throw DomainError(msg.str());
  }
}

void require_nonnegative(double v, const char* name, const char* op) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << op << ": " << name << " must be nonnegative and finite, got " << v;
    throw DomainError(msg.str());
  }
}

void require_beta(double beta, const char* op) {
  if (!(beta > 0.0 && beta < 1.0)) {
    std::ostringstream msg;
    msg << op << ": beta must lie in (0, 1), got " << beta;
    throw DomainError(msg.str());
  }
}

double normal_cdf(double w) { return 0.5 * std::erfc(-w / kSqrt2); }

using detail::log_zolotarev;
using detail::log_zolotarev_reflected;

double log_zolotarev_at_zero(double beta) {
  return beta / (1.0 - beta) * std::log(beta) + std::log(1.0 - beta);
}

// Root of la(v) = target on [0, pi/2] for la monotone, given the signs at
// the ends differ.
template <class L>
double bisect_crossing(L&& la, double target, bool increasing) {
  double lo = 0.0;
  double hi = 0.5 * kPi;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((la(mid) < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// int_0^pi g(a(phi) x^{-alpha}) dphi. The upper half is integrated in
// psi = pi - phi, and each half is split where the argument crosses 1.
template <class F>
double integrate_phi(F&& g, double x, double beta) {
  const double alpha = beta / (1.0 - beta);
  const double log_xa = alpha * std::log(x);
  auto lower_log = [&](double phi) { return log_zolotarev(phi, beta); };
  auto upper_log = [&](double psi) { return log_zolotarev_reflected(psi, beta); };
  auto lower = [&](double phi) { return g(std::exp(lower_log(phi) - log_xa)); };
  auto upper = [&](double psi) { return g(std::exp(upper_log(psi) - log_xa)); };
  // Rounding in log a(phi) is amplified by 1 / (1 - beta) and by z itself.
  const double z_min = std::exp(log_zolotarev_at_zero(beta) - log_xa);
  quad::Options q;
  q.abs_tol = 1e-300;
  q.rel_tol = std::max(2e-13, 50.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(1.0, z_min) / (1.0 - beta));
  const double mid = 0.5 * kPi;
  const double log_mid = lower_log(mid);
  auto piece = [&](const auto& f, double a, double c, double b) {
    if (c <= a || c >= b) return quad::integrate(f, a, b, q).value;
    return quad::integrate(f, a, c, q).value + quad::integrate(f, c, b, q).value;
  };
  double split_lower = 0.0;
  double split_upper = 0.0;
  if (log_mid > log_xa) {
    if (log_zolotarev_at_zero(beta) < log_xa) {
      split_lower = bisect_crossing(lower_log, log_xa, true);
    }
  } else {
    split_upper = bisect_crossing(upper_log, log_xa, false);
  }
  return piece(lower, 0.0, split_lower, mid) + piece(upper, 0.0, split_upper, mid);
}

// Convergent expansion in x^{-beta} of the density or of the upper tail.
// Returns NaN when the series is not accurate at this x.
double stable_series(double x, double beta, bool density) {
  const double lx = std::log(x);
  double sum = 0.0;
  double largest = 0.0;
  double log_scale = 0.0;
  for (int n = 1; n <= 400; ++n) {
    const double g = density ? std::lgamma(n * beta + 1.0) : std::lgamma(n * beta);
    const double log_mag = g - std::lgamma(n + 1.0) - n * beta * lx - (density ? lx : 0.0);
    // Terms are scaled by the first one so that huge x does not underflow.
    if (n == 1) log_scale = log_mag;
    const double mag = std::exp(log_mag - log_scale);
    const double term = (n % 2 == 1 ? 1.0 : -1.0) * std::sin(n * kPi * beta) * mag;
    sum += term;
    largest = std::max(largest, mag);
    if (n > 2 && mag < 1e-17 * std::abs(sum)) {
      if (largest > 4.0 * std::abs(sum)) return std::nan("");
      return sum / kPi * std::exp(log_scale);
    }
    if (n > 40 && mag > largest * 0.999) return std::nan("");
  }
  return std::nan("");
}

bool integral_underflows(double x, double beta) {
  const double alpha = beta / (1.0 - beta);
  return log_zolotarev_at_zero(beta) - alpha * std::log(x) > std::log(700.0);
}

double stable_small_x(double x, double beta) {
  const double b1 = 1.0 - beta;
  const double log_f = (2.0 - beta) / (2.0 * b1) * std::log(beta / x) -
                       0.5 * std::log(2.0 * kPi * beta * b1) -
                       b1 * std::pow(x / beta, -beta / b1);
  return std::exp(log_f);
}

double stable_unit_density(double x, double beta) {
  if (beta == 0.5) return std::exp(-0.25 / x) / (2.0 * std::sqrt(kPi) * x * std::sqrt(x));
  if (x >= 0.5) {
    const double s = stable_series(x, beta, true);
    if (!std::isnan(s)) return s;
  }
  if (integral_underflows(x, beta)) return stable_small_x(x, beta);
  return stable_density_integral(x, beta);
}

double stable_unit_sf(double x, double beta) {
  if (beta == 0.5) return std::erf(0.5 / std::sqrt(x));
  if (x >= 0.5) {
    const double s = stable_series(x, beta, false);
    if (!std::isnan(s)) return s;
  }
  if (integral_underflows(x, beta)) return 1.0;
  return integrate_phi([](double z) { return -std::expm1(-z); }, x, beta) / kPi;
}

double stable_unit_cdf(double x, double beta) {
  if (beta == 0.5) return std::erfc(0.5 / std::sqrt(x));
  if (integral_underflows(x, beta)) return 0.0;
  if (x >= 0.5) {
    const double s = stable_series(x, beta, false);
    if (!std::isnan(s) && s < 0.5) return 1.0 - s;
  }
  return integrate_phi([](double z) { return std::exp(-z); }, x, beta) / kPi;
}

double upper_gamma_negative(double a, double z) {
  // Gamma(a, z) for -1 < a < 0, from Gamma(a + 1, z) = a Gamma(a, z) + z^a e^{-z}.
  if (z <= 2.0) return (boost::math::tgamma(a + 1.0, z) - std::pow(z, a) * std::exp(-z)) / a;
  // e^{-z} int_0^inf e^{-v} (z + v)^{a - 1} dv.
  quad::Options q;
  q.abs_tol = 0.0;
  q.rel_tol = 1e-13;
  auto f = [&](double v) { return std::exp(-v) * std::pow(z + v, a - 1.0); };
  return std::exp(-z) * quad::integrate_upper(f, 0.0, 1.0, q).value;
}

}  // namespace

double ig_density(double x, double t, double delta, double gamma) {
  require_positive(x, "x", "ig_density");
  require_positive(t, "t", "ig_density");
  const double dt = delta * t;
  const double d = dt - gamma * x;
  return dt / std::sqrt(2.0 * kPi) * std::pow(x, -1.5) * std::exp(-d * d / (2.0 * x));
}

double ig_cdf(double x, double t, double delta, double gamma) {
  require_nonnegative(x, "x", "ig_cdf");
  require_positive(t, "t", "ig_cdf");
  if (x == 0.0) return 0.0;
  const double sx = std::sqrt(x);
  const double w = (gamma * x - delta * t) / sx;
  const double z = (gamma * x + delta * t) / sx;
  return normal_cdf(w) + 0.5 * std::exp(-0.5 * w * w) * specfun::erfcx(z / kSqrt2);
}

double stable_density_integral(double x, double beta) {
  require_positive(x, "x", "stable_density_integral");
  require_beta(beta, "stable_density_integral");
  const double alpha = beta / (1.0 - beta);
  const double integral = integrate_phi([](double z) { return z * std::exp(-z); }, x, beta);
  return alpha / (kPi * x) * integral;
}

double stable_density(double x, double t, double beta) {
  require_positive(x, "x", "stable_density");
  require_positive(t, "t", "stable_density");
  require_beta(beta, "stable_density");
  if (beta == 0.5) {
    return t / (2.0 * std::sqrt(kPi)) * std::pow(x, -1.5) * std::exp(-t * t / (4.0 * x));
  }
  const double scale = std::pow(t, 1.0 / beta);
  return stable_unit_density(x / scale, beta) / scale;
}

double stable_cdf(double x, double t, double beta) {
  require_nonnegative(x, "x", "stable_cdf");
  require_positive(t, "t", "stable_cdf");
  require_beta(beta, "stable_cdf");
  if (x == 0.0) return 0.0;
  return stable_unit_cdf(x / std::pow(t, 1.0 / beta), beta);
}

double stable_sf(double x, double t, double beta) {
  require_nonnegative(x, "x", "stable_sf");
  require_positive(t, "t", "stable_sf");
  require_beta(beta, "stable_sf");
  if (x == 0.0) return 1.0;
  return stable_unit_sf(x / std::pow(t, 1.0 / beta), beta);
}

double tempered_stable_density(double x, double t, double beta, double mu) {
  require_nonnegative(mu, "mu", "tempered_stable_density");
  const double f = stable_density(x, t, beta);
  if (f == 0.0) return 0.0;
  return std::exp(-mu * x + std::pow(mu, beta) * t) * f;
}

double tempered_stable_cdf(double x, double t, double beta, double mu) {
  require_nonnegative(x, "x", "tempered_stable_cdf");
  require_positive(t, "t", "tempered_stable_cdf");
  if (x == 0.0) return 0.0;
  // y = x e^{-u}.
  auto f = [&](double u) {
    const double y = x * std::exp(-u);
    if (!(y > 0.0)) return 0.0;
    return tempered_stable_density(y, t, beta, mu) * y;
  };
  quad::Options q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-12;
  return quad::integrate_upper(f, 0.0, 1.0, q).value;
}

double inverse_stable_density(double x, double t, double beta) {
  require_nonnegative(x, "x", "inverse_stable_density");
  require_positive(t, "t", "inverse_stable_density");
  require_beta(beta, "inverse_stable_density");
  if (x == 0.0) return std::pow(t, -beta) / std::tgamma(1.0 - beta);
  if (beta == 0.5) return std::exp(-x * x / (4.0 * t)) / std::sqrt(kPi * t);
  const double y = t * std::pow(x, -1.0 / beta);
  if (!std::isfinite(y)) return std::pow(t, -beta) / std::tgamma(1.0 - beta);
  return t / beta * std::pow(x, -1.0 - 1.0 / beta) * stable_unit_density(y, beta);
}

double inverse_stable_cdf(double x, double t, double beta) {
  require_nonnegative(x, "x", "inverse_stable_cdf");
  if (x == 0.0) return 0.0;
  return stable_sf(t, x, beta);
}

double tempered_levy_tail(double u, double beta, double mu) {
  require_positive(u, "u", "tempered_levy_tail");
  require_beta(beta, "tempered_levy_tail");
  require_nonnegative(mu, "mu", "tempered_levy_tail");
  const double c = beta / std::tgamma(1.0 - beta);
  if (mu == 0.0) return c * std::pow(u, -beta) / beta;
  return c * std::pow(mu, beta) * upper_gamma_negative(-beta, mu * u);
}

double inverse_tempered_density(double x, double t, double beta, double mu) {
  require_nonnegative(x, "x", "inverse_tempered_density");
  require_positive(t, "t", "inverse_tempered_density");
  require_beta(beta, "inverse_tempered_density");
  require_nonnegative(mu, "mu", "inverse_tempered_density");
  if (x == 0.0) return tempered_levy_tail(t, beta, mu);
  const double b1 = 1.0 - beta;
  auto integrand_y = [&](double y) {
    if (!(y > 0.0) || !(y < t)) return 0.0;
    return tempered_levy_tail(t - y, beta, mu) * tempered_stable_density(y, x, beta, mu);
  };
  quad::Options q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-12;
  // Log scale in y up to t/2, which resolves the stable bulk of D_mu(x) at
  // any x; on [t/2, t) the map t - y = v^{1/(1-beta)} removes the
  // (t - y)^{-beta} endpoint singularity and keeps y accurate.
  const double half = 0.5 * t;
  const double split = std::min(half, 50.0 * std::pow(x, 1.0 / beta));
  // D_mu(x) is then negligible against t.
  if (split < 1e-250 * t) return tempered_levy_tail(t, beta, mu);
  auto lower = [&](double w) {
    const double y = split * std::exp(-w);
    return integrand_y(y) * y;
  };
  auto middle = [&](double w) {
    const double y = split * std::exp(w);
    return integrand_y(y) * y;
  };
  auto upper = [&](double v) {
    const double u = std::pow(v, 1.0 / b1);
    if (!(u > 0.0)) return 0.0;
    return tempered_levy_tail(u, beta, mu) * tempered_stable_density(t - u, x, beta, mu) *
           std::pow(v, beta / b1) / b1;
  };
  double total = quad::integrate_upper(lower, 0.0, 1.0, q).value +
                 quad::integrate(upper, 0.0, std::pow(half, b1), q).value;
  if (split < half) total += quad::integrate(middle, 0.0, std::log(half / split), q).value;
  return total;
}

double hitting_time_density_ig(double x, double t, double delta, double gamma) {
  require_nonnegative(x, "x", "hitting_time_density_ig");
  require_positive(t, "t", "hitting_time_density_ig");
  const double st = std::sqrt(t);
  const double w = (gamma * t - delta * x) / st;
  const double z = (gamma * t + delta * x) / st;
  const double bracket = 2.0 / std::sqrt(2.0 * kPi * t) - gamma * specfun::erfcx(z / kSqrt2);
  return delta * std::exp(-0.5 * w * w) * bracket;
}

double hitting_time_cdf_ig(double x, double t, double delta, double gamma) {
  require_nonnegative(x, "x", "hitting_time_cdf_ig");
  require_positive(t, "t", "hitting_time_cdf_ig");
  if (x == 0.0) return 0.0;
  return 1.0 - ig_cdf(t, x, delta, gamma);
}

double hitting_time_density_ig_fd(double x, double t, double delta, double gamma) {
  require_positive(x, "x", "hitting_time_density_ig_fd");
  require_positive(t, "t", "hitting_time_density_ig_fd");
  const double eta = std::max(1e-4, 1e-3 * x);
  auto F = [&](double s) { return s == 0.0 ? 1.0 : ig_cdf(t, s, delta, gamma); };
  if (x > eta) return -(F(x + eta) - F(x - eta)) / (2.0 * eta);
  return -(-3.0 * F(x) + 4.0 * F(x + eta) - F(x + 2.0 * eta)) / (2.0 * eta);
}

}  // namespace tcpp
