#include "tcpp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "tcpp/error.hpp"
#include "tcpp/quadrature.hpp"

namespace tcpp {

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) {
    throw DomainError("TimeSeries: times and values differ in length");
  }
  if (times_.size() < 2) throw DomainError("TimeSeries: at least two samples required");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] > 0.0) || !std::isfinite(times_[i])) {
      throw DomainError("TimeSeries: times must be positive and finite");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw DomainError("TimeSeries: times must be strictly increasing");
    }
  }
}

TimeSeries TimeSeries::uniform(double start, double step, std::vector<double> values) {
  std::vector<double> times(values.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = start + step * static_cast<double>(i);
  return TimeSeries(std::move(times), std::move(values));
}

double TimeSeries::uniform_step() const {
  const double step = (times_.back() - times_.front()) / static_cast<double>(times_.size() - 1);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (std::abs((times_[i] - times_[i - 1]) - step) > 1e-9 * step) {
      throw GridError("TimeSeries: grid is not uniform");
    }
  }
  return step;
}

}  // namespace tcpp

namespace tcpp::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// n such that |nu| = n + 1/2, or -1 when nu is not a half integer.
int half_integer_index(double nu) {
  const double a = std::abs(nu) - 0.5;
  const double r = std::round(a);
  if (r >= 0.0 && std::abs(a - r) < 1e-14 && r < 1e6) return static_cast<int>(r);
  return -1;
}

double log_sum_exp(const std::vector<double>& logs) {
  const double m = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - m);
  return m + std::log(s);
}

double log_bessel_k_half_integer(int n, double omega) {
  std::vector<double> logs(static_cast<std::size_t>(n) + 1);
  const double log2w = std::log(2.0 * omega);
  for (int j = 0; j <= n; ++j) {
    logs[j] = std::lgamma(n + j + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) -
              j * log2w;
  }
  return 0.5 * std::log(kPi / (2.0 * omega)) - omega + log_sum_exp(logs);
}

// log of int_0^inf exp(-w (cosh u - 1)) cosh(nu u) du; K_nu(w) = e^{-w} * that.
double log_scaled_bessel_integral(double nu, double omega, double abs_tol) {
  const double anu = std::abs(nu);
  auto exponent = [&](double u) { return omega * (std::cosh(u) - 1.0) - anu * u; };
  double upper = 1.0;
  while (exponent(upper) < 60.0 || exponent(2.0 * upper) < exponent(upper)) {
    upper *= 2.0;
    if (upper > 1e4) throw ConvergenceError("bessel_k: could not bound the integration range");
  }
  // cosh(nu u) e^{-w(cosh u - 1)} written in one exponential to avoid overflow.
  const double shift = std::max(0.0, -[&] {
    double best = 0.0;
    for (int i = 0; i <= 64; ++i) best = std::min(best, exponent(upper * i / 64.0));
    return best;
  }());
  auto integrand = [&](double u) {
    const double e = -omega * (std::cosh(u) - 1.0) - shift;
    return 0.5 * (std::exp(e + anu * u) + std::exp(e - anu * u));
  };
  quad::Options q;
  q.abs_tol = abs_tol * std::exp(-shift);
  q.rel_tol = 2e-13;
  const quad::Result r = quad::integrate(integrand, 0.0, upper, q);
  return shift + std::log(r.value);
}

double mittag_leffler_series(double beta, double z, const MittagLefflerOptions& opts) {
  if (z == 0.0) return 1.0;
  const double logabs = std::log(std::abs(z));
  const bool alternating = z < 0.0;
  double sum = 1.0;
  double max_term = 1.0;
  for (int n = 1; n < opts.max_terms; ++n) {
    const double log_term = n * logabs - std::lgamma(beta * n + 1.0);
    double term = std::exp(log_term);
    if (alternating && (n % 2 == 1)) term = -term;
    sum += term;
    max_term = std::max(max_term, std::abs(term));
    // Terms decrease monotonically once beta*n exceeds |z|^{1/beta}.
    if (std::abs(term) <= 1e-17 * std::abs(sum) &&
        beta * n > std::pow(std::abs(z), 1.0 / beta)) {
      return sum;
    }
  }
  std::ostringstream msg;
  msg << "mittag_leffler: series did not converge for beta=" << beta << ", z=" << z;
  throw ConvergenceError(msg.str());
}

// E_beta(-x), x > 0, 0 < beta < 1.
double mittag_leffler_negative_integral(double beta, double x, const MittagLefflerOptions& opts) {
  const double t = std::pow(x, 1.0 / beta);
  const double c = std::cos(beta * kPi);
  auto integrand = [&](double v) {
    const double e = t * std::pow(v, 1.0 / beta);
    if (e > 745.0) return 0.0;
    return std::exp(-e) / (v * v + 2.0 * v * c + 1.0);
  };
  const double pref = std::sin(beta * kPi) / (beta * kPi);
  quad::Options q;
  q.abs_tol = 0.5 * opts.abs_tol / pref;
  q.rel_tol = 2e-13;
  const double head = quad::integrate(integrand, 0.0, 1.0, q).value;
  const double tail = quad::integrate_upper(integrand, 1.0, 1.0, q).value;
  return pref * (head + tail);
}

}  // namespace

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    std::ostringstream msg;
    msg << "gamma_fn: pole at x=" << x;
    throw PoleError(msg.str());
  }
  return std::tgamma(x);
}

double erfcx(double x) {
  if (x < 0.0) {
    if (x < -26.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < 5.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
  // evaluated by the modified Lentz method.
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 500; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (std::sqrt(kPi) * f);
}

double log_bessel_k(double nu, double omega, const BesselOptions& opts) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    std::ostringstream msg;
    msg << "bessel_k: argument must be positive, got " << omega;
    throw DomainError(msg.str());
  }
  const int n = half_integer_index(nu);
  if (n >= 0 && !opts.force_integral) return log_bessel_k_half_integer(n, omega);
  return -omega + log_scaled_bessel_integral(nu, omega, opts.abs_tol);
}

double bessel_k(double nu, double omega, const BesselOptions& opts) {
  return std::exp(log_bessel_k(nu, omega, opts));
}

double mittag_leffler(double beta, double z, const MittagLefflerOptions& opts) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    std::ostringstream msg;
    msg << "mittag_leffler: beta must lie in (0, 1], got " << beta;
    throw DomainError(msg.str());
  }
  if (z == 0.0) return 1.0;
  if (beta == 1.0) return std::exp(z);
  if (z > 0.0 || -z <= opts.series_radius) return mittag_leffler_series(beta, z, opts);
  if (beta == 0.5) return erfcx(-z);
  return mittag_leffler_negative_integral(beta, -z, opts);
}

TimeSeries caputo_derivative(const TimeSeries& series, double u0, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("caputo_derivative: beta must lie in (0, 1)");
  }
  const std::size_t n = series.size();
  if (n < 4) throw GridError("caputo_derivative: at least 4 grid points are required");
  const double h = series.uniform_step();
  if (std::abs(series.time(0) - h) > 1e-9 * h) {
    throw GridError("caputo_derivative: grid must be t_i = i*h starting at t_1 = h");
  }
  std::vector<double> weights(n);
  for (std::size_t j = 0; j < n; ++j) {
    weights[j] = std::pow(j + 1.0, 1.0 - beta) - std::pow(static_cast<double>(j), 1.0 - beta);
  }
  std::vector<double> increments(n);
  for (std::size_t i = 0; i < n; ++i) {
    increments[i] = series.value(i) - (i == 0 ? u0 : series.value(i - 1));
  }
  const double scale = std::pow(h, -beta) / std::tgamma(2.0 - beta);
  std::vector<double> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= m; ++j) acc += weights[j] * increments[m - j];
    out[m] = scale * acc;
  }
  return TimeSeries(std::vector<double>(series.times().begin(), series.times().end()),
                    std::move(out));
}

double laplace_numeric(const std::function<double(double)>& f, double s,
                       const LaplaceOptions& opts) {
  if (!(s > 0.0)) throw DomainError("laplace_numeric: s must be positive");
  auto integrand = [&](double x) {
    const double d = s * x;
    if (d > 745.0) return 0.0;
    return std::exp(-d) * f(x);
  };
  const double center = quad::detect_mass_center(integrand);
  quad::Options q;
  q.abs_tol = opts.abs_tol;
  q.rel_tol = opts.rel_tol;
  q.max_intervals = opts.max_intervals;
  return quad::integrate_half_line(integrand, center, q).value;
}

}  // namespace tcpp::specfun
