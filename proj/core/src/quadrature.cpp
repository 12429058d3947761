#include "tcpp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "tcpp/error.hpp"

namespace tcpp::quad {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525353104, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

Segment gk21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = finite_or_zero(f(center));
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = finite_or_zero(f(center - dx));
    f2[j] = finite_or_zero(f(center + dx));
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double h = std::abs(half);
  resk *= half;
  resabs *= h;
  resasc *= h;
  double err = std::abs(resk - resg * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, resk, err};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw DomainError("quad::integrate requires finite limits");
  }
  std::priority_queue<Segment> heap;
  Segment first = gk21(f, a, b);
  int evals = 21;
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  // Segments that can no longer be bisected in floating point.
  double frozen_value = 0.0;
  double frozen_err = 0.0;
  while (!heap.empty()) {
    // Requests below the GK21 roundoff floor are clamped to it.
    const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(total),
                                     100.0 * std::numeric_limits<double>::epsilon() *
                                         std::abs(total)});
    if (total_err <= target) break;
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge: error "
          << total_err << " > " << target << " after " << heap.size() << " intervals";
      throw ConvergenceError(msg.str());
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      frozen_value += worst.value;
      frozen_err += worst.error;
      continue;
    }
    Segment left = gk21(f, worst.a, mid);
    Segment right = gk21(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  double value = frozen_value;
  double err = frozen_err;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value, err, evals};
}

Result integrate_half_line(const Integrand& f, double center, const Options& opts) {
  if (!(center > 0.0) || !std::isfinite(center)) {
    throw DomainError("quad::integrate_half_line requires a positive finite center");
  }
  // x = center * exp(+-u), u = v / (1 - v).
  auto mapped = [&](double sign) {
    return [&f, center, sign](double v) {
      const double w = 1.0 - v;
      const double u = v / w;
      if (u > 700.0) return 0.0;
      const double x = center * std::exp(sign * u);
      if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
      return f(x) * x / (w * w);
    };
  };
  Options half = opts;
  half.abs_tol = 0.5 * opts.abs_tol;
  const Result upper = integrate(mapped(+1.0), 0.0, 1.0, half);
  const Result lower = integrate(mapped(-1.0), 0.0, 1.0, half);
  return {upper.value + lower.value, upper.error + lower.error,
          upper.evaluations + lower.evaluations};
}

Result integrate_upper(const Integrand& f, double a, double scale, const Options& opts) {
  if (!(scale > 0.0)) throw DomainError("quad::integrate_upper requires a positive scale");
  auto mapped = [&f, a, scale](double v) {
    const double w = 1.0 - v;
    const double x = a + scale * v / w;
    if (!std::isfinite(x)) return 0.0;
    return f(x) * scale / (w * w);
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

double detect_mass_center(const Integrand& f, double lo, double hi) {
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  const int steps = static_cast<int>(std::ceil((log_hi - log_lo) / 0.25));
  double best = 0.0;
  double best_x = 1.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = std::exp(log_lo + (log_hi - log_lo) * i / steps);
    const double v = std::abs(x * f(x));
    if (std::isfinite(v) && v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

std::vector<Node> exp_sinh_rule(double step) {
  if (!(step > 0.0) || step > 1.0) throw DomainError("exp_sinh_rule step must lie in (0, 1]");
  constexpr double half_pi = 0.5 * std::numbers::pi;
  // pi/2 sinh(u) = 690 bounds |log y| inside the double range.
  const double u_max = std::asinh(690.0 / half_pi);
  const int n = static_cast<int>(std::floor(u_max / step));
  std::vector<Node> nodes;
  nodes.reserve(2 * n + 1);
  for (int j = -n; j <= n; ++j) {
    const double u = j * step;
    const double s = half_pi * std::sinh(u);
    const double y = std::exp(s);
    const double w = step * half_pi * std::cosh(u) * y;
    if (y > 0.0 && std::isfinite(y) && std::isfinite(w) && w > 0.0) nodes.push_back({y, w});
  }
  return nodes;
}

std::vector<Node> gauss_legendre_rule(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre_rule needs n >= 1");
  std::vector<Node> nodes(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[i] = {mid - half * z, half * w};
    nodes[n - 1 - i] = {mid + half * z, half * w};
  }
  return nodes;
}

}  // namespace tcpp::quad
