#pragma once

#include <functional>
#include <vector>

namespace tcpp::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive 21-point Gauss-Kronrod on a finite interval. Abscissae are
/// interior, so integrable endpoint singularities are tolerated.
/// Throws ConvergenceError when the interval budget is exhausted before the
/// requested tolerance is met.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over (0, inf) through x = center * e^u, both halves of the
/// u-line compactified to [0, 1). `center` should sit near the bulk of the
/// mass; see detect_mass_center.
Result integrate_half_line(const Integrand& f, double center, const Options& opts = {});

/// Integral over (a, inf), a >= 0, through x = a + scale * u / (1 - u).
Result integrate_upper(const Integrand& f, double a, double scale, const Options& opts = {});

/// Coarse log-scale scan for the maximiser of |x f(x)| on (0, inf).
/// Returns 1 when f vanishes on the whole scan.
double detect_mass_center(const Integrand& f, double lo = 1e-12, double hi = 1e12);

struct Node {
  double x;
  double w;
};

/// Fixed double-exponential (exp-sinh) rule on (0, inf) with unit center:
/// y = exp(pi/2 sinh u), trapezoidal in u with the given step. Nodes whose
/// abscissa leaves the normal double range are dropped. Halving `step`
/// yields a nested rule.
std::vector<Node> exp_sinh_rule(double step);

/// n-point Gauss-Legendre rule mapped to [a, b].
std::vector<Node> gauss_legendre_rule(int n, double a, double b);

}  // namespace tcpp::quad
