#pragma once

#include <functional>

#include "tcpp/time_series.hpp"

/// Special functions shared by every density and pmf formula.
namespace tcpp::specfun {

/// Gamma function. Throws PoleError at 0, -1, -2, ...
double gamma_fn(double x);

/// Scaled complementary error function e^{x^2} erfc(x).
double erfcx(double x);

struct BesselOptions {
  /// Absolute tolerance on the scaled integral e^{omega} K_nu(omega).
  double abs_tol = 1e-12;
  /// Force the integral route even for half-integer orders.
  bool force_integral = false;
};

/// Modified Bessel function of the third kind K_nu(omega), omega > 0.
/// Half-integer orders use the terminating closed form; other orders use
/// K_nu(w) = int_0^inf exp(-w cosh u) cosh(nu u) du (the x = e^u form of
/// the half-line integral). Throws DomainError for omega <= 0.
double bessel_k(double nu, double omega, const BesselOptions& opts = {});

/// log K_nu(omega); same routes as bessel_k, without overflow/underflow.
double log_bessel_k(double nu, double omega, const BesselOptions& opts = {});

struct MittagLefflerOptions {
  /// |z| at or below which negative arguments use the Taylor series.
  double series_radius = 1.0;
  double abs_tol = 1e-13;
  int max_terms = 200000;
};

/// One-parameter Mittag-Leffler function E_beta(z), 0 < beta <= 1.
/// Positive z: Taylor series. Negative z beyond series_radius: erfcx
/// identity for beta = 1/2, otherwise the Laplace-type integral
/// E_beta(-x) = sin(beta pi)/(beta pi) int_0^inf exp(-x^{1/beta} v^{1/beta}) / (v^2 + 2 v cos(beta pi) + 1) dv.
/// Throws DomainError for beta outside (0, 1], ConvergenceError if the
/// series budget is exhausted.
double mittag_leffler(double beta, double z, const MittagLefflerOptions& opts = {});

/// L1-scheme Caputo derivative of order beta in (0, 1).
/// `series` holds u on the uniform grid t_i = i h, i = 1..n; `u0` is u(0).
/// Returns the derivative at each grid time. Local error O(h^{2-beta}) for
/// smooth u. Throws GridError for fewer than 4 points or a non-uniform grid
/// that does not start one step from the origin.
TimeSeries caputo_derivative(const TimeSeries& series, double u0, double beta);

struct LaplaceOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Numerical Laplace transform int_0^inf e^{-s x} f(x) dx of a function on
/// (0, inf), split at an automatically detected mass center.
/// Throws ConvergenceError if the adaptive refinement exceeds its budget.
double laplace_numeric(const std::function<double(double)>& f, double s,
                       const LaplaceOptions& opts = {});

}  // namespace tcpp::specfun
