#pragma once

/// Density and distribution functions of the random clocks.
/// f(x, t) always denotes the density in x of the clock value at time t.
namespace tcpp {

/// Inverse Gaussian density g(x, t) of G(t) ~ IG(delta t, gamma).
double ig_density(double x, double t, double delta, double gamma);
/// P(G(t) <= x).
double ig_cdf(double x, double t, double delta, double gamma);

/// Density of the beta-stable subordinator with E exp(-s D(t)) = exp(-t s^beta).
/// beta = 1/2 is evaluated in closed form, other indices through the
/// Zolotarev integral, the convergent large-x series, or the small-x
/// asymptotic once the integral underflows.
double stable_density(double x, double t, double beta);
/// The integral representation only, bypassing closed forms and series.
double stable_density_integral(double x, double beta);
/// P(D(t) <= x) and P(D(t) > x) computed without cancellation.
double stable_cdf(double x, double t, double beta);
double stable_sf(double x, double t, double beta);

/// e^{-mu x + mu^beta t} f(x, t).
double tempered_stable_density(double x, double t, double beta, double mu);
/// P(D_mu(t) <= x) by quadrature of the density.
double tempered_stable_cdf(double x, double t, double beta, double mu);

/// Density m(x, t) of the inverse stable subordinator E(t). Defined at x = 0
/// by its limit t^{-beta} / Gamma(1 - beta).
double inverse_stable_density(double x, double t, double beta);
/// P(E(t) <= x) = P(D(x) >= t).
double inverse_stable_cdf(double x, double t, double beta);

/// Tail of the tempered Levy measure, int_u^inf c e^{-mu r} r^{-beta-1} dr
/// with c = beta / Gamma(1 - beta).
double tempered_levy_tail(double u, double beta, double mu);

/// Density m_mu(x, t) = int_0^t tail(t - y) f_mu(y, x) dy of the inverse
/// tempered stable subordinator E_mu(t); m_mu(0, t) = tail(t).
double inverse_tempered_density(double x, double t, double beta, double mu);

/// Density h(x, t) of H(t) = inf{s : G(s) > t}, from the analytic
/// x-derivative of P(G(x) <= t). Defined at x = 0 by continuity.
double hitting_time_density_ig(double x, double t, double delta, double gamma);
/// The same density by a central difference of the IG distribution function
/// in its time parameter, step max(1e-4, 1e-3 x).
double hitting_time_density_ig_fd(double x, double t, double delta, double gamma);
/// P(H(t) <= x) = P(G(x) >= t).
double hitting_time_cdf_ig(double x, double t, double delta, double gamma);

}  // namespace tcpp
