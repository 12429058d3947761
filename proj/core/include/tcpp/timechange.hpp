#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcpp/mixing.hpp"
#include "tcpp/samplers.hpp"
#include "tcpp/spec.hpp"

/// Count distribution of N(X(t)) for a Poisson process N and an independent
/// random clock X.
namespace tcpp {

struct PoissonParams {
  double lambda = 1.0;
};

struct PmfTable {
  double t = 0.0;
  double lambda = 0.0;
  SubordinatorSpec spec;
  int kmax = 0;
  std::vector<double> values;
  /// Probability of counts above kmax (exact mixture tail for quadrature
  /// tables, the empirical overflow fraction for Monte Carlo tables).
  double tail_bound = 0.0;
  /// Per-bin binomial standard errors; empty unless method == "mc".
  std::vector<double> stderrs;
  std::string method;
  std::uint64_t seed = 0;
  std::size_t count = 0;

  double value(int k) const { return k < 0 || k > kmax ? 0.0 : values[k]; }
  double total() const;
};

/// d^order/dx^order of e^{-lambda x} (lambda x)^k / k!, order >= 0.
/// Evaluated in log space; p_k = 0 for k < 0.
double poisson_pmf(int k, double x, double lambda, int order = 0);

/// Bessel closed form of P(N(G(t)) = k) for the IG clock. gamma must be
/// positive; throws DomainError otherwise.
double pmf_bessel_ig(int k, double t, double lambda, double delta, double gamma);

struct PmfOptions {
  MixingOptions mixing;
  /// Step halving stops once successive tables differ by at most this.
  double refine_tol = 1e-10;
  /// Tail mass at which automatic kmax selection stops.
  double tail_tol = 1e-10;
  int kmax_cap = 2000;
  int max_halvings = 6;
};

/// Mixture P(N(X(t)) = k) = E p_k(X(t)) over a quadrature rule for X(t).
double pmf_quadrature(int k, double t, double lambda, const SubordinatorSpec& spec,
                      const PmfOptions& opts = {});

/// p_0..p_kmax from one fixed rule, without step refinement. For a fixed
/// rule the values are smooth in t, which finite differences in t rely on.
std::vector<double> pmf_fixed_rule(const SubordinatorSpec& spec, double lambda, double t,
                                   int kmax, const MixingOptions& opts = {});

/// Table k = 0..kmax by quadrature. Without kmax the smallest K whose
/// mixture tail is at most opts.tail_tol is used, capped at opts.kmax_cap.
PmfTable pmf_table_quadrature(const SubordinatorSpec& spec, double lambda, double t,
                              std::optional<int> kmax = std::nullopt,
                              const PmfOptions& opts = {});

/// Table from the Bessel closed form; the tail is 1 minus the table sum.
PmfTable pmf_table_bessel(double delta, double gamma, double lambda, double t,
                          std::optional<int> kmax = std::nullopt, const PmfOptions& opts = {});

/// Empirical pmf from `count` draws of N(X(t)); count >= 1000.
/// Without kmax the largest observed count (at most opts.kmax_cap) is used.
PmfTable pmf_monte_carlo(std::optional<int> kmax, double t, double lambda,
                         const SubordinatorSpec& spec, std::size_t count, std::uint64_t seed,
                         const SamplerOptions& sampler = {}, const PmfOptions& opts = {});

/// P(N(E(t)) = k) for the inverse beta-stable clock E.
double fractional_poisson_pmf(int k, double t, double lambda, double beta);

struct Moments {
  double mean;
  double variance;
};

/// Closed-form mean and variance of N(G(t)); gamma must be positive.
Moments moments_ig(double t, double lambda, double delta, double gamma);

/// Mean and variance from a pmf table (tail ignored).
Moments table_moments(const PmfTable& table);

/// P(J > x) = E exp(-lambda H(x)) for the waiting times of N(H(.)).
double waiting_time_survival(double x, double lambda, double delta, double gamma);
/// E exp(-s J) = lambda / (lambda + delta (sqrt(gamma^2 + 2 s) - gamma)).
double waiting_time_lt(double s, double lambda, double delta, double gamma);

/// Inter-arrival times of N(H(.)). A waiting time is G(tau) for an
/// exponential tau of rate lambda, so no path discretization is needed.
std::vector<double> sample_waiting_times(double lambda, double delta, double gamma,
                                         std::size_t count, std::uint64_t seed, int jobs = 1);

}  // namespace tcpp
