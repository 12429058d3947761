#include "tcpp/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "tcpp/densities.hpp"
#include "tcpp/error.hpp"
#include "tcpp/quadrature.hpp"
#include "tcpp/rng.hpp"
#include "tcpp/specfun.hpp"

namespace tcpp {
namespace {

// SubordinatorSpec has no default state, so tables start from a full initializer.
PmfTable empty_table(const SubordinatorSpec& spec, double lambda, double t) {
  return PmfTable{.t = t, .lambda = lambda, .spec = spec, .kmax = 0, .values = {},
                  .tail_bound = 0.0, .stderrs = {}, .method = {}, .seed = 0, .count = 0};
}

constexpr double kOverflowMean = 1e12;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

double log_poisson(int k, double x, double lambda) {
  if (k < 0) return -INFINITY;
  if (x == 0.0) return k == 0 ? 0.0 : -INFINITY;
  return k * std::log(lambda * x) - lambda * x - std::lgamma(k + 1.0);
}

// Columns k = 0..kmax of sum_j w_j p_k(x_j). With kmax < 0 the table grows
// until the remaining mass is at most tail_tol or the cap is reached.
std::vector<double> mixture_table(const MixingRule& rule, double lambda, int kmax,
                                  const PmfOptions& opts) {
  const auto& nodes = rule.nodes;
  const double total = rule.total_weight();
  std::vector<double> logp(nodes.size());
  std::vector<double> logw(nodes.size());
  std::vector<double> lx(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    logw[j] = std::log(nodes[j].w);
    lx[j] = std::log(lambda * nodes[j].x);
    logp[j] = -lambda * nodes[j].x;
  }
  const int cap = kmax >= 0 ? kmax : opts.kmax_cap;
  std::vector<double> values;
  double cumulative = 0.0;
  for (int k = 0; k <= cap; ++k) {
    double v = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (k > 0) logp[j] += lx[j] - std::log(static_cast<double>(k));
      v += std::exp(logw[j] + logp[j]);
    }
    values.push_back(v);
    cumulative += v;
    if (kmax < 0 && total - cumulative <= opts.tail_tol) break;
  }
  return values;
}

double mixture_tail(const MixingRule& rule, double lambda, int kmax) {
  double tail = 0.0;
  for (const auto& n : rule.nodes) {
    tail += n.w * boost::math::gamma_p(static_cast<double>(kmax) + 1.0, lambda * n.x);
  }
  return tail;
}

struct RefinedTable {
  MixingRule rule;
  std::vector<double> values;
};

RefinedTable refined_table(const SubordinatorSpec& spec, double lambda, double t, int kmax,
                           const PmfOptions& opts) {
  MixingOptions mix = opts.mixing;
  MixingRule rule = mixing_rule(spec, t, mix);
  std::vector<double> values = mixture_table(rule, lambda, kmax, opts);
  const int k_used = static_cast<int>(values.size()) - 1;
  double change = INFINITY;
  for (int i = 0; i < opts.max_halvings; ++i) {
    mix.step *= 0.5;
    MixingRule finer = mixing_rule(spec, t, mix);
    std::vector<double> next = mixture_table(finer, lambda, k_used, opts);
    change = 0.0;
    for (int k = 0; k <= k_used; ++k) change = std::max(change, std::abs(next[k] - values[k]));
    rule = std::move(finer);
    values = std::move(next);
    if (change <= opts.refine_tol) return {std::move(rule), std::move(values)};
  }
  std::ostringstream msg;
  msg << "pmf quadrature for " << spec.describe() << " at t=" << t
      << " did not settle; last change " << change;
  throw ConvergenceError(msg.str());
}

}  // namespace

double PmfTable::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double poisson_pmf(int k, double x, double lambda, int order) {
  if (!(x >= 0.0)) throw DomainError("poisson_pmf: x must be nonnegative");
  require_positive(lambda, "poisson_pmf: lambda");
  if (order < 0) throw DomainError("poisson_pmf: derivative order must be nonnegative");
  if (order == 0) return std::exp(log_poisson(k, x, lambda));
  // d^j p_k = (-lambda)^j (1 - shift)^j p_k.
  double sum = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= order; ++i) {
    sum += (i % 2 == 0 ? 1.0 : -1.0) * binom * std::exp(log_poisson(k - i, x, lambda));
    binom = binom * (order - i) / (i + 1);
  }
  return std::pow(-lambda, order) * sum;
}

double pmf_bessel_ig(int k, double t, double lambda, double delta, double gamma) {
  if (k < 0) return 0.0;
  require_positive(t, "pmf_bessel_ig: t");
  require_positive(lambda, "pmf_bessel_ig: lambda");
  require_positive(delta, "pmf_bessel_ig: delta");
  if (!(gamma > 0.0)) {
    throw DomainError("pmf_bessel_ig: the Bessel form needs gamma > 0; use quadrature");
  }
  const double root = std::sqrt(gamma * gamma + 2.0 * lambda);
  const double dt = delta * t;
  const double nu = k - 0.5;
  const double log_value = 0.5 * std::log(2.0 / std::numbers::pi) + std::log(dt) +
                           delta * gamma * t + k * std::log(lambda) - std::lgamma(k + 1.0) +
                           nu * (std::log(dt) - std::log(root)) +
                           specfun::log_bessel_k(nu, dt * root);
  return std::exp(log_value);
}

double pmf_quadrature(int k, double t, double lambda, const SubordinatorSpec& spec,
                      const PmfOptions& opts) {
  if (k < 0) return 0.0;
  require_positive(lambda, "pmf_quadrature: lambda");
  return refined_table(spec, lambda, t, k, opts).values[k];
}

std::vector<double> pmf_fixed_rule(const SubordinatorSpec& spec, double lambda, double t,
                                   int kmax, const MixingOptions& opts) {
  require_positive(lambda, "pmf_fixed_rule: lambda");
  if (kmax < 0) throw DomainError("pmf_fixed_rule: kmax must be nonnegative");
  return mixture_table(mixing_rule(spec, t, opts), lambda, kmax, PmfOptions{});
}

PmfTable pmf_table_quadrature(const SubordinatorSpec& spec, double lambda, double t,
                              std::optional<int> kmax, const PmfOptions& opts) {
  require_positive(lambda, "pmf table: lambda");
  require_positive(t, "pmf table: t");
  if (kmax && *kmax < 0) throw DomainError("pmf table: kmax must be nonnegative");
  RefinedTable r = refined_table(spec, lambda, t, kmax.value_or(-1), opts);
  PmfTable table = empty_table(spec, lambda, t);
  table.kmax = static_cast<int>(r.values.size()) - 1;
  table.values = std::move(r.values);
  table.tail_bound = mixture_tail(r.rule, lambda, table.kmax);
  table.method = "quadrature";
  return table;
}

PmfTable pmf_table_bessel(double delta, double gamma, double lambda, double t,
                          std::optional<int> kmax, const PmfOptions& opts) {
  if (kmax && *kmax < 0) throw DomainError("pmf table: kmax must be nonnegative");
  PmfTable table = empty_table(SubordinatorSpec::ig(delta, gamma), lambda, t);
  table.method = "bessel";
  double sum = 0.0;
  const int cap = kmax.value_or(opts.kmax_cap);
  for (int k = 0; k <= cap; ++k) {
    const double v = pmf_bessel_ig(k, t, lambda, delta, gamma);
    table.values.push_back(v);
    sum += v;
    if (!kmax && 1.0 - sum <= opts.tail_tol && k > lambda * delta * t / gamma) break;
  }
  table.kmax = static_cast<int>(table.values.size()) - 1;
  table.tail_bound = std::max(0.0, 1.0 - sum);
  return table;
}

PmfTable pmf_monte_carlo(std::optional<int> kmax, double t, double lambda,
                         const SubordinatorSpec& spec, std::size_t count, std::uint64_t seed,
                         const SamplerOptions& sampler, const PmfOptions& opts) {
  require_positive(lambda, "pmf_monte_carlo: lambda");
  require_positive(t, "pmf_monte_carlo: t");
  if (count < 1000) throw DomainError("pmf_monte_carlo: count must be at least 1000");
  if (kmax && *kmax < 0) throw DomainError("pmf table: kmax must be nonnegative");
  constexpr long long kOverflow = -1;
  std::vector<long long> counts(count);
  run_batches(count, seed, sampler.jobs, [&](std::size_t begin, std::size_t end, Rng& rng) {
    for (std::size_t i = begin; i < end; ++i) {
      const double mean = lambda * sample_one(spec, t, rng, sampler);
      if (!(mean <= kOverflowMean)) {
        counts[i] = kOverflow;
      } else if (mean <= 0.0) {
        counts[i] = 0;
      } else {
        counts[i] = std::poisson_distribution<long long>(mean)(rng);
      }
    }
  });
  int k_top = 0;
  if (kmax) {
    k_top = *kmax;
  } else {
    for (long long c : counts) {
      if (c > k_top) k_top = static_cast<int>(std::min<long long>(c, opts.kmax_cap));
    }
  }
  std::vector<double> hist(k_top + 1, 0.0);
  double overflow = 0.0;
  for (long long c : counts) {
    if (c == kOverflow || c > k_top) {
      overflow += 1.0;
    } else {
      hist[c] += 1.0;
    }
  }
  const double n = static_cast<double>(count);
  PmfTable table = empty_table(spec, lambda, t);
  table.kmax = k_top;
  table.method = "mc";
  table.seed = seed;
  table.count = count;
  for (double h : hist) {
    const double p = h / n;
    table.values.push_back(p);
    table.stderrs.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  table.tail_bound = overflow / n;
  return table;
}

double fractional_poisson_pmf(int k, double t, double lambda, double beta) {
  return pmf_quadrature(k, t, lambda, SubordinatorSpec::inverse(SubordinatorSpec::stable(beta)));
}

Moments moments_ig(double t, double lambda, double delta, double gamma) {
  require_positive(t, "moments_ig: t");
  require_positive(lambda, "moments_ig: lambda");
  require_positive(delta, "moments_ig: delta");
  if (!(gamma > 0.0)) throw DomainError("moments_ig: gamma must be positive");
  const double mean = lambda * delta * t / gamma;
  const double w = delta * gamma * t;
  // E G(t)^2 from the Bessel moment formula, with the e^{w} factor folded
  // into the scaled Bessel function.
  const double second = std::sqrt(2.0 / std::numbers::pi) * (delta * t) *
                        std::pow(delta * t / gamma, 1.5) *
                        std::exp(w + specfun::log_bessel_k(1.5, w));
  return {mean, mean + lambda * lambda * second - mean * mean};
}

Moments table_moments(const PmfTable& table) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (int k = 0; k <= table.kmax; ++k) {
    m1 += k * table.values[k];
    m2 += static_cast<double>(k) * k * table.values[k];
  }
  return {m1, m2 - m1 * m1};
}

double waiting_time_survival(double x, double lambda, double delta, double gamma) {
  require_positive(x, "waiting_time_survival: x");
  require_positive(lambda, "waiting_time_survival: lambda");
  require_positive(delta, "waiting_time_survival: delta");
  if (!(gamma >= 0.0)) throw DomainError("waiting_time_survival: gamma must be nonnegative");
  const double center = (std::sqrt(x) + gamma * x) / delta;
  quad::Options q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  return quad::integrate_half_line(
             [&](double u) {
               return std::exp(-lambda * u) * hitting_time_density_ig(u, x, delta, gamma);
             },
             center, q)
      .value;
}

double waiting_time_lt(double s, double lambda, double delta, double gamma) {
  if (!(s >= 0.0)) throw DomainError("waiting_time_lt: s must be nonnegative");
  require_positive(lambda, "waiting_time_lt: lambda");
  return lambda / (lambda + delta * (std::sqrt(gamma * gamma + 2.0 * s) - gamma));
}

std::vector<double> sample_waiting_times(double lambda, double delta, double gamma,
                                         std::size_t count, std::uint64_t seed, int jobs) {
  require_positive(lambda, "sample_waiting_times: lambda");
  const SubordinatorSpec ig = SubordinatorSpec::ig(delta, gamma);
  std::vector<double> out(count);
  run_batches(count, seed, jobs, [&](std::size_t begin, std::size_t end, Rng& rng) {
    std::exponential_distribution<double> expo(lambda);
    for (std::size_t i = begin; i < end; ++i) {
      const double tau = expo(rng);
      out[i] = tau > 0.0 ? sample_one(ig, tau, rng) : 0.0;
    }
  });
  return out;
}

}  // namespace tcpp
