#include "tcpp/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tcpp/densities.hpp"
#include "tcpp/error.hpp"
#include "tcpp/mixing.hpp"
#include "tcpp/quadrature.hpp"
#include "zolotarev.hpp"

namespace tcpp {
namespace {

constexpr double kPi = std::numbers::pi;

double uniform_open(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v;
  do {
    v = u(rng);
  } while (v <= 0.0);
  return v;
}

// Michael, Schucany and Haas transformation for IG(delta t, gamma).
double draw_ig(double delta, double gamma, double t, Rng& rng) {
  if (t <= 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double a_shape = delta * t;
  if (gamma == 0.0) {
    const double z = normal(rng);
    return a_shape * a_shape / (z * z);
  }
  const double mean = a_shape / gamma;
  const double lambda = a_shape * a_shape;
  const double nu = normal(rng);
  const double a = mean * nu * nu / (2.0 * lambda);
  const double x = mean / (1.0 + a + std::sqrt(a * (a + 2.0)));
  const double u = uniform_open(rng);
  return u <= mean / (mean + x) ? x : mean * mean / x;
}

// Kanter's representation of the unit beta-stable variable.
double draw_stable_unit(double beta, Rng& rng) {
  const double phi = kPi * uniform_open(rng);
  std::exponential_distribution<double> expo(1.0);
  const double e = expo(rng);
  return std::exp((1.0 - beta) / beta * (detail::log_zolotarev(phi, beta) - std::log(e)));
}

double draw_stable(double beta, double t, Rng& rng) {
  if (t <= 0.0) return 0.0;
  return std::pow(t, 1.0 / beta) * draw_stable_unit(beta, rng);
}

// The tilt exp(-mu x + mu^beta t) is applied piecewise over ceil(t mu^beta)
// sub-intervals, so each piece accepts with probability at least e^{-1}.
double draw_tempered(double beta, double mu, double t, Rng& rng, const SamplerOptions& opts) {
  if (t <= 0.0) return 0.0;
  const double tilt = t * std::pow(mu, beta);
  const auto pieces = static_cast<std::uint64_t>(std::max(1.0, std::ceil(tilt)));
  const double tau = t / static_cast<double>(pieces);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double total = 0.0;
  for (std::uint64_t i = 0; i < pieces; ++i) {
    std::uint64_t tries = 0;
    for (;;) {
      const double d = draw_stable(beta, tau, rng);
      if (u(rng) <= std::exp(-mu * d)) {
        total += d;
        break;
      }
      if (++tries >= opts.max_rejections) {
        std::ostringstream msg;
        msg << "tempered stable sampler exceeded " << opts.max_rejections
            << " rejections (beta=" << beta << ", mu=" << mu << ", t=" << t << ")";
        throw SamplingBudgetError(msg.str());
      }
    }
  }
  return total;
}

// Increment of a non-inverse clock over a time span of length tau.
double draw_increment(const SubordinatorSpec& spec, double tau, Rng& rng,
                      const SamplerOptions& opts) {
  if (tau <= 0.0) return 0.0;
  if (const auto* p = spec.get_if<InverseGaussian>()) return draw_ig(p->delta, p->gamma, tau, rng);
  if (const auto* p = spec.get_if<Stable>()) return draw_stable(p->beta, tau, rng);
  if (const auto* p = spec.get_if<TemperedStable>()) {
    return draw_tempered(p->beta, p->mu, tau, rng, opts);
  }
  if (const auto* p = spec.get_if<Composition>()) {
    double v = tau;
    for (auto it = p->parts.rbegin(); it != p->parts.rend(); ++it) {
      v = draw_increment(*it, v, rng, opts);
    }
    return v;
  }
  throw CapabilityError("draw_increment: inverse clocks do not have independent increments");
}

// Natural time scale of the first passage over level t: 1 / phi(1 / t).
double passage_scale(const SubordinatorSpec& base, double t) {
  return 1.0 / base.laplace_exponent(1.0 / t);
}

std::vector<double> first_passage_path(const SubordinatorSpec& base,
                                       std::span<const double> levels, Rng& rng,
                                       const SamplerOptions& opts) {
  std::vector<double> out(levels.size(), 0.0);
  if (levels.empty()) return out;
  const double top = levels.back();
  if (top <= 0.0) return out;
  const double step = opts.inverse_rel_tol * passage_scale(base, top);
  std::size_t idx = 0;
  while (idx < levels.size() && levels[idx] <= 0.0) ++idx;
  double value = 0.0;
  std::uint64_t steps = 0;
  while (idx < levels.size()) {
    value += draw_increment(base, step, rng, opts);
    ++steps;
    while (idx < levels.size() && value > levels[idx]) {
      out[idx] = (static_cast<double>(steps) - 0.5) * step;
      ++idx;
    }
    if (steps >= opts.max_grid_steps && idx < levels.size()) {
      std::ostringstream msg;
      msg << "first-passage sampler for " << base.describe() << " exceeded "
          << opts.max_grid_steps << " grid steps below level " << levels[idx];
      throw SamplingBudgetError(msg.str());
    }
  }
  return out;
}

void check_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw DomainError("sample_path: times must be nonnegative and finite");
    }
    if (i > 0 && times[i] < times[i - 1]) {
      throw DomainError("sample_path: times must be nondecreasing");
    }
  }
}

}  // namespace

std::vector<double> sample_path(const SubordinatorSpec& spec, std::span<const double> times,
                                Rng& rng, const SamplerOptions& opts) {
  check_times(times);
  if (spec.is<InverseOf>()) return first_passage_path(spec.base(), times, rng, opts);
  if (const auto* p = spec.get_if<Composition>()) {
    std::vector<double> v(times.begin(), times.end());
    for (auto it = p->parts.rbegin(); it != p->parts.rend(); ++it) {
      v = sample_path(*it, v, rng, opts);
    }
    return v;
  }
  std::vector<double> out(times.size());
  double prev_t = 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    value += draw_increment(spec, times[i] - prev_t, rng, opts);
    prev_t = times[i];
    out[i] = value;
  }
  return out;
}

double sample_one(const SubordinatorSpec& spec, double t, Rng& rng, const SamplerOptions& opts) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("sample: t must be positive");
  if (spec.is<InverseOf>()) {
    const SubordinatorSpec base = simplify(spec.base());
    // Self-similarity: E(t) =_d (t / D(1))^beta.
    if (const auto* p = base.get_if<Stable>()) {
      return std::pow(t / draw_stable(p->beta, 1.0, rng), p->beta);
    }
    const double level[1] = {t};
    return first_passage_path(spec.base(), level, rng, opts)[0];
  }
  return draw_increment(spec, t, rng, opts);
}

SampleBatch sample(const SubordinatorSpec& spec, double t, std::size_t count, std::uint64_t seed,
                   const SamplerOptions& opts) {
  if (count == 0) throw DomainError("sample: count must be at least 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("sample: t must be positive");
  SampleBatch batch{spec, t, seed, std::vector<double>(count)};
  run_batches(count, seed, opts.jobs, [&](std::size_t begin, std::size_t end, Rng& rng) {
    for (std::size_t i = begin; i < end; ++i) batch.values[i] = sample_one(spec, t, rng, opts);
  });
  return batch;
}

double stable_moment(double beta, double p) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("stable_moment: beta must lie in (0, 1)");
  if (!(p > 0.0)) throw DomainError("stable_moment: p must be positive");
  if (p >= beta) {
    std::ostringstream msg;
    msg << "stable_moment: E[D(1)^p] diverges for p=" << p << " >= beta=" << beta;
    throw DomainError(msg.str());
  }
  // Tail beyond x0 from the convergent large-x expansion of the density,
  // int_x0^inf x^p x^{-n beta - 1} dx = x0^{p - n beta} / (n beta - p).
  auto tail = [&](double x0, double& out) {
    const double lx = std::log(x0);
    double sum = 0.0;
    double largest = 0.0;
    for (int n = 1; n <= 400; ++n) {
      const double mag = std::exp(std::lgamma(n * beta + 1.0) - std::lgamma(n + 1.0) +
                                  (p - n * beta) * lx) /
                         (n * beta - p);
      sum += (n % 2 == 1 ? 1.0 : -1.0) * std::sin(n * kPi * beta) * mag;
      largest = std::max(largest, mag);
      if (n > 2 && mag < 1e-17 * std::abs(sum)) {
        out = sum / kPi;
        return largest <= 4.0 * std::abs(sum);
      }
    }
    return false;
  };
  double x0 = 4.0;
  double tail_value = 0.0;
  while (!tail(x0, tail_value)) {
    x0 *= 2.0;
    if (x0 > 1e12) throw ConvergenceError("stable_moment: tail expansion did not settle");
  }
  auto body = [&](double u) {
    const double x = x0 * std::exp(-u);
    if (!(x > 0.0)) return 0.0;
    return std::pow(x, p + 1.0) * stable_density(x, 1.0, beta);
  };
  quad::Options q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;
  return quad::integrate_upper(body, 0.0, 1.0, q).value + tail_value;
}

}  // namespace tcpp
