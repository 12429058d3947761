#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tcpp/rng.hpp"
#include "tcpp/spec.hpp"

namespace tcpp {

struct SampleBatch {
  SubordinatorSpec spec;
  double t;
  std::uint64_t seed;
  std::vector<double> values;
};

struct SamplerOptions {
  /// First-passage bracket width relative to the clock's natural scale at t.
  double inverse_rel_tol = 1e-4;
  /// Proposals per tempered piece before giving up.
  std::uint64_t max_rejections = 1'000'000;
  /// Grid steps per inverse path before giving up.
  std::uint64_t max_grid_steps = 50'000'000;
  /// Worker threads for batch sampling (0 = hardware concurrency).
  int jobs = 1;
};

/// One draw of X(t). Throws SamplingBudgetError when a budget is exhausted.
double sample_one(const SubordinatorSpec& spec, double t, Rng& rng,
                  const SamplerOptions& opts = {});

/// Path X(t_1), ..., X(t_n) on nondecreasing nonnegative times.
std::vector<double> sample_path(const SubordinatorSpec& spec, std::span<const double> times,
                                Rng& rng, const SamplerOptions& opts = {});

/// `count` independent draws of X(t); reproducible from (spec, t, seed,
/// count) regardless of opts.jobs.
SampleBatch sample(const SubordinatorSpec& spec, double t, std::size_t count,
                   std::uint64_t seed, const SamplerOptions& opts = {});

/// E[D(1)^p] for the beta-stable subordinator, 0 < p < beta, by quadrature
/// with the x^{-1-beta} tail summed analytically. Throws DomainError for
/// p >= beta, where the moment diverges.
double stable_moment(double beta, double p);

}  // namespace tcpp
