#pragma once

#include <cstddef>
#include <vector>

#include "tcpp/quadrature.hpp"
#include "tcpp/spec.hpp"

namespace tcpp {

struct MixingOptions {
  /// Step of the exp-sinh rule; halving it doubles the node count.
  double step = 1.0 / 16.0;
  /// Nodes whose weight falls below prune * (largest weight) are dropped.
  double prune = 1e-18;
  /// Upper bound on nodes of a nested (composed) rule.
  std::size_t max_nodes = 2'000'000;
};

/// Discrete law approximating X(t): sum_i w_i g(x_i) ~ E g(X(t)).
/// Node positions are smooth in t for a fixed rule, so mixtures built from
/// them can be differentiated numerically in t.
struct MixingRule {
  std::vector<quad::Node> nodes;
  double total_weight() const;
};

/// Rule for every spec: closed-form densities where they exist (IG, stable,
/// tempered, inverse IG, inverse stable, inverse tempered), scaling of cached
/// unit-time stable rules, and nested rules for compositions and for
/// inverses of compositions (E of A(B(.)) is E_B(E_A(.))).
/// Throws CapabilityError when a nested rule exceeds opts.max_nodes.
MixingRule mixing_rule(const SubordinatorSpec& spec, double t, const MixingOptions& opts = {});

/// Density of X(t) at x for specs that have one in closed or quadrature
/// form; throws CapabilityError otherwise (e.g. compositions involving IG).
double clock_density(const SubordinatorSpec& spec, double x, double t);
bool has_density(const SubordinatorSpec& spec);

/// Flattens nested compositions and merges runs of stable parts into one
/// stable part of the product index.
SubordinatorSpec simplify(const SubordinatorSpec& spec);

}  // namespace tcpp
