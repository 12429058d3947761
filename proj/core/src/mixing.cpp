#include "tcpp/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>
#include <utility>

#include "tcpp/densities.hpp"
#include "tcpp/error.hpp"
#include "zolotarev.hpp"

namespace tcpp {
namespace {

using quad::Node;

const std::vector<Node>& unit_exp_sinh(double step) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const std::vector<Node>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[step];
  if (!slot) slot = std::make_shared<const std::vector<Node>>(quad::exp_sinh_rule(step));
  return *slot;
}

void prune(std::vector<Node>& nodes, double rel) {
  double wmax = 0.0;
  for (const auto& n : nodes) wmax = std::max(wmax, n.w);
  const double cut = rel * wmax;
  std::erase_if(nodes, [cut](const Node& n) { return !(n.w > cut) || !(n.x > 0.0); });
}

std::vector<Node> density_rule(const std::function<double(double)>& density, double center,
                               const MixingOptions& opts) {
  const auto& unit = unit_exp_sinh(opts.step);
  std::vector<Node> nodes;
  nodes.reserve(unit.size());
  for (const auto& u : unit) {
    const double x = center * u.x;
    if (!(x > 0.0) || !std::isfinite(x)) continue;
    const double w = center * u.w * density(x);
    if (w > 0.0 && std::isfinite(w)) nodes.push_back({x, w});
  }
  prune(nodes, opts.prune);
  return nodes;
}

// Product rule for D(1) = (a(phi) / E)^{(1 - beta) / beta} with phi uniform
// on (0, pi) and E standard exponential (Kanter): tanh-sinh in phi, exp-sinh
// in E. Node positions are smooth functions of the uniforms, so no density
// evaluation is needed and beta near 1 is as easy as any other index.
std::vector<Node> kanter_rule(double beta, const MixingOptions& opts) {
  constexpr double pi = std::numbers::pi;
  const double h = opts.step;
  const double power = (1.0 - beta) / beta;
  const auto& expo = unit_exp_sinh(h);
  std::vector<Node> nodes;
  for (int i = -static_cast<int>(8.0 / h); i <= static_cast<int>(8.0 / h); ++i) {
    const double u = i * h;
    const double s = 0.5 * pi * std::sinh(u);
    if (std::abs(s) > 40.0) continue;
    // phi = pi / (1 + e^{-2s}); psi = pi - phi is formed directly.
    const double phi = pi / (1.0 + std::exp(-2.0 * s));
    const double psi = pi / (1.0 + std::exp(2.0 * s));
    const double cs = std::cosh(s);
    const double w_phi = h * 0.25 * pi * std::cosh(u) / (cs * cs);
    const double log_a = phi <= 0.5 * pi ? detail::log_zolotarev(phi, beta)
                                         : detail::log_zolotarev_reflected(psi, beta);
    for (const auto& e : expo) {
      const double w = w_phi * e.w * std::exp(-e.x);
      const double x = std::exp(power * (log_a - std::log(e.x)));
      if (w > 0.0 && x > 0.0 && std::isfinite(x)) nodes.push_back({x, w});
    }
  }
  prune(nodes, opts.prune);
  return nodes;
}

// One-dimensional rule over the density of D(1). Cheaper than the product
// rule, but the density concentrates around 1 as beta approaches 1 and the
// exp-sinh spacing cannot follow it there.
std::vector<Node> unit_density_rule(double beta, const MixingOptions& opts) {
  auto f = [beta](double y) { return stable_density(y, 1.0, beta); };
  return density_rule(f, quad::detect_mass_center(f, 1e-6, 1e6), opts);
}

constexpr double kProductRuleBeta = 0.95;

// Cached per (beta, step, prune).
const std::vector<Node>& unit_stable_rule(double beta, const MixingOptions& opts) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, double>, std::shared_ptr<const std::vector<Node>>>
      cache;
  const auto key = std::make_tuple(beta, opts.step, opts.prune);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_shared<const std::vector<Node>>(
      beta >= kProductRuleBeta ? kanter_rule(beta, opts) : unit_density_rule(beta, opts));
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[key];
  if (!slot) slot = rule;
  return *slot;
}

std::vector<Node> stable_rule(double beta, double t, const MixingOptions& opts) {
  const double scale = std::pow(t, 1.0 / beta);
  std::vector<Node> nodes = unit_stable_rule(beta, opts);
  for (auto& n : nodes) n.x *= scale;
  return nodes;
}

std::vector<Node> inverse_stable_rule(double beta, double t, const MixingOptions& opts) {
  std::vector<Node> nodes = unit_stable_rule(beta, opts);
  for (auto& n : nodes) n.x = std::pow(t / n.x, beta);
  return nodes;
}

// Replaces each node (x, w) by the rule of `spec` at time x, weighted by w.
std::vector<Node> push_forward(const std::vector<Node>& inner, const SubordinatorSpec& spec,
                               const MixingOptions& opts);

std::vector<Node> rule_nodes(const SubordinatorSpec& spec, double t, const MixingOptions& opts) {
  if (const auto* p = spec.get_if<InverseGaussian>()) {
    const double center = p->delta * p->delta * t * t / (1.0 + p->delta * p->gamma * t);
    return density_rule([&](double x) { return ig_density(x, t, p->delta, p->gamma); }, center,
                        opts);
  }
  if (const auto* p = spec.get_if<Stable>()) return stable_rule(p->beta, t, opts);
  if (const auto* p = spec.get_if<TemperedStable>()) {
    const double center =
        std::pow(t, 1.0 / p->beta) /
        std::pow(1.0 + t * std::pow(p->mu, p->beta), 1.0 / p->beta - 1.0);
    return density_rule(
        [&](double x) { return tempered_stable_density(x, t, p->beta, p->mu); }, center, opts);
  }
  if (const auto* p = spec.get_if<Composition>()) {
    std::vector<Node> nodes = rule_nodes(p->parts.back(), t, opts);
    for (auto it = p->parts.rbegin() + 1; it != p->parts.rend(); ++it) {
      nodes = push_forward(nodes, *it, opts);
    }
    return nodes;
  }
  const SubordinatorSpec& base = spec.base();
  if (const auto* p = base.get_if<Stable>()) return inverse_stable_rule(p->beta, t, opts);
  if (const auto* p = base.get_if<InverseGaussian>()) {
    const double center = (std::sqrt(t) + p->gamma * t) / p->delta;
    return density_rule(
        [&](double x) { return hitting_time_density_ig(x, t, p->delta, p->gamma); }, center,
        opts);
  }
  if (const auto* p = base.get_if<TemperedStable>()) {
    const double center = std::pow(t, p->beta) * std::pow(1.0 + t * p->mu, 1.0 - p->beta) /
                          std::tgamma(1.0 + p->beta);
    return density_rule(
        [&](double x) { return inverse_tempered_density(x, t, p->beta, p->mu); }, center, opts);
  }
  const auto& parts = base.get_if<Composition>()->parts;
  std::vector<Node> nodes = rule_nodes(SubordinatorSpec::inverse(parts.front()), t, opts);
  for (auto it = parts.begin() + 1; it != parts.end(); ++it) {
    nodes = push_forward(nodes, SubordinatorSpec::inverse(*it), opts);
  }
  return nodes;
}

std::vector<Node> push_forward(const std::vector<Node>& inner, const SubordinatorSpec& spec,
                               const MixingOptions& opts) {
  std::vector<Node> out;
  for (const auto& n : inner) {
    for (const auto& m : rule_nodes(spec, n.x, opts)) out.push_back({m.x, m.w * n.w});
    if (out.size() > opts.max_nodes) {
      std::ostringstream msg;
      msg << "nested mixing rule for " << spec.describe() << " exceeds " << opts.max_nodes
          << " nodes; use Monte Carlo";
      throw CapabilityError(msg.str());
    }
  }
  prune(out, opts.prune);
  return out;
}

}  // namespace

double MixingRule::total_weight() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.w;
  return s;
}

SubordinatorSpec simplify(const SubordinatorSpec& spec) {
  if (spec.is<InverseOf>()) return SubordinatorSpec::inverse(simplify(spec.base()));
  const auto* c = spec.get_if<Composition>();
  if (!c) return spec;
  std::vector<SubordinatorSpec> flat;
  for (const auto& part : c->parts) {
    SubordinatorSpec s = simplify(part);
    if (const auto* inner = s.get_if<Composition>()) {
      flat.insert(flat.end(), inner->parts.begin(), inner->parts.end());
    } else {
      flat.push_back(std::move(s));
    }
  }
  std::vector<SubordinatorSpec> merged;
  for (auto& s : flat) {
    const auto* st = s.get_if<Stable>();
    if (st && !merged.empty() && merged.back().is<Stable>()) {
      merged.back() = SubordinatorSpec::stable(merged.back().get_if<Stable>()->beta * st->beta);
    } else {
      merged.push_back(std::move(s));
    }
  }
  if (merged.size() == 1) return merged.front();
  return SubordinatorSpec::compose(std::move(merged));
}

MixingRule mixing_rule(const SubordinatorSpec& spec, double t, const MixingOptions& opts) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("mixing_rule: t must be positive");
  return MixingRule{rule_nodes(simplify(spec), t, opts)};
}

bool has_density(const SubordinatorSpec& spec) {
  const SubordinatorSpec s = simplify(spec);
  if (s.is<Composition>()) return false;
  if (s.is<InverseOf>()) return !s.base().is<Composition>();
  return true;
}

double clock_density(const SubordinatorSpec& spec, double x, double t) {
  const SubordinatorSpec s = simplify(spec);
  if (const auto* p = s.get_if<InverseGaussian>()) return ig_density(x, t, p->delta, p->gamma);
  if (const auto* p = s.get_if<Stable>()) return stable_density(x, t, p->beta);
  if (const auto* p = s.get_if<TemperedStable>()) {
    return tempered_stable_density(x, t, p->beta, p->mu);
  }
  if (s.is<InverseOf>()) {
    const SubordinatorSpec& b = s.base();
    if (const auto* p = b.get_if<Stable>()) return inverse_stable_density(x, t, p->beta);
    if (const auto* p = b.get_if<InverseGaussian>()) {
      return hitting_time_density_ig(x, t, p->delta, p->gamma);
    }
    if (const auto* p = b.get_if<TemperedStable>()) {
      return inverse_tempered_density(x, t, p->beta, p->mu);
    }
  }
  throw CapabilityError("no density evaluator for " + spec.describe());
}

}  // namespace tcpp
