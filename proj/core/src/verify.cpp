#include "tcpp/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "equations.hpp"
#include "tcpp/error.hpp"
#include "tcpp/specfun.hpp"
#include "tcpp/timechange.hpp"

namespace tcpp::verify {

void GridSpec::validate() const {
  if (!(t_min > 0.0) || !std::isfinite(t_min)) throw GridError("grid: t_min must be positive");
  if (!(t_max > t_min) || !std::isfinite(t_max)) {
    throw GridError("grid: t_max must exceed t_min");
  }
  if (points < 8) throw GridError("grid: at least 8 points are required");
  if (refinement_levels < 2 || refinement_levels > 6) {
    throw GridError("grid: refinement_levels must lie in [2, 6]");
  }
}

std::vector<double> GridSpec::evaluation_times() const {
  std::vector<double> t(points);
  for (int j = 0; j < points; ++j) t[j] = t_min + j * (t_max - t_min) / (points - 1);
  return t;
}

OrderEstimate convergence_order(const std::vector<LevelResidual>& levels, double floor) {
  if (levels.size() < 3) throw DomainError("convergence_order: at least 3 levels are required");
  std::vector<std::pair<double, double>> pts;
  for (const auto& l : levels) {
    if (l.max_residual > floor) pts.emplace_back(std::log(l.h), std::log(l.max_residual));
  }
  if (pts.size() < 2) return {0.0, true};
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0.0, sxx = 0.0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return {sxy / sxx, false};
}

double convergence_order(const ResidualReport& report) {
  return convergence_order(report.levels).order;
}

const std::vector<EquationInfo>& registry() {
  static const std::vector<EquationInfo> infos = [] {
    std::vector<EquationInfo> out;
    for (const auto& d : detail::definitions()) out.push_back(d.info);
    return out;
  }();
  return infos;
}

const EquationInfo& equation_info(std::string_view id) {
  return detail::definition(std::string(id)).info;
}

namespace {

double parse_number(std::string_view s, std::string_view context) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  auto one = [&](std::string_view v) {
    v = trim(v);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw InputError("bad argument '" + std::string(s) + "' in '" + std::string(context) + "'");
    }
    return out;
  };
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return one(s);
  const double den = one(s.substr(slash + 1));
  if (den == 0.0) throw InputError("zero denominator in '" + std::string(context) + "'");
  return one(s.substr(0, slash)) / den;
}

std::string format_arg(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e6) return std::to_string(static_cast<long>(v));
  for (int q = 2; q <= 64; ++q) {
    const double p = v * q;
    if (std::abs(p - std::round(p)) < 1e-12) {
      return std::to_string(static_cast<long>(std::round(p))) + "/" + std::to_string(q);
    }
  }
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string variant_name(const detail::EquationDef& def, const Params& p) {
  if (def.args.empty()) return def.info.id;
  std::string out = def.info.id + "(";
  for (std::size_t i = 0; i < def.args.size(); ++i) {
    if (i) out += ",";
    out += format_arg(p.at(def.args[i]));
  }
  return out + ")";
}

struct StepPlan {
  std::vector<double> steps;
};

// Finite-difference steps: the base step keeps every stencil inside the
// evaluation window and (t_min, inf), then halves per level.
StepPlan fd_steps(const GridSpec& g, int reach) {
  const double spacing = (g.t_max - g.t_min) / (g.points - 1);
  const double base = std::min(spacing, g.t_min / (reach + 1)) / 2.0;
  StepPlan plan;
  for (int l = 0; l < g.refinement_levels; ++l) plan.steps.push_back(base / std::ldexp(1.0, l));
  return plan;
}

// L1 steps: every evaluation time must be a multiple of the coarsest step,
// and t_min at least kCaputoStepsToFirst steps from the origin.
constexpr int kCaputoStepsToFirst = 8;

StepPlan caputo_steps(const GridSpec& g) {
  const double spacing = (g.t_max - g.t_min) / (g.points - 1);
  for (int q = 1; q <= 4096; ++q) {
    const double h = spacing / q;
    const double r = g.t_min / h;
    if (std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, r) &&
        std::round(r) >= kCaputoStepsToFirst) {
      StepPlan plan;
      for (int l = 0; l < g.refinement_levels; ++l) plan.steps.push_back(h / std::ldexp(1.0, l));
      return plan;
    }
  }
  throw GridError("Caputo grids need t_min to be a multiple of a fraction of the point spacing");
}

// Rethrows the active library error with the same type and a prefix.
[[noreturn]] void rethrow_with_context(const std::string& where) {
  try {
    throw;
  } catch (const PoleError& e) {
    throw PoleError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where + ": " + e.what());
  } catch (const GridError& e) {
    throw GridError(where + ": " + e.what());
  } catch (const CapabilityError& e) {
    throw CapabilityError(where + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  } catch (const SamplingBudgetError& e) {
    throw SamplingBudgetError(where + ": " + e.what());
  }
}

LevelResidual norms(const std::vector<double>& r, double h) {
  double mx = 0.0, ss = 0.0;
  for (double v : r) {
    if (!std::isfinite(v)) throw ConvergenceError("non-finite residual");
    mx = std::max(mx, v);
    ss += v * v;
  }
  return {h, mx, std::sqrt(ss / std::max<std::size_t>(1, r.size()))};
}

}  // namespace

std::pair<std::string, Params> parse_equation_id(std::string_view text) {
  const auto open = text.find('(');
  const std::string id(text.substr(0, open));
  const auto& def = detail::definition(id);
  Params p;
  if (open == std::string_view::npos) return {id, p};
  if (text.back() != ')') throw InputError("unbalanced parentheses in '" + std::string(text) + "'");
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = inner.find(',');
    parts.push_back(inner.substr(0, comma));
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  if (parts.size() > def.args.size()) {
    throw InputError("too many arguments in '" + std::string(text) + "'");
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    p[def.args[i]] = parse_number(parts[i], text);
  }
  return {id, p};
}

ResidualReport check_equation(std::string_view equation_id, const Params& params,
                              const GridSpec& grid, const std::vector<int>& k_range) {
  auto [id, from_id] = parse_equation_id(equation_id);
  const auto& def = detail::definition(id);
  grid.validate();

  Params merged = def.info.variants.front();
  for (const auto& [k, v] : from_id) merged[k] = v;
  for (const auto& [k, v] : params) merged[k] = v;
  def.validate(merged);

  std::vector<int> ks = k_range.empty() ? def.info.k_range : k_range;
  for (int k : ks) {
    if (k < 0) throw InputError("k_range entries must be nonnegative");
  }
  if (ks.empty()) throw InputError("k_range must not be empty");

  detail::EquationContext ctx{merged, grid, ks, grid.evaluation_times()};
  const StepPlan plan = def.caputo ? caputo_steps(grid) : fd_steps(grid, def.reach(merged));

  ResidualReport rep;
  rep.equation_id = id;
  rep.variant = variant_name(def, merged);
  rep.form = def.form(merged);
  rep.params = merged;
  rep.grid = grid;
  rep.k_range = ks;
  const detail::Band band = def.band(merged);
  rep.band_lo = band.lo;
  rep.band_hi = band.hi;
  if (def.alternative_form) rep.alternative_form = def.alternative_form(merged);

  for (double h : plan.steps) {
    detail::LevelOutput out;
    try {
      out = def.eval(ctx, h);
    } catch (const Error&) {
      rethrow_with_context(rep.variant);
    }
    rep.levels.push_back(norms(out.residuals, h));
    rep.scale = std::max(rep.scale, out.scale);
    if (!out.alternative.empty()) rep.alternative_levels.push_back(norms(out.alternative, h));
  }

  if (rep.levels.size() >= 3) {
    const OrderEstimate est = convergence_order(rep.levels);
    rep.estimated_order = est.order;
    rep.floor_limited = est.floor_limited;
  } else {
    rep.floor_limited = std::all_of(rep.levels.begin(), rep.levels.end(),
                                    [](const LevelResidual& l) { return l.max_residual <= kFloor; });
  }
  if (rep.floor_limited) {
    rep.pass = true;
    return rep;
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    if (rep.levels[i - 1].max_residual <= kFloor) break;
    if (!(rep.levels[i].max_residual < rep.levels[i - 1].max_residual)) monotone = false;
  }
  const bool in_band = rep.levels.size() >= 3 && rep.estimated_order >= band.lo &&
                       rep.estimated_order <= band.hi;
  const bool small = rep.levels.back().max_residual <= 1e-3 * rep.scale;
  rep.pass = monotone && in_band && small;
  return rep;
}

namespace {

std::vector<std::vector<double>> level_grids(const GridSpec& g) {
  std::vector<std::vector<double>> out;
  for (int l = 0; l < g.refinement_levels; ++l) {
    const int n = (g.points - 1) * (1 << l) + 1;
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = g.t_min + i * (g.t_max - g.t_min) / (n - 1);
    out.push_back(std::move(t));
  }
  return out;
}

template <class F>
ExactnessCheck run_exactness(std::string id, std::string form, double tol, const GridSpec& grid,
                             F residual) {
  grid.validate();
  ExactnessCheck c{std::move(id), std::move(form), {}, tol, true};
  for (const auto& ts : level_grids(grid)) {
    double worst = 0.0;
    for (double t : ts) worst = std::max(worst, std::abs(residual(t)));
    c.level_residuals.push_back(worst);
    c.pass = c.pass && worst <= tol;
  }
  return c;
}

}  // namespace

ExactnessCheck exactness_prop21(double delta, double gamma, double lambda, const GridSpec& grid) {
  if (!(delta > 0.0 && gamma > 0.0 && lambda > 0.0)) {
    throw InputError("exactness prop2.1: delta, gamma and lambda must be positive");
  }
  const double a = delta * gamma - delta * std::sqrt(gamma * gamma + 2.0 * lambda);
  const SubordinatorSpec clock = SubordinatorSpec::ig(delta, gamma);
  return run_exactness(
      "prop2.1", "a^2 e^{at} - 2 delta gamma a e^{at} - 2 delta^2 lambda p_0(t), a = delta gamma - delta sqrt(gamma^2 + 2 lambda)",
      1e-8, grid, [&](double t) {
        const double e = std::exp(a * t);
        const double p0 = pmf_fixed_rule(clock, lambda, t, 0).front();
        return a * a * e - 2.0 * delta * gamma * a * e - 2.0 * delta * delta * lambda * p0;
      });
}

ExactnessCheck exactness_thm31(double lambda, const GridSpec& grid) {
  if (!(lambda > 0.0)) throw InputError("exactness thm3.1: lambda must be positive");
  const SubordinatorSpec clock = SubordinatorSpec::inverse(SubordinatorSpec::stable(0.5));
  const double rpi = 1.0 / std::sqrt(std::numbers::pi);
  return run_exactness(
      "thm3.1(2)", "q_0'(t) - lambda^2 q_0(t) + lambda t^{-1/2}/sqrt(pi), q_0' from e^{lambda^2 t} erfc(lambda sqrt t)",
      1e-6, grid, [&](double t) {
        const double l2 = lambda * lambda;
        const double closed = specfun::erfcx(lambda * std::sqrt(t));
        const double dq = l2 * closed - lambda * rpi / std::sqrt(t);
        const double q0 = pmf_fixed_rule(clock, lambda, t, 0).front();
        return dq - l2 * q0 + lambda * rpi / std::sqrt(t);
      });
}

ExactnessCheck exactness_frac_dde(double lambda, const GridSpec& grid) {
  if (!(lambda > 0.0)) throw InputError("exactness frac-dde: lambda must be positive");
  const SubordinatorSpec clock = SubordinatorSpec::inverse(SubordinatorSpec::stable(0.5));
  return run_exactness("frac-dde(1/2)", "q_0(t) - E_{1/2}(-lambda sqrt t)", 1e-8, grid,
                       [&](double t) {
                         return pmf_fixed_rule(clock, lambda, t, 0).front() -
                                specfun::mittag_leffler(0.5, -lambda * std::sqrt(t));
                       });
}

}  // namespace tcpp::verify
