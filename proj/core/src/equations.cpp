#include "equations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "tcpp/densities.hpp"
#include "tcpp/error.hpp"
#include "tcpp/finite_difference.hpp"
#include "tcpp/samplers.hpp"
#include "tcpp/specfun.hpp"
#include "tcpp/timechange.hpp"

namespace tcpp::verify::detail {

double EquationContext::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw InputError("missing parameter '" + name + "'");
  return it->second;
}

int EquationContext::kmax() const { return *std::max_element(ks.begin(), ks.end()); }

namespace {

constexpr double kPi = std::numbers::pi;
using Vec = std::vector<double>;
using VecFn = std::function<Vec(double)>;

int radius(int order) { return order <= 2 ? 1 : 2; }

const Vec& weights(int order) {
  static const std::vector<Vec> w = {
      {1.0}, {-0.5, 0.0, 0.5}, {1.0, -2.0, 1.0}, {-0.5, 1.0, 0.0, -1.0, 0.5}, {1.0, -4.0, 6.0, -4.0, 1.0}};
  return w.at(order);
}

// Derivatives of a vector-valued function at one center, sharing function
// evaluations between stencils.
class Stencil {
 public:
  Stencil(VecFn f, double center, double h) : f_(std::move(f)), center_(center), h_(h) {}

  Vec derivative(int order) {
    const Vec& w = weights(order);
    const int r = order == 0 ? 0 : radius(order);
    Vec out(at(0).size(), 0.0);
    for (int i = -r; i <= r; ++i) {
      if (w[i + r] == 0.0) continue;
      const Vec& v = at(i);
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += w[i + r] * v[c];
    }
    const double hs = std::pow(h_, order);
    for (double& x : out) x /= hs;
    return out;
  }

 private:
  const Vec& at(int offset) {
    auto it = cache_.find(offset);
    if (it == cache_.end()) it = cache_.emplace(offset, f_(center_ + offset * h_)).first;
    return it->second;
  }

  VecFn f_;
  double center_;
  double h_;
  std::map<int, Vec> cache_;
};

struct Accumulator {
  LevelOutput out;
  void add(double lhs, double rhs, std::initializer_list<double> terms) {
    out.residuals.push_back(std::abs(lhs - rhs));
    out.scale = std::max({out.scale, std::abs(lhs), std::abs(rhs)});
    for (double t : terms) out.scale = std::max(out.scale, std::abs(t));
  }
};

double at(const Vec& v, int k) { return k < 0 || k >= static_cast<int>(v.size()) ? 0.0 : v[k]; }

Vec delta_seq(int kmax) {
  Vec d(kmax + 1, 0.0);
  d[0] = 1.0;
  return d;
}

// (-lambda (1 - shift))^j applied to v.
Vec backward_power(const Vec& v, double lambda, int j) {
  Vec out = shift_power(v, j);
  const double c = std::pow(-lambda, j);
  for (double& x : out) x *= c;
  return out;
}

double binomial(int n, int j) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0)));
}

VecFn pmf_fn(SubordinatorSpec spec, double lambda, int kmax) {
  return [spec = std::move(spec), lambda, kmax](double t) {
    return pmf_fixed_rule(spec, lambda, t, kmax);
  };
}

// pmf vectors on the L1 grid t_i = i h up to the largest evaluation time,
// and the Caputo derivative of each component there.
struct CaputoTables {
  std::vector<Vec> values;      // values[i] at t = (i + 1) h
  std::vector<Vec> derivative;  // same layout
  double h;
};

CaputoTables caputo_tables(const VecFn& f, double h, double t_end, double beta, const Vec& u0) {
  const int n = static_cast<int>(std::lround(t_end / h));
  CaputoTables tab{{}, {}, h};
  for (int i = 1; i <= n; ++i) tab.values.push_back(f(i * h));
  const std::size_t comps = u0.size();
  tab.derivative.assign(n, Vec(comps, 0.0));
  for (std::size_t c = 0; c < comps; ++c) {
    Vec series(n);
    for (int i = 0; i < n; ++i) series[i] = tab.values[i][c];
    const TimeSeries d = specfun::caputo_derivative(TimeSeries::uniform(h, h, std::move(series)), u0[c], beta);
    for (int i = 0; i < n; ++i) tab.derivative[i][c] = d.value(i);
  }
  return tab;
}

std::size_t grid_index(double t, double h) {
  return static_cast<std::size_t>(std::lround(t / h)) - 1;
}

const Vec kSpacePoints = {0.5, 1.0, 2.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

void positive(const Params& p, const char* name) {
  auto it = p.find(name);
  require(it != p.end() && it->second > 0.0 && std::isfinite(it->second),
          std::string("parameter '") + name + "' must be positive");
}

int integral(const Params& p, const char* name, int lo, int hi) {
  auto it = p.find(name);
  require(it != p.end(), std::string("missing parameter '") + name + "'");
  const double v = it->second;
  std::ostringstream msg;
  msg << "parameter '" << name << "' must be an integer in [" << lo << ", " << hi << "]";
  require(v == std::floor(v) && v >= lo && v <= hi, msg.str());
  return static_cast<int>(v);
}

GridSpec grid(double t_min, double t_max) { return GridSpec{t_min, t_max, 8, 4}; }

Band fixed(double lo, double hi) { return {lo, hi}; }

// Clock of the n-fold iterated composition whose Laplace exponent is s^{1/2^n}.
SubordinatorSpec iterated_half(int n) {
  const SubordinatorSpec g = SubordinatorSpec::ig(1.0 / std::sqrt(2.0), 0.0);
  if (n == 1) return g;
  return SubordinatorSpec::compose(std::vector<SubordinatorSpec>(n, g));
}

// ---------------------------------------------------------------- section 2

EquationDef prop21() {
  EquationDef e;
  e.info = {"prop2.1", "second-order DDE of the IG-time-changed pmf",
            {{{"delta", 1.0}, {"gamma", 1.0}, {"lambda", 1.0}}}, grid(0.5, 2.0), {0, 1, 2}};
  e.validate = [](const Params& p) {
    positive(p, "delta");
    positive(p, "gamma");
    positive(p, "lambda");
  };
  e.form = [](const Params&) {
    return std::string("p_k'' - 2 delta gamma p_k' = 2 delta^2 lambda (p_k - p_{k-1})");
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    const double d = c.param("delta"), g = c.param("gamma"), l = c.param("lambda");
    const VecFn f = pmf_fn(SubordinatorSpec::ig(d, g), l, c.kmax());
    Accumulator acc;
    for (double t : c.times) {
      Stencil s(f, t, h);
      const Vec p = s.derivative(0), d1 = s.derivative(1), d2 = s.derivative(2);
      for (int k : c.ks) {
        const double rhs = 2.0 * d * d * l * (p[k] - at(p, k - 1));
        acc.add(d2[k] - 2.0 * d * g * d1[k], rhs, {d2[k], 2.0 * d * g * d1[k]});
      }
    }
    return acc.out;
  };
  return e;
}

EquationDef prop22() {
  EquationDef e;
  e.info = {"prop2.2", "first-order DDE of the pmf time-changed by the IG hitting time",
            {{{"delta", 1.0}, {"gamma", 1.0}, {"lambda", 1.0}}}, grid(0.5, 2.0), {0, 1, 2, 3}};
  e.validate = [](const Params& p) {
    positive(p, "delta");
    positive(p, "gamma");
    positive(p, "lambda");
  };
  e.form = [](const Params&) {
    return std::string(
        "p_k' = (1/(2 delta^2)) [(lambda^2 - 2 delta gamma lambda) p_k + (2 delta gamma lambda - "
        "2 lambda^2) p_{k-1} + lambda^2 p_{k-2}] + (1/(2 delta^2)) h(0,t) q_k, t > 0, with "
        "q_0 = -lambda, q_1 = lambda, q_k = 0 (k >= 2) and h(0,t) the hitting-time density at 0");
  };
  e.band = [](const Params&) { return fixed(0.8, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    const double d = c.param("delta"), g = c.param("gamma"), l = c.param("lambda");
    const VecFn f = pmf_fn(SubordinatorSpec::inverse(SubordinatorSpec::ig(d, g)), l, c.kmax());
    const double inv = 1.0 / (2.0 * d * d);
    Accumulator acc;
    for (double t : c.times) {
      Stencil s(f, t, h);
      const Vec p = s.derivative(0), d1 = s.derivative(1);
      const double h0 = hitting_time_density_ig(0.0, t, d, g);
      for (int k : c.ks) {
        const double drift = inv * ((l * l - 2.0 * d * g * l) * p[k] +
                                    (2.0 * d * g * l - 2.0 * l * l) * at(p, k - 1) +
                                    l * l * at(p, k - 2));
        const double slope0 = k == 0 ? -l : (k == 1 ? l : 0.0);
        const double boundary = inv * h0 * slope0;
        acc.add(d1[k], drift + boundary, {drift, boundary});
      }
    }
    return acc.out;
  };
  return e;
}

EquationDef ig_density_pde() {
  EquationDef e;
  e.info = {"ig-density-pde", "PDE of the IG density g(x,t) in x and t",
            {{{"delta", 1.0}, {"gamma", 1.0}}}, grid(0.5, 2.0), {0}};
  e.validate = [](const Params& p) {
    positive(p, "delta");
    positive(p, "gamma");
  };
  e.form = [](const Params&) {
    return std::string("d^2 g/dt^2 - 2 delta gamma dg/dt = 2 delta^2 dg/dx at x in {0.5, 1, 2}");
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    const double d = c.param("delta"), g = c.param("gamma");
    Accumulator acc;
    for (double t : c.times) {
      Stencil st([&](double tt) {
        Vec v;
        for (double x : kSpacePoints) v.push_back(ig_density(x, tt, d, g));
        return v;
      }, t, h);
      const Vec d1 = st.derivative(1), d2 = st.derivative(2);
      for (std::size_t i = 0; i < kSpacePoints.size(); ++i) {
        const double dx = Stencil([&](double x) { return Vec{ig_density(x, t, d, g)}; },
                                  kSpacePoints[i], h)
                              .derivative(1)[0];
        acc.add(d2[i] - 2.0 * d * g * d1[i], 2.0 * d * d * dx, {d2[i], 2.0 * d * g * d1[i]});
      }
    }
    return acc.out;
  };
  return e;
}

// ---------------------------------------------------------------- section 3

EquationDef prop31() {
  EquationDef e;
  e.info = {"prop3.1", "pmf under the n-fold iterated IG composition",
            {{{"n", 1.0}, {"lambda", 1.0}}, {{"n", 2.0}, {"lambda", 1.0}}}, grid(0.5, 2.0),
            {0, 1, 2}};
  e.args = {"n"};
  e.validate = [](const Params& p) {
    integral(p, "n", 1, 2);
    positive(p, "lambda");
  };
  e.form = [](const Params& p) {
    const int n = static_cast<int>(p.at("n"));
    return "d^" + std::to_string(1 << n) + " p_k/dt^" + std::to_string(1 << n) +
           " = lambda (p_k - p_{k-1}), clock = " + std::to_string(n) +
           "-fold composition of IG(1/sqrt(2), 0)";
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params& p) { return radius(1 << static_cast<int>(p.at("n"))); };
  e.eval = [](const EquationContext& c, double h) {
    const int n = static_cast<int>(c.param("n"));
    const double l = c.param("lambda");
    const VecFn f = pmf_fn(iterated_half(n), l, c.kmax());
    Accumulator acc;
    for (double t : c.times) {
      Stencil s(f, t, h);
      const Vec p = s.derivative(0), dn = s.derivative(1 << n);
      for (int k : c.ks) {
        const double rhs = l * (p[k] - at(p, k - 1));
        acc.add(dn[k], rhs, {l * p[k], l * at(p, k - 1)});
      }
    }
    return acc.out;
  };
  return e;
}

EquationDef deblassie() {
  EquationDef e;
  e.info = {"deblassie", "PDE of the stable density for rational index k/m",
            {{{"k", 1.0}, {"m", 2.0}}, {{"k", 1.0}, {"m", 3.0}}}, grid(0.5, 2.0), {0}};
  e.args = {"k", "m"};
  e.validate = [](const Params& p) {
    const int m = integral(p, "m", 2, 4);
    const int k = integral(p, "k", 1, 4);
    require(k < m, "deblassie: k must be smaller than m");
  };
  e.form = [](const Params& p) {
    const int k = static_cast<int>(p.at("k")), m = static_cast<int>(p.at("m"));
    return "d^" + std::to_string(m) + " f/dt^" + std::to_string(m) + " = " +
           (m % 2 ? "-" : "") + "d^" + std::to_string(k) + " f/dx^" + std::to_string(k) +
           " for the stable density of index " + std::to_string(k) + "/" + std::to_string(m) +
           " at x in {0.5, 1, 2}";
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params& p) { return radius(static_cast<int>(p.at("m"))); };
  e.eval = [](const EquationContext& c, double h) {
    const int k = static_cast<int>(c.param("k")), m = static_cast<int>(c.param("m"));
    const double beta = static_cast<double>(k) / m;
    const double sign = m % 2 ? -1.0 : 1.0;
    Accumulator acc;
    for (double t : c.times) {
      Stencil st([&](double tt) {
        Vec v;
        for (double x : kSpacePoints) v.push_back(stable_density(x, tt, beta));
        return v;
      }, t, h);
      const Vec dt = st.derivative(m);
      for (std::size_t i = 0; i < kSpacePoints.size(); ++i) {
        const double dx = Stencil([&](double x) { return Vec{stable_density(x, t, beta)}; },
                                  kSpacePoints[i], h)
                              .derivative(k)[0];
        acc.add(dt[i], sign * dx, {});
      }
    }
    return acc.out;
  };
  return e;
}

// d/dt q_k = (-lambda)^m (1 - shift)^m q_k
//          + sum_{j=1}^{m-1} (-lambda)^j [(1 - shift)^j delta]_k t^{-(m-j)/m} / Gamma(j/m).
LevelOutput first_order_dde(const EquationContext& c, double h, int m,
                            const SubordinatorSpec& clock) {
  const double l = c.param("lambda");
  const int kmax = c.kmax();
  const VecFn f = pmf_fn(clock, l, kmax);
  const Vec delta = delta_seq(kmax);
  std::vector<Vec> source_coef;
  for (int j = 1; j < m; ++j) source_coef.push_back(backward_power(delta, l, j));
  Accumulator acc;
  for (double t : c.times) {
    Stencil s(f, t, h);
    const Vec q = s.derivative(0), d1 = s.derivative(1);
    const Vec main = backward_power(q, l, m);
    for (int k : c.ks) {
      double source = 0.0;
      for (int j = 1; j < m; ++j) {
        source += source_coef[j - 1][k] * std::pow(t, -static_cast<double>(m - j) / m) /
                  std::tgamma(static_cast<double>(j) / m);
      }
      acc.add(d1[k], main[k] + source, {main[k], source});
    }
  }
  return acc.out;
}

std::string first_order_form(int m) {
  const std::string ms = std::to_string(m);
  return "q_k' = (-lambda)^" + ms + " (1 - B)^" + ms + " q_k + sum_{j=1}^{" +
         std::to_string(m - 1) + "} (-lambda)^j [(1 - B)^j delta_0]_k t^{-(" + ms +
         "-j)/" + ms + "} / Gamma(j/" + ms + "), B the backward shift in k";
}

EquationDef thm31() {
  EquationDef e;
  e.info = {"thm3.1", "first-order DDE of the pmf under the inverse 1/m-stable clock",
            {{{"m", 2.0}, {"lambda", 1.0}}, {{"m", 3.0}, {"lambda", 1.0}}}, grid(0.25, 4.0),
            {0, 1, 2}};
  e.args = {"m"};
  e.validate = [](const Params& p) {
    integral(p, "m", 2, 8);
    positive(p, "lambda");
  };
  e.form = [](const Params& p) {
    return first_order_form(static_cast<int>(p.at("m"))) + ", clock = inverse stable(1/m)";
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    const int m = static_cast<int>(c.param("m"));
    return first_order_dde(c, h, m, SubordinatorSpec::inverse(SubordinatorSpec::stable(1.0 / m)));
  };
  return e;
}

EquationDef cor31() {
  EquationDef e;
  e.info = {"cor3.1", "first-order DDE under the inverse of the iterated IG composition",
            {{{"n", 1.0}, {"lambda", 1.0}}, {{"n", 2.0}, {"lambda", 1.0}}}, grid(0.25, 4.0),
            {0, 1, 2}};
  e.args = {"n"};
  e.validate = [](const Params& p) {
    integral(p, "n", 1, 2);
    positive(p, "lambda");
  };
  e.form = [](const Params& p) {
    const int n = static_cast<int>(p.at("n"));
    return first_order_form(1 << n) + ", clock = inverse of the " + std::to_string(n) +
           "-fold composition of IG(1/sqrt(2), 0)";
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    const int n = static_cast<int>(c.param("n"));
    return first_order_dde(c, h, 1 << n, SubordinatorSpec::inverse(iterated_half(n)));
  };
  return e;
}

EquationDef frac_dde() {
  EquationDef e;
  e.info = {"frac-dde", "Caputo DDE of the fractional Poisson pmf",
            {{{"beta", 0.5}, {"lambda", 1.0}}, {{"beta", 0.25}, {"lambda", 1.0}}},
            grid(0.25, 2.0), {0, 1, 2}};
  e.args = {"beta"};
  e.caputo = true;
  e.validate = [](const Params& p) {
    positive(p, "beta");
    require(p.at("beta") < 1.0, "frac-dde: beta must lie in (0, 1)");
    positive(p, "lambda");
  };
  e.form = [](const Params&) {
    return std::string(
        "D^beta q_k = -lambda (q_k - q_{k-1}) (Caputo, L1 scheme), clock = inverse stable(beta)");
  };
  // L1 on q_k ~ t^beta near the origin: order min(2 - beta, 1 + beta).
  e.band = [](const Params& p) {
    const double b = p.at("beta");
    const double order = std::min(2.0 - b, 1.0 + b);
    return fixed(order - 0.1, order + 0.3);
  };
  e.eval = [](const EquationContext& c, double h) {
    const double b = c.param("beta"), l = c.param("lambda");
    const int kmax = c.kmax();
    const VecFn f = pmf_fn(SubordinatorSpec::inverse(SubordinatorSpec::stable(b)), l, kmax);
    const CaputoTables tab = caputo_tables(f, h, c.times.back(), b, delta_seq(kmax));
    Accumulator acc;
    for (double t : c.times) {
      const std::size_t i = grid_index(t, h);
      const Vec& q = tab.values[i];
      for (int k : c.ks) {
        const double rhs = -l * (q[k] - at(q, k - 1));
        acc.add(tab.derivative[i][k], rhs, {l * q[k]});
      }
    }
    return acc.out;
  };
  return e;
}

EquationDef et_pde() {
  EquationDef e;
  e.info = {"et-pde", "PDE system of the inverse stable density m(x,t), index 1/m",
            {{{"m", 2.0}}}, grid(0.5, 2.0), {0}};
  e.args = {"m"};
  e.validate = [](const Params& p) { integral(p, "m", 2, 2); };
  e.form = [](const Params&) {
    return std::string(
        "dm/dt = d^2 m/dx^2 at x in {0.5, 1, 2}; m(0,t) = t^{-1/2}/Gamma(1/2); dm/dx(0,t) = 0 "
        "(one-sided difference); m(50,t) = 0");
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    auto m = [](double x, double t) { return inverse_stable_density(x, t, 0.5); };
    Accumulator acc;
    for (double t : c.times) {
      Stencil st([&](double tt) {
        Vec v;
        for (double x : kSpacePoints) v.push_back(m(x, tt));
        return v;
      }, t, h);
      const Vec dt = st.derivative(1);
      for (std::size_t i = 0; i < kSpacePoints.size(); ++i) {
        const double dxx =
            Stencil([&](double x) { return Vec{m(x, t)}; }, kSpacePoints[i], h).derivative(2)[0];
        acc.add(dt[i], dxx, {});
      }
      const double m0 = 1.0 / (std::sqrt(t) * specfun::gamma_fn(0.5));
      acc.add(m(0.0, t), m0, {});
      acc.add(forward_difference([&](double x) { return m(x, t); }, 0.0, h), 0.0, {});
      acc.add(m(50.0, t), 0.0, {});
    }
    return acc.out;
  };
  return e;
}

EquationDef prop32() {
  EquationDef e;
  e.info = {"prop3.2", "Caputo DDE under H(E(t)), E inverse stable of index beta",
            {{{"n", 1.0}, {"beta", 0.5}, {"lambda", 1.0}}}, grid(0.25, 2.0), {0, 1, 2}};
  e.args = {"n", "beta"};
  e.caputo = true;
  e.validate = [](const Params& p) {
    integral(p, "n", 1, 1);
    positive(p, "beta");
    require(p.at("beta") < 1.0, "prop3.2: beta must lie in (0, 1)");
    positive(p, "lambda");
  };
  e.form = [](const Params&) {
    return std::string(
        "D^beta q_k = lambda^2 (1 - B)^2 q_k + q'_k(0) t^{-beta/2} U(1/2) / Gamma(1/2) (Caputo, L1), "
        "U(g) = E D(1)^{g beta}, q'_k(0) = -lambda, lambda, 0; clock = H(E(t)), H the hitting "
        "time of IG(1/sqrt(2), 0)");
  };
  e.alternative_form = [](const Params&) -> std::optional<std::string> {
    return "exponent 2^n - 1: D^beta q_k = lambda^2 (1 - B) q_k + q'_k(0) t^{-beta/2} U(1/2) / "
           "Gamma(1/2)";
  };
  // q_k ~ t^{beta/2} near the origin.
  e.band = [](const Params& p) {
    const double b = p.at("beta");
    const double order = std::min(2.0 - b, 1.0 + b / 2.0);
    return fixed(order - 0.1, order + 0.3);
  };
  e.eval = [](const EquationContext& c, double h) {
    const double b = c.param("beta"), l = c.param("lambda");
    const int kmax = c.kmax();
    const SubordinatorSpec clock = SubordinatorSpec::inverse(SubordinatorSpec::compose(
        {SubordinatorSpec::stable(b), SubordinatorSpec::ig(1.0 / std::sqrt(2.0), 0.0)}));
    const VecFn f = pmf_fn(clock, l, kmax);
    const CaputoTables tab = caputo_tables(f, h, c.times.back(), b, delta_seq(kmax));
    const double u = stable_moment(b, 0.5 * b);
    const Vec slope0 = backward_power(delta_seq(kmax), l, 1);
    Accumulator acc;
    for (double t : c.times) {
      const std::size_t i = grid_index(t, h);
      const Vec& q = tab.values[i];
      const Vec main = backward_power(q, l, 2);
      const Vec alt = shift_power(q, 1);
      const double src = std::pow(t, -0.5 * b) * u / std::sqrt(kPi);
      for (int k : c.ks) {
        const double lhs = tab.derivative[i][k];
        acc.add(lhs, main[k] + slope0[k] * src, {main[k], slope0[k] * src});
        acc.out.alternative.push_back(std::abs(lhs - l * l * alt[k] - slope0[k] * src));
      }
    }
    return acc.out;
  };
  return e;
}

// ---------------------------------------------------------------- section 4

// sum_{j=1}^m (-1)^j C(m,j) mu^{1 - j/m} d^j/dt^j applied through a stencil.
Vec tempered_operator(Stencil& s, int m, double mu, double* largest) {
  Vec out;
  for (int j = 1; j <= m; ++j) {
    const Vec d = s.derivative(j);
    if (out.empty()) out.assign(d.size(), 0.0);
    const double c = (j % 2 ? -1.0 : 1.0) * binomial(m, j) * std::pow(mu, 1.0 - double(j) / m);
    for (std::size_t i = 0; i < d.size(); ++i) {
      out[i] += c * d[i];
      *largest = std::max(*largest, std::abs(c * d[i]));
    }
  }
  return out;
}

std::string tempered_operator_form(int m) {
  return "sum_{j=1}^{" + std::to_string(m) + "} (-1)^j C(" + std::to_string(m) + ",j) mu^{1-j/" +
         std::to_string(m) + "} d^j/dt^j";
}

EquationDef prop41() {
  EquationDef e;
  e.info = {"prop4.1", "PDE of the tempered stable density, index 1/m",
            {{{"m", 2.0}, {"mu", 1.0}}, {{"m", 3.0}, {"mu", 1.0}}}, grid(0.5, 2.0), {0}};
  e.args = {"m"};
  e.validate = [](const Params& p) {
    integral(p, "m", 2, 4);
    positive(p, "mu");
  };
  e.form = [](const Params& p) {
    return tempered_operator_form(static_cast<int>(p.at("m"))) +
           " f_mu = d f_mu/dx at x in {0.5, 1, 2}";
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params& p) { return radius(static_cast<int>(p.at("m"))); };
  e.eval = [](const EquationContext& c, double h) {
    const int m = static_cast<int>(c.param("m"));
    const double mu = c.param("mu"), b = 1.0 / m;
    Accumulator acc;
    for (double t : c.times) {
      Stencil st([&](double tt) {
        Vec v;
        for (double x : kSpacePoints) v.push_back(tempered_stable_density(x, tt, b, mu));
        return v;
      }, t, h);
      double largest = 0.0;
      const Vec lhs = tempered_operator(st, m, mu, &largest);
      for (std::size_t i = 0; i < kSpacePoints.size(); ++i) {
        const double dx =
            Stencil([&](double x) { return Vec{tempered_stable_density(x, t, b, mu)}; },
                    kSpacePoints[i], h)
                .derivative(1)[0];
        acc.add(lhs[i], dx, {largest});
      }
    }
    return acc.out;
  };
  return e;
}

EquationDef rmk41() {
  EquationDef e;
  e.info = {"rmk4.1", "DDE of the pmf under the tempered stable clock, index 1/m",
            {{{"m", 2.0}, {"mu", 1.0}, {"lambda", 1.0}}}, grid(0.5, 2.0), {0, 1, 2}};
  e.args = {"m"};
  e.validate = [](const Params& p) {
    integral(p, "m", 2, 4);
    positive(p, "mu");
    positive(p, "lambda");
  };
  e.form = [](const Params& p) {
    return tempered_operator_form(static_cast<int>(p.at("m"))) +
           " r_k = lambda (r_k - r_{k-1}), clock = tempered stable(1/m, mu)";
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params& p) { return radius(static_cast<int>(p.at("m"))); };
  e.eval = [](const EquationContext& c, double h) {
    const int m = static_cast<int>(c.param("m"));
    const double mu = c.param("mu"), l = c.param("lambda");
    const VecFn f = pmf_fn(SubordinatorSpec::tempered(1.0 / m, mu), l, c.kmax());
    Accumulator acc;
    for (double t : c.times) {
      Stencil s(f, t, h);
      const Vec r = s.derivative(0);
      double largest = 0.0;
      const Vec lhs = tempered_operator(s, m, mu, &largest);
      for (int k : c.ks) acc.add(lhs[k], l * (r[k] - at(r, k - 1)), {largest});
    }
    return acc.out;
  };
  return e;
}

EquationDef inv_tempered_pde() {
  EquationDef e;
  e.info = {"inv-tempered-pde", "PDE of the inverse tempered stable density, index 1/2",
            {{{"m", 2.0}, {"mu", 1.0}}}, grid(0.5, 2.0), {0}};
  e.args = {"m"};
  e.validate = [](const Params& p) {
    integral(p, "m", 2, 2);
    positive(p, "mu");
  };
  e.form = [](const Params&) {
    return std::string(
        "-2 sqrt(mu) dm/dx + d^2 m/dx^2 = dm/dt for t > 0 at x in {0.5, 1, 2}");
  };
  e.band = [](const Params&) { return fixed(1.7, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    const double mu = c.param("mu");
    auto m = [mu](double x, double t) { return inverse_tempered_density(x, t, 0.5, mu); };
    Accumulator acc;
    for (double t : c.times) {
      Stencil st([&](double tt) {
        Vec v;
        for (double x : kSpacePoints) v.push_back(m(x, tt));
        return v;
      }, t, h);
      const Vec dt = st.derivative(1);
      for (std::size_t i = 0; i < kSpacePoints.size(); ++i) {
        Stencil sx([&](double x) { return Vec{m(x, t)}; }, kSpacePoints[i], h);
        const double dx = sx.derivative(1)[0], dxx = sx.derivative(2)[0];
        const double drift = -2.0 * std::sqrt(mu) * dx;
        acc.add(drift + dxx, dt[i], {drift, dxx});
      }
    }
    return acc.out;
  };
  return e;
}

EquationDef prop42() {
  EquationDef e;
  e.info = {"prop4.2", "DDE of the pmf under the inverse tempered stable clock, index 1/2",
            {{{"m", 2.0}, {"mu", 1.0}, {"lambda", 1.0}}}, grid(0.5, 2.0), {0, 1, 2}};
  e.args = {"m"};
  e.validate = [](const Params& p) {
    integral(p, "m", 2, 2);
    positive(p, "mu");
    positive(p, "lambda");
  };
  e.form = [](const Params&) {
    return std::string(
        "r_k' = 2 sqrt(mu) (-lambda (1 - B)) r_k + lambda^2 (1 - B)^2 r_k + 2 sqrt(mu) p_k(0) "
        "m(0,t) - p_k(0) dm/dx(0,t) + p'_k(0) m(0,t) for t > 0, p_k(0) = delta_k0, "
        "p'_k(0) = -lambda, lambda, 0; m(0,t) the Levy tail, dm/dx(0,t) a one-sided difference");
  };
  e.band = [](const Params&) { return fixed(0.8, 2.3); };
  e.reach = [](const Params&) { return 1; };
  e.eval = [](const EquationContext& c, double h) {
    const double mu = c.param("mu"), l = c.param("lambda");
    const int kmax = c.kmax();
    const VecFn f =
        pmf_fn(SubordinatorSpec::inverse(SubordinatorSpec::tempered(0.5, mu)), l, kmax);
    const Vec delta = delta_seq(kmax);
    const Vec slope0 = backward_power(delta, l, 1);
    Accumulator acc;
    for (double t : c.times) {
      Stencil s(f, t, h);
      const Vec r = s.derivative(0), d1 = s.derivative(1);
      const Vec one = backward_power(r, l, 1), two = backward_power(r, l, 2);
      const double m0 = tempered_levy_tail(t, 0.5, mu);
      const double mx0 = forward_difference(
          [&](double x) { return inverse_tempered_density(x, t, 0.5, mu); }, 0.0, h);
      for (int k : c.ks) {
        const double boundary =
            2.0 * std::sqrt(mu) * delta[k] * m0 - delta[k] * mx0 + slope0[k] * m0;
        const double main = 2.0 * std::sqrt(mu) * one[k] + two[k];
        acc.add(d1[k], main + boundary, {main, boundary});
      }
    }
    return acc.out;
  };
  return e;
}

}  // namespace

const std::vector<EquationDef>& definitions() {
  static const std::vector<EquationDef> defs = {
      prop21(), prop22(),   ig_density_pde(), prop31(), deblassie(),        thm31(), cor31(),
      frac_dde(), et_pde(), prop32(),         prop41(), rmk41(), inv_tempered_pde(), prop42()};
  return defs;
}

const EquationDef& definition(const std::string& id) {
  for (const auto& d : definitions()) {
    if (d.info.id == id) return d;
  }
  throw InputError("unknown equation id '" + id + "'");
}

}  // namespace tcpp::verify::detail
