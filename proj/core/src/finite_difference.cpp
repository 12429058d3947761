#include "tcpp/finite_difference.hpp"

#include <array>
#include <cmath>
#include <string>

#include "tcpp/error.hpp"

namespace tcpp {
namespace {

struct Stencil {
  int radius;
  std::array<double, 5> weights;  // offsets -2..2
  double denom;                   // multiplied by h^order
};

const Stencil& stencil(int order) {
  static const std::array<Stencil, 4> table = {{
      {1, {0.0, -0.5, 0.0, 0.5, 0.0}, 1.0},
      {1, {0.0, 1.0, -2.0, 1.0, 0.0}, 1.0},
      {2, {-0.5, 1.0, 0.0, -1.0, 0.5}, 1.0},
      {2, {1.0, -4.0, 6.0, -4.0, 1.0}, 1.0},
  }};
  if (order < 1 || order > 4) {
    throw DomainError("finite differences support orders 1..4, got " + std::to_string(order));
  }
  return table[order - 1];
}

template <class Sample>
double apply(const Stencil& s, int order, double h, Sample&& sample) {
  double acc = 0.0;
  for (int i = -2; i <= 2; ++i) {
    const double w = s.weights[i + 2];
    if (w != 0.0) acc += w * sample(i);
  }
  return acc / (s.denom * std::pow(h, order));
}

}  // namespace

double central_difference(const std::function<double(double)>& f, double t, double h, int order,
                          bool richardson) {
  if (!(h > 0.0)) throw DomainError("central_difference: step must be positive");
  const Stencil& s = stencil(order);
  const double d1 = apply(s, order, h, [&](int i) { return f(t + i * h); });
  if (!richardson) return d1;
  const double d2 = apply(s, order, 2.0 * h, [&](int i) { return f(t + 2.0 * i * h); });
  return (4.0 * d1 - d2) / 3.0;
}

double forward_difference(const std::function<double(double)>& f, double t, double h) {
  if (!(h > 0.0)) throw DomainError("forward_difference: step must be positive");
  return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
}

TimeSeries fd_derivative(const TimeSeries& series, int order, bool richardson) {
  const Stencil& s = stencil(order);
  const double h = series.uniform_step();
  const int reach = s.radius * (richardson ? 2 : 1);
  const int n = static_cast<int>(series.size());
  if (n < 2 * reach + 1) {
    throw GridError("fd_derivative: " + std::to_string(n) + " points are too few for order " +
                    std::to_string(order));
  }
  std::vector<double> times;
  std::vector<double> values;
  for (int i = reach; i < n - reach; ++i) {
    auto at = [&](int scale) {
      return apply(s, order, scale * h, [&](int j) { return series.value(i + scale * j); });
    };
    const double d1 = at(1);
    times.push_back(series.time(i));
    values.push_back(richardson ? (4.0 * d1 - at(2)) / 3.0 : d1);
  }
  if (times.size() < 2) {
    throw GridError("fd_derivative: the interior of the grid is too small");
  }
  return TimeSeries(std::move(times), std::move(values));
}

std::vector<double> shift_power(std::span<const double> values, int j) {
  if (j < 0) throw DomainError("shift_power: power must be nonnegative");
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    double binom = 1.0;
    for (int i = 0; i <= j && static_cast<std::size_t>(i) <= k; ++i) {
      out[k] += (i % 2 == 0 ? 1.0 : -1.0) * binom * values[k - i];
      binom = binom * (j - i) / (i + 1);
    }
  }
  return out;
}

}  // namespace tcpp
