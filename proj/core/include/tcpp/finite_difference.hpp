#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tcpp/time_series.hpp"

namespace tcpp {

/// Central difference of f^{(order)}(t), order 1..4, with step h.
/// Truncation error O(h^2); with richardson the h and 2h stencils are
/// combined to O(h^4).
double central_difference(const std::function<double(double)>& f, double t, double h, int order,
                          bool richardson = false);

/// Second-order one-sided first derivative at t from f(t), f(t+h), f(t+2h).
double forward_difference(const std::function<double(double)>& f, double t, double h);

/// Derivative of the given order at every point whose stencil lies inside
/// the series (the series must be uniform). Throws GridError when no point
/// has a full stencil.
TimeSeries fd_derivative(const TimeSeries& series, int order, bool richardson = false);

/// (1 - shift)^j applied across k, with values[k] = 0 for k < 0:
/// out[k] = sum_i (-1)^i C(j, i) values[k - i].
std::vector<double> shift_power(std::span<const double> values, int j);

}  // namespace tcpp
