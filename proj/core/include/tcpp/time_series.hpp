#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tcpp {

/// Samples u(t_i) of a function on a strictly increasing set of positive
/// times. Construction validates the invariants and throws DomainError.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> times, std::vector<double> values);

  /// Uniform grid t_i = start + i * step, i = 0..count-1, filled with `values`.
  static TimeSeries uniform(double start, double step, std::vector<double> values);

  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  double value(std::size_t i) const { return values_[i]; }

  /// Step of a uniform grid; throws GridError if the spacing is not uniform
  /// to relative precision 1e-9.
  double uniform_step() const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace tcpp
