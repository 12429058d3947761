#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

/// Residual and convergence-rate checks of the governing equations.
namespace tcpp::verify {

/// Evaluation grid on [t_min, t_max]. Finite-difference steps halve with
/// each refinement level; residuals are always taken at the same `points`
/// evaluation times.
struct GridSpec {
  double t_min = 0.5;
  double t_max = 2.0;
  int points = 8;
  int refinement_levels = 4;

  /// Throws GridError for t_min <= 0, t_max <= t_min, points < 8 or levels
  /// outside [2, 6].
  void validate() const;
  std::vector<double> evaluation_times() const;
};

using Params = std::map<std::string, double>;

struct LevelResidual {
  double h;
  double max_residual;
  double l2_residual;
};

struct OrderEstimate {
  double order;
  bool floor_limited;
};

struct ResidualReport {
  std::string equation_id;
  /// Registry id with its variant, e.g. "prop3.1(2)".
  std::string variant;
  /// The exact equation evaluated, in plain text.
  std::string form;
  Params params;
  GridSpec grid;
  std::vector<int> k_range;
  std::vector<LevelResidual> levels;
  /// Magnitude of the largest term of the equation over the grid.
  double scale = 0.0;
  double estimated_order = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  bool floor_limited = false;
  bool pass = false;
  /// Residuals of a competing form of the equation, when one is registered
  /// (prop3.2: exponent 2^n - 1).
  std::optional<std::string> alternative_form;
  std::vector<LevelResidual> alternative_levels;
};

inline constexpr double kFloor = 1e-9;

/// Least-squares slope of log residual against log step. Residual sequences
/// that sit at or below `floor` throughout are floor-limited; levels that
/// reach the floor after decreasing are dropped from the fit.
/// Throws DomainError for fewer than 3 levels.
OrderEstimate convergence_order(const std::vector<LevelResidual>& levels, double floor = kFloor);
double convergence_order(const ResidualReport& report);

struct EquationInfo {
  std::string id;
  std::string summary;
  /// Default parameters, one entry per variant listed in the registry.
  std::vector<Params> variants;
  GridSpec grid;
  std::vector<int> k_range;
};

/// The fourteen equation ids with their standard parameter sets.
const std::vector<EquationInfo>& registry();
/// Throws InputError for an unknown id.
const EquationInfo& equation_info(std::string_view id);

/// Accepts a plain id ("prop3.1") or an id with its variant argument
/// ("prop3.1(2)", "frac-dde(1/4)", "deblassie(1,3)"); the argument is
/// folded into the returned params. Throws InputError for unknown ids.
std::pair<std::string, Params> parse_equation_id(std::string_view text);

/// Builds the tables needed by the equation, applies its operators at
/// every refinement level and fills in order and pass/fail. Missing params
/// take registry defaults (the first variant). k_range empty means the
/// registry default.
ResidualReport check_equation(std::string_view equation_id, const Params& params,
                              const GridSpec& grid, const std::vector<int>& k_range = {});

/// Closed-form k = 0 solutions substituted into their equations, with the
/// derivatives taken analytically and the pmf values from quadrature.
struct ExactnessCheck {
  std::string id;
  std::string form;
  std::vector<double> level_residuals;
  double tolerance;
  bool pass;
};

ExactnessCheck exactness_prop21(double delta, double gamma, double lambda, const GridSpec& grid);
ExactnessCheck exactness_thm31(double lambda, const GridSpec& grid);
ExactnessCheck exactness_frac_dde(double lambda, const GridSpec& grid);

}  // namespace tcpp::verify
