#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tcpp/verify.hpp"

namespace tcpp::verify::detail {

struct Band {
  double lo;
  double hi;
};

struct LevelOutput {
  std::vector<double> residuals;
  double scale = 0.0;
  std::vector<double> alternative;
};

struct EquationContext {
  Params params;
  GridSpec grid;
  std::vector<int> ks;
  std::vector<double> times;

  double param(const std::string& name) const;
  int kmax() const;
};

struct EquationDef {
  EquationInfo info;
  /// Names bound to the positional arguments of "id(a,b)".
  std::vector<std::string> args;
  /// Caputo equations step an L1 grid from the origin instead of a
  /// finite-difference stencil around each evaluation time.
  bool caputo = false;
  std::function<void(const Params&)> validate;
  std::function<std::string(const Params&)> form;
  std::function<std::optional<std::string>(const Params&)> alternative_form;
  std::function<Band(const Params&)> band;
  /// Largest multiple of h by which a time stencil reaches from its center.
  std::function<int(const Params&)> reach;
  std::function<LevelOutput(const EquationContext&, double h)> eval;
};

const std::vector<EquationDef>& definitions();
const EquationDef& definition(const std::string& id);

}  // namespace tcpp::verify::detail
