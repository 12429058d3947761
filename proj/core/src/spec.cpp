#include "tcpp/spec.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "json_detail.hpp"
#include "tcpp/error.hpp"

namespace tcpp {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("invalid subordinator spec: " + what);
}

void check_beta(double beta) {
  require(std::isfinite(beta) && beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
}

double number(const json& j, const char* key) {
  require(j.contains(key), std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  require(v.is_number(), std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

namespace detail {

json spec_json(const SubordinatorSpec& spec) {
  return std::visit(
      Overloaded{
          [](const InverseGaussian& p) {
            return json{{"type", "ig"}, {"delta", p.delta}, {"gamma", p.gamma}};
          },
          [](const Stable& p) { return json{{"type", "stable"}, {"beta", p.beta}}; },
          [](const TemperedStable& p) {
            return json{{"type", "tempered"}, {"beta", p.beta}, {"mu", p.mu}};
          },
          [](const Composition& p) {
            json parts = json::array();
            for (const auto& s : p.parts) parts.push_back(spec_json(s));
            return json{{"type", "compose"}, {"parts", parts}};
          },
          [](const InverseOf& p) { return json{{"type", "inverse"}, {"base", spec_json(*p.base)}}; },
      },
      spec.variant());
}

SubordinatorSpec spec_from_json_value(const json& j, int level) {
  require(level <= SubordinatorSpec::kMaxDepth, "nesting deeper than 8");
  require(j.is_object(), "expected a JSON object");
  require(j.contains("type") && j.at("type").is_string(), "missing string field 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "ig") return SubordinatorSpec::ig(number(j, "delta"), number(j, "gamma"));
  if (type == "stable") return SubordinatorSpec::stable(number(j, "beta"));
  if (type == "tempered") return SubordinatorSpec::tempered(number(j, "beta"), number(j, "mu"));
  if (type == "compose") {
    require(j.contains("parts") && j.at("parts").is_array(), "compose needs an array 'parts'");
    std::vector<SubordinatorSpec> parts;
    for (const auto& p : j.at("parts")) parts.push_back(spec_from_json_value(p, level + 1));
    return SubordinatorSpec::compose(std::move(parts));
  }
  if (type == "inverse") {
    require(j.contains("base"), "inverse needs a 'base' spec");
    return SubordinatorSpec::inverse(spec_from_json_value(j.at("base"), level + 1));
  }
  throw InputError("invalid subordinator spec: unknown type '" + type + "'");
}

}  // namespace detail

SubordinatorSpec::SubordinatorSpec(Variant v) : v_(std::move(v)) {
  require(depth() <= kMaxDepth, "nesting deeper than 8");
}

SubordinatorSpec SubordinatorSpec::ig(double delta, double gamma) {
  require(std::isfinite(delta) && delta > 0.0, "delta must be positive");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be nonnegative");
  return SubordinatorSpec(InverseGaussian{delta, gamma});
}

SubordinatorSpec SubordinatorSpec::stable(double beta) {
  check_beta(beta);
  return SubordinatorSpec(Stable{beta});
}

SubordinatorSpec SubordinatorSpec::tempered(double beta, double mu) {
  check_beta(beta);
  require(std::isfinite(mu) && mu > 0.0, "mu must be positive");
  return SubordinatorSpec(TemperedStable{beta, mu});
}

SubordinatorSpec SubordinatorSpec::compose(std::vector<SubordinatorSpec> parts) {
  require(!parts.empty(), "composition needs at least one part");
  for (const auto& p : parts) require(!p.is<InverseOf>(), "composition parts cannot be inverses");
  return SubordinatorSpec(Composition{std::move(parts)});
}

SubordinatorSpec SubordinatorSpec::inverse(SubordinatorSpec base) {
  require(!base.is<InverseOf>(), "inverse must wrap a non-inverse spec");
  return SubordinatorSpec(InverseOf{std::make_shared<const SubordinatorSpec>(std::move(base))});
}

const SubordinatorSpec& SubordinatorSpec::base() const {
  const auto* inv = get_if<InverseOf>();
  if (!inv) throw CapabilityError("spec " + describe() + " is not an inverse");
  return *inv->base;
}

int SubordinatorSpec::depth() const {
  if (const auto* c = get_if<Composition>()) {
    int d = 0;
    for (const auto& p : c->parts) d = std::max(d, p.depth());
    return d + 1;
  }
  if (const auto* inv = get_if<InverseOf>()) return inv->base->depth() + 1;
  return 1;
}

double SubordinatorSpec::laplace_exponent(double s) const {
  return std::visit(
      Overloaded{
          [s](const InverseGaussian& p) {
            return p.delta * (std::sqrt(p.gamma * p.gamma + 2.0 * s) - p.gamma);
          },
          [s](const Stable& p) { return std::pow(s, p.beta); },
          [s](const TemperedStable& p) {
            return std::pow(s + p.mu, p.beta) - std::pow(p.mu, p.beta);
          },
          [s](const Composition& p) {
            // E exp(-s A(B(t))) = exp(-t phi_B(phi_A(s))).
            double v = s;
            for (const auto& part : p.parts) v = part.laplace_exponent(v);
            return v;
          },
          [this](const InverseOf&) -> double {
            throw CapabilityError("inverse process " + describe() + " has no Laplace exponent");
          },
      },
      v_);
}

std::string SubordinatorSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const InverseGaussian& p) { out << "ig(" << p.delta << "," << p.gamma << ")"; },
                 [&](const Stable& p) { out << "stable(" << p.beta << ")"; },
                 [&](const TemperedStable& p) {
                   out << "tempered(" << p.beta << "," << p.mu << ")";
                 },
                 [&](const Composition& p) {
                   out << "compose(";
                   for (std::size_t i = 0; i < p.parts.size(); ++i) {
                     out << (i ? "," : "") << p.parts[i].describe();
                   }
                   out << ")";
                 },
                 [&](const InverseOf& p) { out << "inverse(" << p.base->describe() << ")"; },
             },
             v_);
  return out.str();
}

bool SubordinatorSpec::operator==(const SubordinatorSpec& other) const {
  return to_json(*this) == to_json(other);
}

std::string to_json(const SubordinatorSpec& spec) { return detail::spec_json(spec).dump(); }

SubordinatorSpec spec_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid subordinator spec: ") + e.what());
  }
  return detail::spec_from_json_value(j, 1);
}

}  // namespace tcpp
