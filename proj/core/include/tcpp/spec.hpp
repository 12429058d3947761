#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tcpp {

class SubordinatorSpec;

struct InverseGaussian {
  double delta;
  double gamma;
};

struct Stable {
  double beta;
};

struct TemperedStable {
  double beta;
  double mu;
};

/// parts[0](parts[1](...parts[n-1](t))): the first part is the outermost clock.
struct Composition {
  std::vector<SubordinatorSpec> parts;
};

/// First-passage process E(t) = inf{s : base(s) > t}.
struct InverseOf {
  std::shared_ptr<const SubordinatorSpec> base;
};

/// Immutable, validated description of a random clock.
class SubordinatorSpec {
 public:
  using Variant = std::variant<InverseGaussian, Stable, TemperedStable, Composition, InverseOf>;

  static constexpr int kMaxDepth = 8;

  static SubordinatorSpec ig(double delta, double gamma);
  static SubordinatorSpec stable(double beta);
  static SubordinatorSpec tempered(double beta, double mu);
  static SubordinatorSpec compose(std::vector<SubordinatorSpec> parts);
  static SubordinatorSpec inverse(SubordinatorSpec base);

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v_);
  }
  /// Base of an InverseOf spec; throws CapabilityError otherwise.
  const SubordinatorSpec& base() const;

  int depth() const;

  /// Laplace exponent phi(s) with E exp(-s X(t)) = exp(-t phi(s)).
  /// Throws CapabilityError for inverse specs.
  double laplace_exponent(double s) const;

  /// Short human-readable form, e.g. "inverse(compose(stable(0.5),stable(0.5)))".
  std::string describe() const;

  bool operator==(const SubordinatorSpec& other) const;

 private:
  explicit SubordinatorSpec(Variant v);
  Variant v_;
};

/// Canonical JSON, e.g. {"type":"tempered","beta":0.5,"mu":1}.
std::string to_json(const SubordinatorSpec& spec);

/// Parses and validates the canonical JSON; throws InputError.
SubordinatorSpec spec_from_json(std::string_view text);

}  // namespace tcpp
