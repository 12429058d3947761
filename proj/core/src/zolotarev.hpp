#pragma once

#include <cmath>

namespace tcpp::detail {

// log a(phi) for D(1) = (a(U) / E)^{(1 - beta) / beta}, U ~ U(0, pi), E ~ Exp(1).
inline double log_zolotarev(double phi, double beta) {
  const double b1 = 1.0 - beta;
  return beta / b1 * std::log(std::sin(beta * phi)) + std::log(std::sin(b1 * phi)) -
         std::log(std::sin(phi)) / b1;
}

// log a(pi - psi), accurate for small psi where sin(phi) loses digits.
inline double log_zolotarev_reflected(double psi, double beta) {
  const double b1 = 1.0 - beta;
  constexpr double pi = 3.14159265358979323846;
  return beta / b1 * std::log(std::sin(b1 * pi + beta * psi)) +
         std::log(std::sin(b1 * (pi - psi))) - std::log(std::sin(psi)) / b1;
}

}  // namespace tcpp::detail
