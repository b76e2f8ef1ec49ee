#include "logevo/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logevo/error.hpp"

namespace logevo {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Complex:
      return "Complex";
    case Regime::Degenerate:
      return "Degenerate";
    case Regime::Real:
      return "Real";
  }
  return "Unknown";
}

Regime classify(double sigma) {
  if (sigma == 0.0) return Regime::Degenerate;
  if (std::abs(sigma - 4.0) <= kDegeneracyTolerance * std::max(1.0, sigma)) return Regime::Degenerate;
  return sigma < 4.0 ? Regime::Complex : Regime::Real;
}

SymbolPoint symbol_at(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw DomainError("symbol_at: frequency magnitude must be finite and nonnegative, got " +
                      std::to_string(r));
  }
  SymbolPoint p;
  p.r = r;
  p.sigma = std::log1p(r * r);
  p.rho = damping_weight(p.sigma);
  p.regime = classify(p.sigma);
  return p;
}

SymbolPoint symbol_from_sigma(double sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw DomainError("symbol_from_sigma: sigma must be finite and nonnegative, got " +
                      std::to_string(sigma));
  }
  SymbolPoint p;
  p.r = std::sqrt(std::expm1(sigma));
  p.sigma = sigma;
  p.rho = damping_weight(sigma);
  p.regime = classify(sigma);
  return p;
}

RootPair roots_at(const SymbolPoint& p) {
  const double sigma = p.sigma;
  RootPair roots;
  roots.a = 0.5 * sigma;
  switch (p.regime) {
    case Regime::Degenerate:
      roots.lambda_plus = roots.lambda_minus = {-roots.a, 0.0};
      break;
    case Regime::Complex: {
      roots.b = 0.5 * std::sqrt(sigma * (4.0 - sigma));
      roots.lambda_plus = {-roots.a, roots.b};
      roots.lambda_minus = {-roots.a, -roots.b};
      break;
    }
    case Regime::Real: {
      const double half_gap = 0.5 * std::sqrt(sigma * (sigma - 4.0));
      const double fast = -(roots.a + half_gap);
      // Product of the roots is sigma; avoids cancellation in the slow root.
      roots.lambda_minus = {fast, 0.0};
      roots.lambda_plus = {sigma / fast, 0.0};
      break;
    }
  }
  return roots;
}

bool b_bounds_check(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw DomainError("b_bounds_check: the comparison is only established for 0 <= r <= 1, got " +
                      std::to_string(r));
  }
  const SymbolPoint p = symbol_at(r);
  const double two_b = 2.0 * roots_at(p).b;
  const double root_sigma = std::sqrt(p.sigma);
  return root_sigma <= two_b && two_b <= 2.0 * root_sigma;
}

}  // namespace logevo
