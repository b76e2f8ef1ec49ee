#pragma once

#include <complex>
#include <string_view>

namespace logevo {

/// Root structure of the characteristic polynomial lambda^2 + sigma*lambda + sigma.
enum class Regime { Complex, Degenerate, Real };

std::string_view to_string(Regime regime);

/// Relative window around sigma = 4 inside which the double root is assumed.
inline constexpr double kDegeneracyTolerance = 1e-12;

/// r = sqrt(e - 1): the radius where the damping weight switches branches.
inline constexpr double kRhoBranchRadius = 1.3108324944320862;

/// r = sqrt(e^4 - 1): the radius of the double characteristic root.
inline constexpr double kDegenerateRadius = 7.321075742890811;

/// One radial frequency |xi| together with everything the per-mode dynamics
/// need: the symbol sigma = log(1 + r^2), the energy-method weight rho and
/// the regime of the characteristic roots.
struct SymbolPoint {
  double r = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  Regime regime = Regime::Degenerate;
};

struct RootPair {
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  double a = 0.0;  // -Re(lambda), equal to sigma / 2
  double b = 0.0;  // Im(lambda_plus) in the complex regime, 0 otherwise
};

/// Symbol of log(I - Delta) at |xi| = r. Throws DomainError for negative or
/// non-finite r.
SymbolPoint symbol_at(double r);

/// Same point addressed through its symbol value; sigma is stored verbatim so
/// that exact values such as sigma = 4 keep their classification.
SymbolPoint symbol_from_sigma(double sigma);

Regime classify(double sigma);

/// rho = sigma/2 below |xi| = sqrt(e-1) and 1/2 above; both branches meet at sigma = 1.
inline double damping_weight(double sigma) { return 0.5 * (sigma < 1.0 ? sigma : 1.0); }

RootPair roots_at(const SymbolPoint& p);

/// Two-sided comparison sqrt(sigma) <= 2 b(r) <= 2 sqrt(sigma), valid on 0 <= r <= 1.
bool b_bounds_check(double r);

}  // namespace logevo
