#pragma once

#include <complex>

#include "logevo/multiplier.hpp"

namespace logevo {

/// s(t) and s'(t) for the mode equation u'' + sigma u' + sigma u = 0 with
/// u(0) = 0, u'(0) = 1. Every other solution is a combination of this pair:
///   u  = u1 s + u0 (s' + sigma s),   u' = u1 s' - u0 sigma s.
struct FundamentalPair {
  double s = 0.0;
  double sp = 0.0;
};

/// Closed-form fundamental pair. Uses the trigonometric form in the complex
/// regime, the exponential form for well-separated real roots and a series in
/// (half root gap * t)^2 when the roots (nearly) coincide, which covers sigma = 0
/// and sigma = 4 without a special case.
FundamentalPair fundamental_solution(double sigma, double t);

/// Below this value of |sigma (sigma - 4) / 4| t^2 the series branch is used.
inline constexpr double kRootGapSeriesThreshold = 1e-4;

/// Exact evolution of one Fourier mode from (u0_hat, u1_hat).
struct ModeClosedForm {
  SymbolPoint point;
  RootPair roots;
  std::complex<double> u0_hat;
  std::complex<double> u1_hat;

  static ModeClosedForm make(const SymbolPoint& point, std::complex<double> u0_hat,
                             std::complex<double> u1_hat);
};

struct ModeState {
  std::complex<double> value;
  std::complex<double> velocity;
};

/// Throws DomainError for t < 0.
ModeState mode_evaluate(const ModeClosedForm& mode, double t);

/// Classical RK4 integration of the first-order system for (u, u_t). Serves as
/// an independent cross-check of mode_evaluate. The step is shrunk so that an
/// integer number of steps lands exactly on t. Throws DomainError if dt <= 0 or t < 0.
std::complex<double> ode_oracle(const SymbolPoint& point, std::complex<double> u0_hat,
                                std::complex<double> u1_hat, double t, double dt);

/// Per-frequency energy functionals of the multiplier method.
struct EnergyDensity {
  double e0 = 0.0;  // |u_t|^2/2 + sigma |u|^2/2
  double e = 0.0;   // e0 + rho Re(u_t conj(u)) + rho sigma |u|^2 / 2
  double f = 0.0;   // sigma |u_t|^2 + rho sigma |u|^2
  double rr = 0.0;  // rho |u_t|^2
};

EnergyDensity energy_density(const SymbolPoint& point, const ModeState& state);
EnergyDensity energy_density(const ModeClosedForm& mode, double t);

/// |dE0/dt + sigma |u_t|^2| with dE0/dt by a centered difference of step h.
/// Requires 0 < h <= t.
double check_energy_identity(const ModeClosedForm& mode, double t, double h);

/// Pointwise decay bounds with factor 6:
///   |u_t|^2 + sigma |u|^2 <= 6 (|u1|^2 + sigma |u0|^2) exp(-rho t / 2)
///   |u|^2 <= 6 (|u1|^2 / sigma + |u0|^2) exp(-rho t / 2)      (sigma > 0 only)
struct PointwiseCheck {
  double lhs6 = 0.0;
  double rhs6 = 0.0;
  double lhs7 = 0.0;
  double rhs7 = 0.0;
  bool second_skipped = false;  // sigma = 0: the second bound is not defined
  bool pass = false;
};

PointwiseCheck check_pointwise_estimates(const ModeClosedForm& mode, double t);

/// Default centered-difference step for derivative checks at time t.
inline double derivative_step(double t) { return 1e-4 * (t > 1.0 ? t : 1.0); }

}  // namespace logevo
