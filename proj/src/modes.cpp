#include "logevo/modes.hpp"

#include <cmath>
#include <string>

#include "logevo/error.hpp"

namespace logevo {

FundamentalPair fundamental_solution(double sigma, double t) {
  const double a = 0.5 * sigma;
  // Half the gap between the roots, squared: ((lambda+ - lambda-) / 2)^2.
  const double gap_sq = classify(sigma) == Regime::Degenerate ? 0.0 : 0.25 * sigma * (sigma - 4.0);
  const double x2 = gap_sq * t * t;

  if (std::abs(x2) < kRootGapSeriesThreshold) {
    // sinh(dt)/d and cosh(dt) as series in (dt)^2; valid on both sides of the double root.
    const double sinhc = t * (1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0)));
    const double cosh_ = 1.0 + x2 / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0));
    const double decay = std::exp(-a * t);
    return {decay * sinhc, decay * (cosh_ - a * sinhc)};
  }

  if (gap_sq < 0.0) {
    const double b = std::sqrt(-gap_sq);
    const double decay = std::exp(-a * t);
    const double sinc = std::sin(b * t) / b;
    return {decay * sinc, decay * (std::cos(b * t) - a * sinc)};
  }

  const double half_gap = std::sqrt(gap_sq);
  if (half_gap * t < 0.5) {
    const double decay = std::exp(-a * t);
    const double sinhc = std::sinh(half_gap * t) / half_gap;
    return {decay * sinhc, decay * (std::cosh(half_gap * t) - a * sinhc)};
  }
  const double fast = -(a + half_gap);
  const double slow = sigma / fast;
  const double e_slow = std::exp(slow * t);
  const double e_fast = std::exp(fast * t);
  const double inv_gap = 0.5 / half_gap;
  return {(e_slow - e_fast) * inv_gap, (slow * e_slow - fast * e_fast) * inv_gap};
}

ModeClosedForm ModeClosedForm::make(const SymbolPoint& point, std::complex<double> u0_hat,
                                    std::complex<double> u1_hat) {
  return {point, roots_at(point), u0_hat, u1_hat};
}

ModeState mode_evaluate(const ModeClosedForm& mode, double t) {
  if (!(t >= 0.0)) throw DomainError("mode_evaluate: t must be nonnegative, got " + std::to_string(t));
  const double sigma = mode.point.sigma;
  const FundamentalPair f = fundamental_solution(sigma, t);
  return {mode.u1_hat * f.s + mode.u0_hat * (f.sp + sigma * f.s),
          mode.u1_hat * f.sp - mode.u0_hat * (sigma * f.s)};
}

std::complex<double> ode_oracle(const SymbolPoint& point, std::complex<double> u0_hat,
                                std::complex<double> u1_hat, double t, double dt) {
  if (!(dt > 0.0)) throw DomainError("ode_oracle: dt must be positive, got " + std::to_string(dt));
  if (!(t >= 0.0)) throw DomainError("ode_oracle: t must be nonnegative, got " + std::to_string(t));
  if (t == 0.0) return u0_hat;

  const double sigma = point.sigma;
  const auto steps = static_cast<long>(std::ceil(t / dt - 1e-12));
  const double h = t / static_cast<double>(steps);
  auto accel = [sigma](std::complex<double> u, std::complex<double> v) { return -sigma * (u + v); };

  std::complex<double> u = u0_hat;
  std::complex<double> v = u1_hat;
  for (long i = 0; i < steps; ++i) {
    const auto k1u = v;
    const auto k1v = accel(u, v);
    const auto k2u = v + 0.5 * h * k1v;
    const auto k2v = accel(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const auto k3u = v + 0.5 * h * k2v;
    const auto k3v = accel(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const auto k4u = v + h * k3v;
    const auto k4v = accel(u + h * k3u, v + h * k3v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return u;
}

EnergyDensity energy_density(const SymbolPoint& point, const ModeState& state) {
  const double sigma = point.sigma;
  const double rho = point.rho;
  const double u_sq = std::norm(state.value);
  const double ut_sq = std::norm(state.velocity);
  const double cross = std::real(state.velocity * std::conj(state.value));
  EnergyDensity d;
  d.e0 = 0.5 * ut_sq + 0.5 * sigma * u_sq;
  d.e = d.e0 + rho * cross + 0.5 * rho * sigma * u_sq;
  d.f = sigma * ut_sq + rho * sigma * u_sq;
  d.rr = rho * ut_sq;
  return d;
}

EnergyDensity energy_density(const ModeClosedForm& mode, double t) {
  return energy_density(mode.point, mode_evaluate(mode, t));
}

double check_energy_identity(const ModeClosedForm& mode, double t, double h) {
  if (!(h > 0.0) || !(h <= t)) {
    throw DomainError("check_energy_identity: need 0 < h <= t, got t=" + std::to_string(t) +
                      " h=" + std::to_string(h));
  }
  const double e_plus = energy_density(mode, t + h).e0;
  const double e_minus = energy_density(mode, t - h).e0;
  const double ut_sq = std::norm(mode_evaluate(mode, t).velocity);
  return std::abs((e_plus - e_minus) / (2.0 * h) + mode.point.sigma * ut_sq);
}

PointwiseCheck check_pointwise_estimates(const ModeClosedForm& mode, double t) {
  const ModeState state = mode_evaluate(mode, t);
  const double sigma = mode.point.sigma;
  const double decay = std::exp(-0.5 * mode.point.rho * t);
  const double u0_sq = std::norm(mode.u0_hat);
  const double u1_sq = std::norm(mode.u1_hat);

  PointwiseCheck c;
  c.lhs6 = std::norm(state.velocity) + sigma * std::norm(state.value);
  c.rhs6 = 6.0 * (u1_sq + sigma * u0_sq) * decay;
  c.lhs7 = std::norm(state.value);
  if (sigma > 0.0) {
    c.rhs7 = 6.0 * (u1_sq / sigma + u0_sq) * decay;
  } else {
    c.second_skipped = true;
  }
  c.pass = c.lhs6 <= c.rhs6 && (c.second_skipped || c.lhs7 <= c.rhs7);
  return c;
}

}  // namespace logevo
