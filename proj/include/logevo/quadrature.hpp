#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace logevo {

struct Tolerances {
  double rel = 1e-9;
  double abs = 1e-12;
  std::size_t node_budget = 2'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t nodes_used = 0;
  bool converged = false;
};

/// Fills fx[i] = f(x[i]). Called with up to a few thousand nodes at a time.
using BatchIntegrand = std::function<void(std::span<const double> x, std::span<double> fx)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature over [b0, b_last]. The
/// breakpoints (sorted, at least two) define the initial panels; the panel
/// with the largest error estimate is bisected until the total estimate meets
/// max(abs, rel |value|) or the node budget runs out (converged = false, the
/// best estimate is still returned).
QuadratureResult gauss_kronrod(const BatchIntegrand& f, std::span<const double> breakpoints,
                               const Tolerances& tol = {});

enum class IntegralKind { Ip, Jp, Middle, ScriptI, CosOverY };

std::string_view to_string(IntegralKind kind);
IntegralKind parse_integral_kind(std::string_view name);

struct IntegralSpec {
  IntegralKind kind = IntegralKind::Ip;
  double p_or_n = 0.0;  // p for Ip, Jp and Middle; n for ScriptI; unused for CosOverY
  double t = 1.0;
  double eta = 0.5;     // Middle only
  Tolerances tol;
  double tail_scale = 1.0;  // multiplies the tail cutoff R(t); used to test truncation
};

/// The integral is value * exp(-log_scale). Jp is scaled by 2^t and Middle by
/// (1 + eta^2)^t so that large t stays representable; tolerances refer to
/// the scaled integrand.
struct ScaledIntegral {
  QuadratureResult result;
  double log_scale = 0.0;
};

/// Throws DomainError when the spec is outside the integral's domain:
///   Ip: p > -1.  Jp: t > (p + 1) / 2.  Middle: 0 < eta <= 1.
///   ScriptI: integer n >= 1 and t > n / 2 (the integral diverges otherwise).
///   CosOverY: t > 0.
void validate(const IntegralSpec& spec);

ScaledIntegral integrate_scaled(const IntegralSpec& spec);

/// Unscaled value of the named integral (may underflow for Jp/Middle at large t).
QuadratureResult integrate(const IntegralSpec& spec);

/// Upper integration limit used for Jp and ScriptI, before tail_scale.
double tail_cutoff(const IntegralSpec& spec);

/// Surface area of the unit sphere in R^n.
double unit_sphere_area(int n);

struct RatioPoint {
  double t = 0.0;
  double ratio = 0.0;
  bool converged = false;
};

/// ratio = I_p(t) t^{(p+1)/2}. Evaluated in parallel over t.
std::vector<RatioPoint> ip_ratio_curve(double p, std::span<const double> t_grid, const Tolerances& tol = {});

/// ratio = J_p(t) (t - 1) 2^t.
std::vector<RatioPoint> jp_ratio_curve(double p, std::span<const double> t_grid, const Tolerances& tol = {});

/// Log-spaced grid of `points` values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace logevo
