#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "logevo/multiplier.hpp"
#include "logevo/quadrature.hpp"

namespace logevo {

enum class DataFamily { Gaussian, BallIndicator, Custom };

std::string_view to_string(DataFamily family);
DataFamily parse_data_family(std::string_view name);

/// Radial, real initial velocity u1 on R^n.
///   Gaussian:      amplitude * exp(-|x|^2 / width^2)
///   BallIndicator: amplitude on |x| < width, 0 outside
///   Custom:        amplitude * f(|x|), f piecewise linear through (radii[i], values[i])
///                  and zero beyond the last radius (n = 1 and 3 only)
struct InitialDatum {
  DataFamily family = DataFamily::Gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  int dim = 1;
  std::vector<double> radii;
  std::vector<double> values;

  static InitialDatum gaussian(double amplitude, double width, int dim);
  static InitialDatum ball(double amplitude, double radius, int dim);
  static InitialDatum custom(std::vector<double> radii, std::vector<double> values, int dim, double amplitude = 1.0);
};

/// Throws DomainError for malformed data and UnsupportedError for family/dimension
/// pairs without a closed-form transform.
void validate(const InitialDatum& d);

/// u1_hat(xi) at |xi| = r with the convention u_hat(xi) = int exp(-i x.xi) u(x) dx.
double hat_u1(const InitialDatum& d, double r);

/// P1 = int u1 dx = u1_hat(0).
double mass(const InitialDatum& d);

struct DataNorms {
  double l2 = 0.0;   // ||u1||_{L^2}
  double l11 = 0.0;  // ||(1 + |x|) u1||_{L^1}
  double i0 = 0.0;   // l2 + l11
};

DataNorms data_norms(const InitialDatum& d);

/// Asymptotic profile P1 exp(-sigma t / 2) sin(t sqrt(sigma)) / sqrt(sigma), with
/// the value P1 t at sigma = 0. Throws DomainError for t <= 0.
std::complex<double> phi_at(double p1, const SymbolPoint& point, double t);

/// u1_hat = A - iB + P1 for real radial data: B = 0 and A = u1_hat - P1.
/// The bound is K r ||u1||_{1,1} with K = 1, from |1 - cos(x.xi)| <= |x||xi|;
/// k_needed is the smallest K that works at this r.
struct DecompositionRow {
  double r = 0.0;
  double abs_a = 0.0;
  double abs_b = 0.0;
  double bound = 0.0;
  double k_needed = 0.0;
};

std::vector<DecompositionRow> decomposition_bounds(const InitialDatum& d, std::span<const double> r_grid);

/// Frequency-side profile error int |u_hat(t) - phi(t)|^2 dxi for u0 = 0, split at |xi| = delta.
/// The physical-side L^2 norm squared is plancherel_factor times the frequency-side value.
struct ProfileErrorReport {
  double t = 0.0;
  double delta = 0.0;
  double low_freq_error_sq = 0.0;
  double high_freq_error_sq = 0.0;
  double i0 = 0.0;
  double p1 = 0.0;
  double plancherel_factor = 0.0;  // (2 pi)^{-n}
  std::size_t nodes_used = 0;
  bool converged = false;

  double total_error_sq() const { return low_freq_error_sq + high_freq_error_sq; }
  double total_error() const;
};

inline constexpr double kDefaultProfileDelta = 0.2;

/// Requires t >= 1 and delta > 0.
ProfileErrorReport profile_error(const InitialDatum& u1, double t, double delta = kDefaultProfileDelta,
                                 const Tolerances& tol = {});

/// Physical-side L^2 norm and energy of the solution at time t, computed by radial
/// quadrature of |u_hat|^2 and |u_t_hat|^2 + sigma |u_hat|^2 with Plancherel. u0 may
/// be null (zero initial displacement); both data must share the dimension.
struct FrequencyNorms {
  double t = 0.0;
  double l2_u = 0.0;
  double energy = 0.0;
  std::size_t nodes_used = 0;
  bool converged = false;
};

FrequencyNorms frequency_norms(const InitialDatum* u0, const InitialDatum& u1, double t, const Tolerances& tol = {});

/// omega_n int_lo^hi g(r) r^{n-1} dr where g may oscillate like sin(t sqrt(sigma)):
/// the interval is cut at half periods of that oscillation while its envelope
/// exp(-sigma t) is significant. hi may be +infinity (the tail beyond a fixed
/// radius is mapped onto a finite interval).
QuadratureResult radial_frequency_integral(const BatchIntegrand& g, int n, double t, double lo, double hi,
                                           const Tolerances& tol = {});

}  // namespace logevo
