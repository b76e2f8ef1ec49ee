#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logevo/profile.hpp"
#include "logevo/quadrature.hpp"
#include "logevo/solver.hpp"

namespace logevo {

/// value ~ amplitude * t^exponent, fitted by least squares in (log t, log value).
struct RateFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  int n_points = 0;
};

/// Uses the samples with t_min <= t <= t_max. Throws DomainError for fewer than
/// three samples in the window, repeated t or nonpositive t or value.
RateFit fit_rate(std::span<const std::pair<double, double>> samples, double t_min = 0.0,
                 double t_max = std::numeric_limits<double>::infinity());

enum class Claim { P51, P61, P62, L21, L22 };

std::string_view to_string(Claim claim);
Claim parse_claim(std::string_view name);

struct CompensatedPoint {
  double t = 0.0;
  double raw = 0.0;
  double compensated = 0.0;
  bool converged = false;
};

/// pass = every point converged and lies in [lower_coef, upper_coef], and for the
/// claims checked by convergence (P51, L21, L22) the last-decade variation is
/// below 5%. Where the claim has no explicit upper constant, upper_coef is the
/// empirical maximum and `empirical_upper` is set.
struct SandwichReport {
  Claim claim = Claim::P61;
  double parameter = 0.0;  // n for P51, p for L21/L22
  double lower_coef = 0.0;
  double upper_coef = 0.0;
  bool empirical_upper = false;
  double last_decade_variation = 0.0;
  std::vector<CompensatedPoint> values;
  bool pass = false;
  std::string note;
};

/// P61: I_1(t)/t in [(64 + 49 pi^2)/(196 pi^2), 12].
/// P62: I_2(t)/log t in [pi/(4e), 6 pi].
/// P51: I_n(t) t^{(n-2)/2} >= omega_n A_n / 4 and convergent (n >= 3).
/// L21: I_p(t) t^{(p+1)/2} > 0 and convergent.   L22: J_p(t) (t - 1) 2^t > 0 and convergent.
SandwichReport verify_sandwich(Claim claim, std::span<const double> t_grid, double parameter = 0.0,
                               const Tolerances& tol = {});

/// Relative spread (max - min) / |mean| of the values with t >= t_last / 10.
double last_decade_variation(std::span<const CompensatedPoint> points);

/// Total variation sum |v_{i+1} - v_i| / |mean| over the same window.
double last_decade_total_variation(std::span<const CompensatedPoint> points);

/// A_n = int_0^inf exp(-y^2) y^{n-3} dy = Gamma((n-2)/2) / 2 for n >= 3.
double gaussian_moment_a(int n);

struct RiemannLebesgueReport {
  int n = 3;
  std::vector<std::pair<double, double>> values;  // (t, F_n(t))
  bool decreasing = false;   // max |F| over the second half < max over the first half
  bool below_half = false;   // |F_n(t_max)| < A_n / 2
  bool pass = false;
};

/// F_n(t) = int_0^inf exp(-y^2) y^{n-3} cos(2 sqrt(t) y) dy.
double riemann_lebesgue_integral(int n, double t, const Tolerances& tol = {});

RiemannLebesgueReport riemann_lebesgue_check(int n, std::span<const double> t_grid, const Tolerances& tol = {});

enum class Backend { Radial, Solver };

std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view name);

struct EnergySweep {
  std::vector<SolutionNorms> samples;
  RateFit energy_fit;
  RateFit l2_fit;
  bool energy_nonincreasing = false;  // energy(t2) <= energy(t1) (1 + 1e-10) for every t2 > t1
  bool converged = true;              // all radial quadratures converged (always true for the solver)
  double trusted_horizon = std::numeric_limits<double>::infinity();  // solver backend only
};

struct SweepOptions {
  Backend backend = Backend::Radial;
  GridSpec grid{1, 80.0, 4096};       // solver backend
  double fit_t_min = 0.0;             // fit window; samples outside are kept but not fitted
  double fit_t_max = std::numeric_limits<double>::infinity();
  Tolerances tol;
};

/// Energy and L^2 norm over t_grid for data (u0, u1) in dimension u1.dim; u0 may be null.
/// Samples with t = 0 are recorded but never fitted.
EnergySweep energy_rate_sweep(const InitialDatum* u0, const InitialDatum& u1, std::span<const double> t_grid,
                              const SweepOptions& options = {});

}  // namespace logevo
