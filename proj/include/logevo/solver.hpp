#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "logevo/profile.hpp"

namespace logevo {

/// Periodic box [-L, L)^n with N points per axis. Frequencies are
/// xi = pi k / L for k in [-N/2, N/2); the k = -N/2 (Nyquist) mode is kept and
/// evolved with |xi| = pi N / (2L), which preserves the conjugate symmetry of
/// real data because that mode is its own partner.
struct GridSpec {
  int dim = 1;
  double half_length = 1.0;
  std::size_t points_per_dim = 2;

  std::size_t total_points() const;
  double spacing() const { return 2.0 * half_length / static_cast<double>(points_per_dim); }
  double frequency_step() const;
  bool operator==(const GridSpec&) const = default;
};

/// Throws DomainError unless dim is 1-3, L > 0 and N is a power of two >= 2
/// (N <= 256 for dim 3, N <= 8192 for dim 2).
void validate(const GridSpec& g);

enum class Space { Physical, Spectral };

/// Row-major n-dimensional array. Physical fields are real and use `physical`;
/// spectral fields use `spectral`, indexed by FFT order (k = m for m < N/2,
/// m - N otherwise) and scaled to approximate the continuum transform
/// u_hat(xi) = int exp(-i x.xi) u(x) dx.
struct Field {
  GridSpec grid;
  Space space = Space::Physical;
  std::vector<double> physical;
  std::vector<std::complex<double>> spectral;

  static Field zeros(const GridSpec& g, Space space = Space::Physical);
};

/// Samples u(x) = datum at the grid points x_j = -L + j dx.
Field sample(const GridSpec& g, const InitialDatum& d);

Field to_spectral(const Field& f);
Field to_physical(const Field& f);

/// max |u_hat(k) - conj(u_hat(-k))| / max |u_hat|; 0 for exactly real data.
double conjugate_symmetry_error(const Field& spectral);

/// sigma_k = log(1 + |xi_k|^2) in the spectral array order.
std::vector<double> grid_symbol(const GridSpec& g);

struct SolutionNorms {
  double t = 0.0;
  double l2_u = 0.0;
  double energy = 0.0;
  double linf_u = 0.0;
};

/// Evolves fixed initial data exactly per mode; transforms are done once at
/// construction. Safe to query from several threads.
class SpectralEvolver {
 public:
  SpectralEvolver(const Field& u0, const Field& u1);

  const GridSpec& grid() const { return grid_; }

  /// (u_hat(t), u_t_hat(t)).
  std::pair<Field, Field> spectral_at(double t) const;

  /// (u(t), u_t(t)) in physical space.
  std::pair<Field, Field> evolve(double t) const;

  /// L^2 norm and energy from Parseval; linf_u needs an inverse transform and is
  /// only filled when requested.
  SolutionNorms norms_at(double t, bool with_linf = false) const;

  /// || u(t) - profile ||_{L^2} with the profile p1 exp(-sigma t/2) sin(t sqrt(sigma))/sqrt(sigma)
  /// evaluated on the grid frequencies.
  double profile_deviation(double t, double p1) const;

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> u0_hat_;
  std::vector<std::complex<double>> u1_hat_;
  std::vector<double> sigma_;
};

/// One-shot form of SpectralEvolver::evolve. Throws DomainError on grid mismatch or t < 0.
std::pair<Field, Field> evolve(const GridSpec& g, const Field& u0, const Field& u1, double t);

/// Norms of a physical (u, u_t) pair.
SolutionNorms norms(const Field& u, const Field& ut);

/// Largest t for which data supported in |x| <= support_radius stays inside
/// [-L/2, L/2]^n when moving at unit speed (the largest group velocity of the
/// mode equation); 0 if the data already extend beyond L/2.
double trusted_horizon(const GridSpec& g, double support_radius);

/// Radius outside which the datum is below 1e-8 of its peak (Gaussian) or zero.
double support_radius(const InitialDatum& d);

}  // namespace logevo
