#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the quadrature integrands, the radial
// profile integrals and the spectral solver. Every kernel exists as a scalar
// reference and, where the build and CPU allow it, as an AVX2/FMA variant;
// the variant is chosen once at runtime and can be pinned through the
// LOGEVO_SIMD environment variable ("scalar", "avx2" or "auto").
//
// All kernels are pure: outputs depend only on their arguments, spans must
// have equal lengths, and input and output spans may not alias unless noted.

namespace logevo::kernels {

struct SpectralSums {
  double u_sq = 0.0;         // sum |u_k|^2
  double ut_sq = 0.0;        // sum |ut_k|^2
  double sigma_u_sq = 0.0;   // sum sigma_k |u_k|^2
};

struct KernelTable {
  std::string_view name;

  /// sigma[i] = log(1 + r[i]^2). May alias (out == r).
  void (*log1p_square)(std::span<const double> r, std::span<double> sigma);

  /// out[i] = exp(-t * (log(1 + r^2) - shift)) * r^p, with 0^p = 0 for p > 0 and 1 for p == 0.
  void (*power_weight)(double t, double shift, double p, std::span<const double> r,
                       std::span<double> out);

  /// out[i] = exp(-sigma t / 2) sin(t sqrt(sigma)) / sqrt(sigma), continuous at sigma = 0 (value t).
  void (*damped_sinc)(double t, std::span<const double> sigma, std::span<double> out);

  /// Fundamental solution of u'' + sigma u' + sigma u = 0 with u(0) = 0, u'(0) = 1:
  /// s[i] = u(t), sp[i] = u'(t) for sigma = sigma[i].
  void (*mode_basis)(double t, std::span<const double> sigma, std::span<double> s,
                     std::span<double> sp);

  SpectralSums (*spectral_sums)(std::span<const double> sigma,
                                std::span<const std::complex<double>> u,
                                std::span<const std::complex<double>> ut);
};

const KernelTable& scalar_kernels();

/// AVX2/FMA variant, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();

/// The variant selected for this process.
const KernelTable& active();

/// Arguments of sin/cos beyond this magnitude are routed to the scalar path by
/// the vector variants (their argument reduction is exact only below it).
inline constexpr double kVectorTrigLimit = 1.0e5;

}  // namespace logevo::kernels
