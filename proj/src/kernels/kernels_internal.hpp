#pragma once

#include "logevo/kernels.hpp"

namespace logevo::kernels {

// Below this argument sin(x)/x is replaced by 1 - x^2/6 + x^4/120.
inline constexpr double kSincSeriesLimit = 1e-4;

namespace scalar {

// Single-element forms of the scalar kernels; the vector variants use them
// for lanes they do not handle.
double power_weight_one(double t, double shift, double p, double r);
double damped_sinc_one(double t, double sigma);

void log1p_square(std::span<const double> r, std::span<double> sigma);
void power_weight(double t, double shift, double p, std::span<const double> r, std::span<double> out);
void damped_sinc(double t, std::span<const double> sigma, std::span<double> out);
void mode_basis(double t, std::span<const double> sigma, std::span<double> s, std::span<double> sp);
SpectralSums spectral_sums(std::span<const double> sigma, std::span<const std::complex<double>> u,
                           std::span<const std::complex<double>> ut);

}  // namespace scalar

#if defined(LOGEVO_HAVE_AVX2)
// Defined in kernels_avx2.cpp (compiled with -mavx2 -mfma).
const KernelTable& avx2_table();
#endif

}  // namespace logevo::kernels
