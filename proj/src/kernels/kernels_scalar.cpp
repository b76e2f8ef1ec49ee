#include <cmath>

#include "kernels_internal.hpp"
#include "logevo/modes.hpp"

namespace logevo::kernels {

namespace scalar {

double power_weight_one(double t, double shift, double p, double r) {
  const double exponent = -t * (std::log1p(r * r) - shift);
  if (p == 0.0) return std::exp(exponent);
  if (r == 0.0) return p > 0.0 ? 0.0 : HUGE_VAL;
  return std::exp(exponent + p * std::log(r));
}

double damped_sinc_one(double t, double sigma) {
  const double root = std::sqrt(sigma);
  const double x = t * root;
  const double decay = std::exp(-0.5 * sigma * t);
  if (x < kSincSeriesLimit) {
    const double x2 = x * x;
    return decay * t * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0));
  }
  return decay * std::sin(x) / root;
}

void log1p_square(std::span<const double> r, std::span<double> sigma) {
  for (std::size_t i = 0; i < r.size(); ++i) sigma[i] = std::log1p(r[i] * r[i]);
}

void power_weight(double t, double shift, double p, std::span<const double> r, std::span<double> out) {
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = power_weight_one(t, shift, p, r[i]);
}

void damped_sinc(double t, std::span<const double> sigma, std::span<double> out) {
  for (std::size_t i = 0; i < sigma.size(); ++i) out[i] = damped_sinc_one(t, sigma[i]);
}

void mode_basis(double t, std::span<const double> sigma, std::span<double> s, std::span<double> sp) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const FundamentalPair f = fundamental_solution(sigma[i], t);
    s[i] = f.s;
    sp[i] = f.sp;
  }
}

SpectralSums spectral_sums(std::span<const double> sigma, std::span<const std::complex<double>> u,
                           std::span<const std::complex<double>> ut) {
  SpectralSums sums;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double u_sq = std::norm(u[i]);
    sums.u_sq += u_sq;
    sums.ut_sq += std::norm(ut[i]);
    sums.sigma_u_sq += sigma[i] * u_sq;
  }
  return sums;
}

}  // namespace scalar

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar",          scalar::log1p_square, scalar::power_weight,
                                 scalar::damped_sinc, scalar::mode_basis,   scalar::spectral_sums};
  return table;
}

}  // namespace logevo::kernels
