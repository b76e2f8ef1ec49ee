#include <cfloat>
#include <cmath>

#include "kernels_internal.hpp"
#include "logevo/modes.hpp"
#include "vecmath_avx2.hpp"

namespace logevo::kernels {

namespace {

using avx2::splat;
using avx2::vd;

constexpr std::size_t kLanes = 4;

// 1 + r^2 must stay finite and normal for the vector log.
inline vd log1p_square_ok(vd r2) {
  return _mm256_cmp_pd(r2, splat(1e300), _CMP_LE_OQ);
}

void log1p_square(std::span<const double> r, std::span<double> sigma) {
  const std::size_t n = r.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const vd x = _mm256_loadu_pd(&r[i]);
    const vd x2 = _mm256_mul_pd(x, x);
    if (!avx2::all_lanes(log1p_square_ok(x2))) {
      scalar::log1p_square(r.subspan(i, kLanes), sigma.subspan(i, kLanes));
      continue;
    }
    _mm256_storeu_pd(&sigma[i], avx2::log1p(x2));
  }
  scalar::log1p_square(r.subspan(i), sigma.subspan(i));
}

void power_weight(double t, double shift, double p, std::span<const double> r, std::span<double> out) {
  const std::size_t n = r.size();
  const vd vt = splat(t);
  const vd vshift = splat(shift);
  const vd vp = splat(p);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const vd x = _mm256_loadu_pd(&r[i]);
    const vd x2 = _mm256_mul_pd(x, x);
    vd ok = log1p_square_ok(x2);
    if (p != 0.0) ok = _mm256_and_pd(ok, _mm256_cmp_pd(x, splat(DBL_MIN), _CMP_GE_OQ));
    if (!avx2::all_lanes(ok)) {
      for (std::size_t j = i; j < i + kLanes; ++j) out[j] = scalar::power_weight_one(t, shift, p, r[j]);
      continue;
    }
    vd e = _mm256_mul_pd(vt, _mm256_sub_pd(vshift, avx2::log1p(x2)));
    if (p != 0.0) e = _mm256_fmadd_pd(vp, avx2::log(x), e);
    _mm256_storeu_pd(&out[i], avx2::exp(e));
  }
  for (; i < n; ++i) out[i] = scalar::power_weight_one(t, shift, p, r[i]);
}

void damped_sinc(double t, std::span<const double> sigma, std::span<double> out) {
  const std::size_t n = sigma.size();
  const vd vt = splat(t);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const vd s = _mm256_loadu_pd(&sigma[i]);
    const vd root = _mm256_sqrt_pd(s);
    const vd x = _mm256_mul_pd(vt, root);
    const vd ok = _mm256_and_pd(_mm256_cmp_pd(x, splat(kSincSeriesLimit), _CMP_GE_OQ),
                                _mm256_cmp_pd(x, splat(kVectorTrigLimit), _CMP_LE_OQ));
    if (!avx2::all_lanes(ok)) {
      for (std::size_t j = i; j < i + kLanes; ++j) out[j] = scalar::damped_sinc_one(t, sigma[j]);
      continue;
    }
    vd sn, cs;
    avx2::sincos(x, sn, cs);
    const vd decay = avx2::exp(_mm256_mul_pd(splat(-0.5), _mm256_mul_pd(s, vt)));
    _mm256_storeu_pd(&out[i], _mm256_mul_pd(decay, _mm256_div_pd(sn, root)));
  }
  for (; i < n; ++i) out[i] = scalar::damped_sinc_one(t, sigma[i]);
}

// Vector lanes cover only the oscillatory branch of fundamental_solution;
// chunks touching the series, degenerate or real-root branches go scalar.
void mode_basis(double t, std::span<const double> sigma, std::span<double> s, std::span<double> sp) {
  const std::size_t n = sigma.size();
  const vd vt = splat(t);
  const vd t2 = splat(t * t);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const vd sg = _mm256_loadu_pd(&sigma[i]);
    const vd a = _mm256_mul_pd(splat(0.5), sg);
    const vd neg_gap_sq = _mm256_mul_pd(_mm256_mul_pd(splat(0.25), sg), _mm256_sub_pd(splat(4.0), sg));
    const vd b = _mm256_sqrt_pd(neg_gap_sq);
    const vd bt = _mm256_mul_pd(b, vt);
    vd ok = _mm256_cmp_pd(_mm256_sub_pd(splat(4.0), sg), splat(4e-12), _CMP_GT_OQ);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(sg, _mm256_setzero_pd(), _CMP_GT_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(_mm256_mul_pd(neg_gap_sq, t2), splat(kRootGapSeriesThreshold), _CMP_GE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(bt, splat(kVectorTrigLimit), _CMP_LE_OQ));
    if (!avx2::all_lanes(ok)) {
      scalar::mode_basis(t, sigma.subspan(i, kLanes), s.subspan(i, kLanes), sp.subspan(i, kLanes));
      continue;
    }
    vd sn, cs;
    avx2::sincos(bt, sn, cs);
    const vd decay = avx2::exp(_mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), a), vt));
    const vd sinc = _mm256_div_pd(sn, b);
    _mm256_storeu_pd(&s[i], _mm256_mul_pd(decay, sinc));
    _mm256_storeu_pd(&sp[i], _mm256_mul_pd(decay, _mm256_fnmadd_pd(a, sinc, cs)));
  }
  scalar::mode_basis(t, sigma.subspan(i), s.subspan(i), sp.subspan(i));
}

inline double hsum(vd v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

SpectralSums spectral_sums(std::span<const double> sigma, std::span<const std::complex<double>> u,
                           std::span<const std::complex<double>> ut) {
  const std::size_t n = sigma.size();
  const auto* up = reinterpret_cast<const double*>(u.data());
  const auto* utp = reinterpret_cast<const double*>(ut.data());
  vd acc_u = _mm256_setzero_pd();
  vd acc_ut = _mm256_setzero_pd();
  vd acc_su = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const vd a = _mm256_loadu_pd(up + 2 * i);
    const vd b = _mm256_loadu_pd(utp + 2 * i);
    // sigma[i], sigma[i], sigma[i+1], sigma[i+1]
    const vd s = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(&sigma[i])), 0x50);
    const vd a2 = _mm256_mul_pd(a, a);
    acc_u = _mm256_add_pd(acc_u, a2);
    acc_ut = _mm256_fmadd_pd(b, b, acc_ut);
    acc_su = _mm256_fmadd_pd(s, a2, acc_su);
  }
  SpectralSums sums{hsum(acc_u), hsum(acc_ut), hsum(acc_su)};
  const SpectralSums rest = scalar::spectral_sums(sigma.subspan(i), u.subspan(i), ut.subspan(i));
  sums.u_sq += rest.u_sq;
  sums.ut_sq += rest.ut_sq;
  sums.sigma_u_sq += rest.sigma_u_sq;
  return sums;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", log1p_square, power_weight, damped_sinc, mode_basis, spectral_sums};
  return table;
}

}  // namespace logevo::kernels
