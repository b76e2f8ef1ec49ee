#pragma once

// Four-lane double precision elementary functions for AVX2 + FMA.
// Only included from translation units compiled with -mavx2 -mfma.
//
// Accuracy targets (checked against libm by the kernel equivalence tests):
//   exp    : |x| <= 708, a few ulp
//   log    : positive normal inputs, a few ulp
//   log1p  : nonnegative inputs, a few ulp
//   sincos : |x| <= kVectorTrigLimit, absolute error ~1e-16 after reduction
// Callers route subnormal, non-finite or out-of-range lanes to scalar code.

#include <immintrin.h>

#include <cstdint>

namespace logevo::kernels::avx2 {

using vd = __m256d;

inline vd splat(double x) { return _mm256_set1_pd(x); }

// Exact conversion of integral-valued doubles with |n| < 2^51 to int64 lanes.
inline __m256i to_int64(vd n) {
  const vd magic = splat(0x1.8p52);
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)), _mm256_castpd_si256(magic));
}

// 2^n for integral n in [-1022, 1023].
inline vd pow2i(vd n) {
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(to_int64(n), _mm256_set1_epi64x(1023)), 52);
  return _mm256_castsi256_pd(bits);
}

inline vd exp(vd x) {
  const vd lo_limit = splat(-745.2);
  const vd hi_limit = splat(709.78);
  const vd underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  const vd overflow = _mm256_cmp_pd(x, hi_limit, _CMP_GT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi_limit), lo_limit);

  const vd n = _mm256_round_pd(_mm256_mul_pd(x, splat(1.4426950408889634074)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  vd r = _mm256_fnmadd_pd(n, splat(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(n, splat(1.90821492927058770002e-10), r);

  // Taylor polynomial on |r| <= ln2/2, degree 13.
  vd p = splat(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, splat(0.5));
  p = _mm256_fmadd_pd(p, r, splat(1.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0));

  // Split the scale so that results in the subnormal range stay correct.
  const vd n1 = _mm256_round_pd(_mm256_mul_pd(n, splat(0.5)), _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
  const vd n2 = _mm256_sub_pd(n, n1);
  vd result = _mm256_mul_pd(_mm256_mul_pd(p, pow2i(n1)), pow2i(n2));
  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), underflow);
  result = _mm256_blendv_pd(result, splat(__builtin_inf()), overflow);
  return result;
}

// Natural logarithm of positive normal finite lanes.
inline vd log(vd x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mantissa_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  vd m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mantissa_mask), one_bits));

  // Biased exponent as a double via the 2^52 trick.
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const vd two52 = splat(0x1p52);
  vd e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(two52))), two52);
  e = _mm256_sub_pd(e, splat(1023.0));

  const vd big = _mm256_cmp_pd(m, splat(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, splat(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, splat(1.0)));

  const vd f = _mm256_sub_pd(m, splat(1.0));
  const vd s = _mm256_div_pd(f, _mm256_add_pd(splat(2.0), f));
  const vd s2 = _mm256_mul_pd(s, s);
  // atanh series: log(m) = 2 s (1 + s^2/3 + s^4/5 + ...), |s| <= 0.1716.
  vd p = splat(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, s2, splat(1.0 / 3.0));
  // log(m) = 2s + 2s * s2 * p  (keeps the leading term exact)
  const vd two_s = _mm256_add_pd(s, s);
  const vd log_m = _mm256_fmadd_pd(_mm256_mul_pd(two_s, s2), p, two_s);

  const vd ln2_hi = splat(6.93147180369123816490e-01);
  const vd ln2_lo = splat(1.90821492927058770002e-10);
  return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_m));
}

// log(1 + y) for y >= 0, with the rounding of 1 + y compensated.
inline vd log1p(vd y) {
  const vd one = splat(1.0);
  const vd u = _mm256_add_pd(one, y);
  const vd c = _mm256_sub_pd(_mm256_sub_pd(u, one), y);
  return _mm256_sub_pd(log(u), _mm256_div_pd(c, u));
}

// sin and cos of |x| <= kVectorTrigLimit by three-term Cody-Waite reduction.
inline void sincos(vd x, vd& sin_out, vd& cos_out) {
  const vd q = _mm256_round_pd(_mm256_mul_pd(x, splat(6.36619772367581382433e-01)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  vd r = _mm256_fnmadd_pd(q, splat(1.57079632673412561417e+00), x);
  r = _mm256_fnmadd_pd(q, splat(6.07710050630396597660e-11), r);
  r = _mm256_fnmadd_pd(q, splat(2.02226624871116645580e-21), r);
  const vd r2 = _mm256_mul_pd(r, r);

  vd ps = splat(1.0 / 355687428096000.0);     // 1/17!
  ps = _mm256_fmadd_pd(ps, r2, splat(-1.0 / 1307674368000.0));
  ps = _mm256_fmadd_pd(ps, r2, splat(1.0 / 6227020800.0));
  ps = _mm256_fmadd_pd(ps, r2, splat(-1.0 / 39916800.0));
  ps = _mm256_fmadd_pd(ps, r2, splat(1.0 / 362880.0));
  ps = _mm256_fmadd_pd(ps, r2, splat(-1.0 / 5040.0));
  ps = _mm256_fmadd_pd(ps, r2, splat(1.0 / 120.0));
  ps = _mm256_fmadd_pd(ps, r2, splat(-1.0 / 6.0));
  const vd sin_r = _mm256_fmadd_pd(_mm256_mul_pd(ps, r2), r, r);

  vd pc = splat(1.0 / 6402373705728000.0);    // 1/18!
  pc = _mm256_fmadd_pd(pc, r2, splat(-1.0 / 20922789888000.0));
  pc = _mm256_fmadd_pd(pc, r2, splat(1.0 / 87178291200.0));
  pc = _mm256_fmadd_pd(pc, r2, splat(-1.0 / 479001600.0));
  pc = _mm256_fmadd_pd(pc, r2, splat(1.0 / 3628800.0));
  pc = _mm256_fmadd_pd(pc, r2, splat(-1.0 / 40320.0));
  pc = _mm256_fmadd_pd(pc, r2, splat(1.0 / 720.0));
  pc = _mm256_fmadd_pd(pc, r2, splat(-1.0 / 24.0));
  pc = _mm256_fmadd_pd(pc, r2, splat(0.5));
  const vd cos_r = _mm256_fnmadd_pd(pc, r2, splat(1.0));

  const __m256i quadrant = to_int64(q);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const vd swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(quadrant, one), one));
  const vd sin_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(quadrant, two), two));
  const vd cos_neg = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(quadrant, one), two), two));

  const vd sign_bit = splat(-0.0);
  const vd s = _mm256_blendv_pd(sin_r, cos_r, swap);
  const vd c = _mm256_blendv_pd(cos_r, sin_r, swap);
  sin_out = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign_bit));
  cos_out = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign_bit));
}

inline bool all_lanes(vd mask) { return _mm256_movemask_pd(mask) == 0xF; }

}  // namespace logevo::kernels::avx2
