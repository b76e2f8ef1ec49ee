#include <catch_amalgamated.hpp>

#include <cfloat>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <vector>

#include "logevo/kernels.hpp"
#include "logevo/modes.hpp"

using namespace logevo;
namespace k = logevo::kernels;

namespace {

// Random radii spanning many decades, with exact zeros, tiny values and huge values
// that force the vector variants onto their scalar fallbacks.
std::vector<double> radii(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> e(-12.0, 6.0);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::pow(10.0, e(rng));
  r[0] = 0.0;
  if (n > 5) {
    r[3] = 1e-310;
    r[5] = 1e160;
  }
  return r;
}

std::vector<double> sigmas(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> e(-14.0, 3.0), near(-1e-6, 1e-6);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i % 7 == 3 ? 4.0 + near(rng) : std::pow(10.0, e(rng));
  s[0] = 0.0;
  if (n > 2) s[2] = 4.0;
  return s;
}

// Relative tolerance grows with |log value|: an exp whose argument carries a
// relative rounding error loses that much in the result.
void check_close(const std::vector<double>& a, const std::vector<double>& b, double rel, double abs_floor) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    const double m = std::max(std::abs(a[i]), std::abs(b[i]));
    const double scale = 1.0 + std::abs(std::log(m));
    INFO("index " << i << ": " << a[i] << " vs " << b[i]);
    CHECK(std::abs(a[i] - b[i]) <= rel * scale * m + abs_floor);
  }
}

}  // namespace

TEST_CASE("kernel selection", "[kernels]") {
  CHECK(k::scalar_kernels().name == "scalar");
  const k::KernelTable& act = k::active();
  const char* env = std::getenv("LOGEVO_SIMD");
  if (env && std::string_view(env) == "scalar") {
    CHECK(act.name == "scalar");
  } else if (k::avx2_kernels()) {
    CHECK(act.name == "avx2");
  } else {
    CHECK(act.name == "scalar");
  }
}

TEST_CASE("scalar kernels against direct formulas", "[kernels]") {
  const auto& s = k::scalar_kernels();
  std::vector<double> r{0.0, 1e-10, 0.5, 1.0, 7.3, 1e3};
  std::vector<double> out(r.size());
  s.log1p_square(r, out);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(out[i] == std::log1p(r[i] * r[i]));

  s.power_weight(3.0, 0.0, 2.0, r, out);
  CHECK(out[0] == 0.0);
  CHECK(out[2] == Catch::Approx(std::pow(1.25, -3.0) * 0.25).epsilon(1e-15));
  s.power_weight(3.0, 0.0, 0.0, r, out);
  CHECK(out[0] == 1.0);

  std::vector<double> sig{0.0, 1e-12, 1.0, 4.0};
  std::vector<double> ds(sig.size()), sv(sig.size()), sp(sig.size());
  s.damped_sinc(2.0, sig, ds);
  CHECK(ds[0] == 2.0);
  CHECK(ds[2] == Catch::Approx(std::exp(-1.0) * std::sin(2.0)).epsilon(1e-15));
  s.mode_basis(2.0, sig, sv, sp);
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const FundamentalPair f = fundamental_solution(sig[i], 2.0);
    CHECK(sv[i] == f.s);
    CHECK(sp[i] == f.sp);
  }
}

TEST_CASE("AVX2 kernels match the scalar reference", "[kernels][simd]") {
  const k::KernelTable* v = k::avx2_kernels();
  if (!v) {
    SKIP("AVX2 variant not available on this build or CPU");
  }
  const auto& s = k::scalar_kernels();
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    INFO("length " << n);
    const auto r = radii(n, 11 + static_cast<unsigned>(n));
    std::vector<double> a(n), b(n);

    s.log1p_square(r, a);
    v->log1p_square(r, b);
    check_close(a, b, 4e-16, 0.0);

    for (double t : {0.5, 3.0, 250.0, 1e5}) {
      for (double p : {-0.75, 0.0, 1.0, 2.0, 3.5}) {
        for (double shift : {0.0, std::log(2.0)}) {
          s.power_weight(t, shift, p, r, a);
          v->power_weight(t, shift, p, r, b);
          // both variants are only as good as the conditioning of t (sigma - shift) + p log r
          for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == b[i]) continue;
            const double cond = 1.0 + t * (std::log1p(r[i] * r[i]) + shift) + std::abs(p * std::log(r[i]));
            INFO("r = " << r[i] << ", t = " << t << ", p = " << p);
            CHECK(std::abs(a[i] - b[i]) <= 8.0 * DBL_EPSILON * cond * std::max(std::abs(a[i]), std::abs(b[i])) + 1e-300);
          }
        }
      }
    }

    const auto sig = sigmas(n, 29 + static_cast<unsigned>(n));
    for (double t : {1e-3, 0.7, 10.0, 1e3, 1e5}) {
      s.damped_sinc(t, sig, a);
      v->damped_sinc(t, sig, b);
      check_close(a, b, 4e-15, 1e-300);

      std::vector<double> sa(n), spa(n), sb(n), spb(n);
      s.mode_basis(t, sig, sa, spa);
      v->mode_basis(t, sig, sb, spb);
      // absolute floor relative to t: |s| <= t
      check_close(sa, sb, 1e-13, 1e-14 * t);
      check_close(spa, spb, 1e-13, 1e-14);
    }

    std::mt19937_64 rng(5 + n);
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> u(n), ut(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = {g(rng), g(rng)};
      ut[i] = {g(rng), g(rng)};
    }
    const k::SpectralSums x = s.spectral_sums(sig, u, ut);
    const k::SpectralSums y = v->spectral_sums(sig, u, ut);
    CHECK(y.u_sq == Catch::Approx(x.u_sq).epsilon(1e-13));
    CHECK(y.ut_sq == Catch::Approx(x.ut_sq).epsilon(1e-13));
    CHECK(y.sigma_u_sq == Catch::Approx(x.sigma_u_sq).epsilon(1e-13));
  }
}

TEST_CASE("AVX2 kernels accept in-place log1p_square", "[kernels][simd]") {
  const k::KernelTable* v = k::avx2_kernels();
  if (!v) {
    SKIP("AVX2 variant not available on this build or CPU");
  }
  auto r = radii(37, 3);
  std::vector<double> ref(r.size());
  k::scalar_kernels().log1p_square(r, ref);
  v->log1p_square(r, r);
  check_close(ref, r, 4e-16, 0.0);
}
