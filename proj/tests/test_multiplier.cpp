#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "logevo/error.hpp"
#include "logevo/multiplier.hpp"

using namespace logevo;
using Catch::Approx;

TEST_CASE("symbol at the rho branch point", "[multiplier]") {
  const SymbolPoint p = symbol_at(std::sqrt(std::numbers::e - 1.0));
  CHECK(p.sigma == Approx(1.0).epsilon(1e-15));
  CHECK(p.rho == Approx(0.5).epsilon(1e-15));
  CHECK(p.regime == Regime::Complex);
}

TEST_CASE("symbol at the origin is a double root", "[multiplier]") {
  const SymbolPoint p = symbol_at(0.0);
  CHECK(p.sigma == 0.0);
  CHECK(p.rho == 0.0);
  CHECK(p.regime == Regime::Degenerate);
}

TEST_CASE("symbol at the degenerate radius", "[multiplier]") {
  const SymbolPoint p = symbol_at(kDegenerateRadius);
  CHECK(p.sigma == Approx(4.0).epsilon(1e-14));
  CHECK(p.regime == Regime::Degenerate);
  CHECK(kDegenerateRadius == Approx(std::sqrt(std::exp(4.0) - 1.0)).epsilon(1e-15));
  CHECK(kRhoBranchRadius == Approx(std::sqrt(std::numbers::e - 1.0)).epsilon(1e-15));
}

TEST_CASE("symbol rejects bad input", "[multiplier]") {
  CHECK_THROWS_AS(symbol_at(-1.0), DomainError);
  CHECK_THROWS_AS(symbol_at(std::nan("")), DomainError);
  CHECK_THROWS_AS(symbol_at(INFINITY), DomainError);
}

TEST_CASE("symbol keeps small-r precision", "[multiplier]") {
  // log(1 + r^2) computed naively would return 0 here
  CHECK(symbol_at(1e-10).sigma == Approx(1e-20).epsilon(1e-14));
}

TEST_CASE("roots at sigma = 1", "[multiplier]") {
  const RootPair rp = roots_at(symbol_from_sigma(1.0));
  CHECK(rp.lambda_plus.real() == Approx(-0.5));
  CHECK(rp.lambda_plus.imag() == Approx(std::sqrt(3.0) / 2.0));
  CHECK(rp.lambda_minus.imag() == Approx(-std::sqrt(3.0) / 2.0));
  CHECK(rp.a == Approx(0.5));
  CHECK(rp.b == Approx(0.8660254037844386));
}

TEST_CASE("roots at sigma = 4 coincide", "[multiplier]") {
  const RootPair rp = roots_at(symbol_from_sigma(4.0));
  CHECK(rp.lambda_plus == std::complex<double>(-2.0, 0.0));
  CHECK(rp.lambda_minus == std::complex<double>(-2.0, 0.0));
  CHECK(rp.b == 0.0);
}

TEST_CASE("roots at sigma = 12", "[multiplier]") {
  const SymbolPoint p = symbol_from_sigma(12.0);
  CHECK(p.regime == Regime::Real);
  const RootPair rp = roots_at(p);
  CHECK(rp.lambda_plus.real() == Approx(-6.0 + 2.0 * std::sqrt(6.0)).epsilon(1e-14));
  CHECK(rp.lambda_minus.real() == Approx(-6.0 - 2.0 * std::sqrt(6.0)).epsilon(1e-14));
  CHECK(rp.lambda_plus.imag() == 0.0);
}

TEST_CASE("Vieta identities over sigma in [0, 1000]", "[multiplier][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double sigma = i < 1000 ? 1e3 * u(rng) : std::pow(10.0, -8.0 + 11.0 * u(rng));
    const RootPair rp = roots_at(symbol_from_sigma(sigma));
    const auto sum = rp.lambda_plus + rp.lambda_minus;
    const auto prod = rp.lambda_plus * rp.lambda_minus;
    INFO("sigma = " << sigma);
    CHECK(std::abs(sum + sigma) <= 1e-12 * std::max(1.0, sigma));
    CHECK(std::abs(prod - sigma) <= 1e-12 * std::max(1.0, sigma));
    CHECK(rp.a == Approx(sigma / 2.0).epsilon(1e-15));
  }
}

TEST_CASE("root real parts are nonpositive", "[multiplier][property]") {
  for (double r = 0.0; r < 200.0; r += 0.37) {
    const RootPair rp = roots_at(symbol_at(r));
    CHECK(rp.lambda_plus.real() <= 0.0);
    CHECK(rp.lambda_minus.real() <= 0.0);
    if (r > 0.0) {
      CHECK(rp.lambda_plus.real() < 0.0);
      CHECK(rp.lambda_minus.real() < 0.0);
    }
  }
  const RootPair zero = roots_at(symbol_at(0.0));
  CHECK(zero.lambda_plus == 0.0);
  CHECK(zero.lambda_minus == 0.0);
}

TEST_CASE("real regime roots are negative and distinct", "[multiplier]") {
  for (double sigma : {4.0 + 1e-9, 4.5, 12.0, 100.0, 1e4}) {
    const RootPair rp = roots_at(symbol_from_sigma(sigma));
    CHECK(rp.lambda_plus.imag() == 0.0);
    CHECK(rp.lambda_plus.real() < 0.0);
    CHECK(rp.lambda_minus.real() < rp.lambda_plus.real());
  }
}

TEST_CASE("roots are continuous across the double root", "[multiplier]") {
  for (double eps : {1e-6, 1e-9}) {
    for (double s : {4.0 - eps, 4.0 + eps}) {
      const RootPair rp = roots_at(symbol_from_sigma(s));
      CHECK(std::abs(rp.lambda_plus + 2.0) < 10.0 * std::sqrt(eps));
      CHECK(std::abs(rp.lambda_minus + 2.0) < 10.0 * std::sqrt(eps));
    }
  }
}

TEST_CASE("classification window around sigma = 4", "[multiplier]") {
  CHECK(classify(4.0 + 1e-13) == Regime::Degenerate);
  CHECK(classify(4.0 - 1e-13) == Regime::Degenerate);
  CHECK(classify(4.0 + 1e-10) == Regime::Real);
  CHECK(classify(4.0 - 1e-10) == Regime::Complex);
  CHECK(classify(0.0) == Regime::Degenerate);
  CHECK(classify(1e-300) == Regime::Complex);
}

TEST_CASE("rho is continuous, nondecreasing and bounded by sqrt(sigma)/2", "[multiplier][property]") {
  double prev = 0.0;
  for (double r = 0.0; r < 20.0; r += 1e-3) {
    const SymbolPoint p = symbol_at(r);
    CHECK(p.rho >= prev);
    CHECK(p.rho - prev < 1e-3);
    CHECK(p.rho * p.rho <= p.sigma / 4.0 * (1.0 + 1e-15));
    prev = p.rho;
  }
  const double below = symbol_at(std::nextafter(kRhoBranchRadius, 0.0)).rho;
  const double above = symbol_at(std::nextafter(kRhoBranchRadius, 10.0)).rho;
  CHECK(above - below < 1e-15);
}

TEST_CASE("b bounds on the unit interval", "[multiplier]") {
  CHECK(b_bounds_check(1.0));
  CHECK(b_bounds_check(0.0));
  CHECK(b_bounds_check(0.5));
  for (double r = 0.0; r <= 1.0; r += 1.0 / 256) CHECK(b_bounds_check(r));
  CHECK_THROWS_AS(b_bounds_check(1.5), DomainError);
  CHECK_THROWS_AS(b_bounds_check(-0.1), DomainError);
}
