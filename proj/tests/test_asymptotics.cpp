#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "logevo/asymptotics.hpp"
#include "logevo/error.hpp"

using namespace logevo;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<std::pair<double, double>> power_samples(double amp, double expo) {
  std::vector<std::pair<double, double>> s;
  for (double t : log_grid(1.0, 1e4, 9)) s.emplace_back(t, amp * std::pow(t, expo));
  return s;
}

}  // namespace

TEST_CASE("fit of exact power laws", "[asymptotics]") {
  const RateFit f = fit_rate(power_samples(5.0, -0.25));
  CHECK(f.exponent == Approx(-0.25).epsilon(1e-12));
  CHECK(f.amplitude == Approx(5.0).epsilon(1e-12));
  CHECK(f.r_squared == Approx(1.0).epsilon(1e-12));
  CHECK(f.n_points == 9);
  CHECK(fit_rate(power_samples(1.0, 0.5)).exponent == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fit window", "[asymptotics]") {
  auto s = power_samples(2.0, -1.0);
  s.emplace_back(1e6, 1e9);  // outlier outside the window
  const RateFit f = fit_rate(s, 0.0, 1e4);
  CHECK(f.exponent == Approx(-1.0).epsilon(1e-12));
  CHECK(f.t_max == Approx(1e4));
}

TEST_CASE("fit is scale-equivariant", "[asymptotics][property]") {
  std::vector<std::pair<double, double>> s;
  for (double t : log_grid(10.0, 1e3, 11)) s.emplace_back(t, std::pow(t, -0.7) * (1.0 + 0.3 * std::sin(t)));
  const RateFit a = fit_rate(s);
  for (auto& [t, v] : s) v *= 17.0;
  const RateFit b = fit_rate(s);
  CHECK(b.exponent == Approx(a.exponent).epsilon(1e-12));
  CHECK(b.amplitude == Approx(17.0 * a.amplitude).epsilon(1e-12));
  CHECK(b.r_squared == Approx(a.r_squared).epsilon(1e-12));
  CHECK(a.r_squared < 1.0);
  CHECK(a.r_squared >= 0.0);
}

TEST_CASE("fit rejects degenerate input", "[asymptotics]") {
  std::vector<std::pair<double, double>> two{{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS(fit_rate(two), DomainError);
  std::vector<std::pair<double, double>> neg{{1.0, 1.0}, {2.0, -2.0}, {3.0, 1.0}};
  CHECK_THROWS_AS(fit_rate(neg), DomainError);
  std::vector<std::pair<double, double>> rep{{1.0, 1.0}, {1.0, 2.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(fit_rate(rep), DomainError);
}

TEST_CASE("variation measures", "[asymptotics]") {
  std::vector<CompensatedPoint> pts;
  for (double t : {1.0, 10.0, 100.0, 1000.0}) pts.push_back({t, 0.0, t >= 100.0 ? 1.0 : 5.0, true});
  CHECK(last_decade_variation(pts) == 0.0);
  pts.push_back({2000.0, 0.0, 1.1, true});
  pts.push_back({3000.0, 0.0, 1.0, true});
  CHECK(last_decade_variation(pts) == Approx(0.1 / (3.1 / 3.0)));
  CHECK(last_decade_total_variation(pts) == Approx(0.2 / (3.1 / 3.0)));
}

TEST_CASE("sandwich P61", "[asymptotics]") {
  const std::vector<double> grid{1e3, 1e4, 1e5};
  const SandwichReport r = verify_sandwich(Claim::P61, grid);
  CHECK(r.pass);
  CHECK(r.lower_coef == Approx((64.0 + 49.0 * pi * pi) / (196.0 * pi * pi)).epsilon(1e-15));
  CHECK(r.lower_coef == Approx(0.2830845).epsilon(1e-6));
  CHECK(r.upper_coef == 12.0);
  CHECK_FALSE(r.empirical_upper);
  for (const auto& v : r.values) {
    CHECK(v.compensated >= r.lower_coef);
    CHECK(v.compensated <= r.upper_coef);
    CHECK(v.compensated == Approx(v.raw / v.t));
  }
  CHECK(last_decade_total_variation(r.values) < 0.1);
}

TEST_CASE("sandwich P62", "[asymptotics]") {
  const std::vector<double> grid{1e3, 1e4, 1e5};
  const SandwichReport r = verify_sandwich(Claim::P62, grid);
  CHECK(r.pass);
  CHECK(r.lower_coef == Approx(pi / (4.0 * std::numbers::e)));
  CHECK(r.lower_coef == Approx(0.28893).epsilon(1e-5));
  CHECK(r.upper_coef == Approx(6.0 * pi));
  CHECK(last_decade_total_variation(r.values) < 0.1);
}

TEST_CASE("sandwich P51 in three dimensions", "[asymptotics]") {
  const auto grid = log_grid(1e2, 1e4, 9);
  const SandwichReport r = verify_sandwich(Claim::P51, grid, 3.0);
  CHECK(r.pass);
  CHECK(r.empirical_upper);
  CHECK(r.lower_coef == Approx(pi * 0.5 * std::sqrt(pi)).epsilon(1e-14));  // omega_3 A_3 / 4
  // limit omega_n A_n / 2
  CHECK(r.values.back().compensated == Approx(std::pow(pi, 1.5)).epsilon(2e-3));
  CHECK(last_decade_total_variation(r.values) < 0.1);
  CHECK_THROWS_AS(verify_sandwich(Claim::P51, grid, 2.0), DomainError);
}

TEST_CASE("sandwich L21 and L22", "[asymptotics]") {
  const auto grid = log_grid(1e2, 1e5, 13);
  for (double p : {-0.5, 0.0, 1.0, 3.0}) CHECK(verify_sandwich(Claim::L21, grid, p).pass);
  for (double p : {-2.0, 0.0, 3.0}) CHECK(verify_sandwich(Claim::L22, grid, p).pass);
}

TEST_CASE("claim names round-trip", "[asymptotics]") {
  for (auto c : {Claim::P51, Claim::P61, Claim::P62, Claim::L21, Claim::L22}) CHECK(parse_claim(to_string(c)) == c);
  CHECK_THROWS_AS(parse_claim("P71"), DomainError);
  CHECK(parse_backend("radial") == Backend::Radial);
  CHECK(parse_backend("solver") == Backend::Solver);
}

TEST_CASE("Gaussian moments and the Riemann-Lebesgue integral", "[asymptotics]") {
  CHECK(gaussian_moment_a(3) == Approx(std::sqrt(pi) / 2.0));
  CHECK(gaussian_moment_a(4) == Approx(0.5));
  CHECK(riemann_lebesgue_integral(3, 0.0) == Approx(std::sqrt(pi) / 2.0).epsilon(1e-10));
  // F_3(t) = (sqrt(pi)/2) exp(-t)
  CHECK(riemann_lebesgue_integral(3, 2.0) == Approx(std::sqrt(pi) / 2.0 * std::exp(-2.0)).epsilon(1e-9));
  CHECK(std::abs(riemann_lebesgue_integral(3, 100.0)) <= gaussian_moment_a(3) / 2.0);
  const auto grid = log_grid(1.0, 1e3, 12);
  for (int n : {3, 4, 5}) {
    const RiemannLebesgueReport r = riemann_lebesgue_check(n, grid);
    INFO("n = " << n);
    CHECK(r.pass);
    CHECK(r.decreasing);
    CHECK(r.below_half);
  }
  CHECK(std::abs(riemann_lebesgue_integral(4, 1e4)) < 1e-2);
}

TEST_CASE("energy sweeps with the radial backend", "[asymptotics]") {
  const auto grid = log_grid(1e2, 1e5, 13);
  const EnergySweep s3 = energy_rate_sweep(nullptr, InitialDatum::gaussian(1.0, 1.0, 3), grid);
  CHECK(s3.converged);
  CHECK(s3.energy_nonincreasing);
  CHECK(s3.energy_fit.exponent <= -1.4);
  CHECK(s3.l2_fit.exponent == Approx(-0.25).margin(0.05));
  const EnergySweep s1 = energy_rate_sweep(nullptr, InitialDatum::gaussian(1.0, 1.0, 1), grid);
  CHECK(s1.l2_fit.exponent == Approx(0.5).margin(0.05));
  CHECK(s1.energy_fit.exponent <= -0.4);
  CHECK(std::isinf(s1.trusted_horizon));
}

TEST_CASE("energy sweep with the solver backend", "[asymptotics]") {
  const auto d = InitialDatum::gaussian(1.0, 1.0, 1);
  SweepOptions o;
  o.backend = Backend::Solver;
  const std::vector<double> grid{0.0, 2.0, 5.0, 10.0, 20.0, 30.0, 60.0};
  const EnergySweep s = energy_rate_sweep(&d, d, grid, o);
  CHECK(s.trusted_horizon == Approx(40.0 - std::sqrt(std::log(1e8))));
  CHECK(s.energy_fit.t_max <= s.trusted_horizon);
  CHECK(s.energy_fit.n_points == 5);
  CHECK(s.energy_nonincreasing);
  CHECK(s.samples.size() == grid.size());
}
