// One line per acceptance criterion: PASS/FAIL, name, measured detail, wall time.
// Tolerances and runtime limits are fixed here; exit status is nonzero if any line fails.
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "logevo/asymptotics.hpp"
#include "logevo/modes.hpp"
#include "logevo/profile.hpp"
#include "logevo/quadrature.hpp"
#include "logevo/solver.hpp"

using namespace logevo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<Outcome()> check;
};

constexpr double kConvergenceVariation = 0.05;

std::vector<CompensatedPoint> as_points(const std::vector<RatioPoint>& r) {
  std::vector<CompensatedPoint> out;
  for (const auto& p : r) out.push_back({p.t, p.ratio, p.ratio, p.converged});
  return out;
}

bool all_converged(const std::vector<RatioPoint>& r) {
  return std::all_of(r.begin(), r.end(), [](const RatioPoint& p) { return p.converged; });
}

Outcome ip_ratio() {
  const auto grid = log_grid(1e2, 1e5, 13);
  Outcome o{true, ""};
  for (double p : {-0.5, 0.0, 1.0, 3.0}) {
    const auto c = ip_ratio_curve(p, grid);
    const double var = last_decade_variation(as_points(c));
    o.pass = o.pass && all_converged(c) && var < kConvergenceVariation;
    o.detail += fmt::format("p={} var={:.2e} last={:.6f}; ", p, var, c.back().ratio);
    if (p == 1.0) {
      const double err = std::abs(c.back().ratio - 0.5);
      o.pass = o.pass && err <= 1e-3;
      o.detail += fmt::format("|limit-0.5|={:.2e}; ", err);
    }
  }
  return o;
}

Outcome jp_ratio() {
  Outcome o{true, ""};
  const std::vector<double> exact_grid{10.0, 20.0, 50.0};
  double worst = 0.0;
  for (const auto& p : jp_ratio_curve(1.0, exact_grid)) {
    worst = std::max(worst, std::abs(p.ratio - 1.0));
    o.pass = o.pass && p.converged;
  }
  o.pass = o.pass && worst <= 1e-6;
  o.detail += fmt::format("p=1 max|ratio-1|={:.2e}; ", worst);
  const auto grid = log_grid(1e2, 1e5, 13);
  for (double p : {-2.0, 0.0, 3.0}) {
    const auto c = jp_ratio_curve(p, grid);
    const double var = last_decade_variation(as_points(c));
    o.pass = o.pass && all_converged(c) && var < kConvergenceVariation;
    o.detail += fmt::format("p={} var={:.2e}; ", p, var);
  }
  return o;
}

Outcome middle_monotone() {
  Outcome o{true, ""};
  int checked = 0;
  for (double eta : {0.25, 0.5, 0.75}) {
    for (double p : {-1.0, 0.0, 2.0}) {
      std::vector<double> v;
      for (int t = 1; t <= 200; ++t) {
        const ScaledIntegral s = integrate_scaled(IntegralSpec{IntegralKind::Middle, p, static_cast<double>(t), eta, {}, 1.0});
        o.pass = o.pass && s.result.converged && std::isfinite(s.result.value);
        v.push_back(s.result.value);
      }
      // bounded: never above the t = 1 value; nonincreasing from t = 5 on
      const double bound = v.front();
      for (std::size_t i = 0; i < v.size(); ++i) {
        o.pass = o.pass && v[i] <= bound * (1.0 + 1e-12);
        if (i >= 5) o.pass = o.pass && v[i] <= v[i - 1] * (1.0 + 1e-12);
      }
      ++checked;
    }
  }
  o.detail = fmt::format("{} (eta, p) pairs x 200 times", checked);
  return o;
}

Outcome pointwise_sweep() {
  const std::complex<double> data[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  long violations = 0, total = 0;
  for (double s : log_grid(1e-2, 1e2, 40)) {
    for (const auto& d : data) {
      const ModeClosedForm m = ModeClosedForm::make(symbol_from_sigma(s), d[0], d[1]);
      for (int k = 0; k < 40; ++k) {
        ++total;
        violations += !check_pointwise_estimates(m, 0.1 + 49.9 * k / 39.0).pass;
      }
    }
  }
  return {violations == 0, fmt::format("{} violations in {} samples", violations, total)};
}

Outcome mode_oracle() {
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> wide(0.0, 50.0), near(3.9, 4.1), ut(0.0, 10.0), ud(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double sigma = i % 4 == 0 ? near(rng) : wide(rng);
    const double t = ut(rng);
    const std::complex<double> u0(ud(rng), ud(rng)), u1(ud(rng), ud(rng));
    const SymbolPoint pt = symbol_from_sigma(sigma);
    const std::complex<double> v = mode_evaluate(ModeClosedForm::make(pt, u0, u1), t).value;
    const std::complex<double> o = ode_oracle(pt, u0, u1, t, 1e-3);
    worst = std::max(worst, std::abs(v - o) / (1.0 + std::abs(v)));
  }
  return {worst <= 1e-8, fmt::format("200 cases (50 near sigma=4), max |closed-oracle|/(1+|u|) = {:.2e}", worst)};
}

Outcome scripti_n3() {
  const auto grid = log_grid(1e2, 1e4, 9);
  const SandwichReport r = verify_sandwich(Claim::P51, grid, 3.0);
  std::vector<std::pair<double, double>> raw;
  double lo = INFINITY, hi = 0.0;
  for (const auto& v : r.values) {
    raw.emplace_back(v.t, v.raw);
    lo = std::min(lo, v.compensated);
    hi = std::max(hi, v.compensated);
  }
  const RateFit f = fit_rate(raw);
  const bool slope_ok = std::abs(f.exponent + 0.5) <= 0.02;
  return {r.pass && lo > 0.0 && slope_ok,
          fmt::format("compensated in [{:.6f}, {:.6f}], lower bound {:.6f}, var={:.2e}, slope={:.4f}", lo, hi, r.lower_coef,
                      r.last_decade_variation, f.exponent)};
}

Outcome band(Claim claim) {
  const std::vector<double> grid{1e3, 3e3, 1e4, 3e4, 1e5};
  const SandwichReport r = verify_sandwich(claim, grid);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& v : r.values) {
    lo = std::min(lo, v.compensated);
    hi = std::max(hi, v.compensated);
  }
  return {r.pass, fmt::format("compensated in [{:.6f}, {:.6f}] within [{:.6f}, {:.6f}]", lo, hi, r.lower_coef, r.upper_coef)};
}

Outcome cosine_bound() {
  double worst = 0.0;
  bool conv = true;
  for (int i = 1; i <= 50; ++i) {
    const double t = std::pow(10.0, 6.0 * i / 50.0);
    const QuadratureResult r = integrate(IntegralSpec{IntegralKind::CosOverY, 0.0, t, 0.5, {}, 1.0});
    conv = conv && r.converged;
    worst = std::max(worst, std::abs(r.value));
  }
  return {conv && worst <= 1.0, fmt::format("50 times in (1, 1e6], max |integral| = {:.6f}", worst)};
}

Outcome profile_rate() {
  Outcome o{true, ""};
  const std::vector<double> ts{10.0, 20.0, 40.0, 80.0, 160.0};
  for (int n = 1; n <= 3; ++n) {
    const auto d = InitialDatum::gaussian(1.0, 1.0, n);
    std::vector<std::pair<double, double>> s;
    for (double t : ts) {
      const ProfileErrorReport r = profile_error(d, t);
      o.pass = o.pass && r.converged;
      s.emplace_back(t, r.total_error());
    }
    const RateFit f = fit_rate(s);
    const double limit = -0.25 * n + 0.05;
    o.pass = o.pass && f.exponent <= limit;
    o.detail += fmt::format("n={} slope={:.4f} (<= {:.2f}); ", n, f.exponent, limit);
  }
  return o;
}

Outcome l2_rates() {
  const auto grid = log_grid(1e2, 1e5, 13);
  Outcome o{true, ""};
  const EnergySweep s1 = energy_rate_sweep(nullptr, InitialDatum::gaussian(1.0, 1.0, 1), grid);
  const EnergySweep s3 = energy_rate_sweep(nullptr, InitialDatum::gaussian(1.0, 1.0, 3), grid);
  const EnergySweep s2 = energy_rate_sweep(nullptr, InitialDatum::gaussian(1.0, 1.0, 2), grid);
  o.pass = s1.converged && s2.converged && s3.converged;
  o.pass = o.pass && std::abs(s1.l2_fit.exponent - 0.5) <= 0.05;
  o.pass = o.pass && std::abs(s3.l2_fit.exponent + 0.25) <= 0.05;
  double lo = INFINITY, hi = 0.0;
  for (const auto& s : s2.samples) {
    const double c = s.l2_u * s.l2_u / std::log(s.t);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  o.pass = o.pass && lo > 0.0 && hi <= 3.0 * lo;
  o.detail = fmt::format("n=1 slope={:.4f}; n=3 slope={:.4f}; n=2 |u|^2/log t in [{:.4f}, {:.4f}] (ratio {:.3f})",
                         s1.l2_fit.exponent, s3.l2_fit.exponent, lo, hi, hi / lo);
  return o;
}

const GridSpec kLine{1, 80.0, 4096};

Outcome solver_energy() {
  const auto d = InitialDatum::gaussian(1.0, 1.0, 1);
  SweepOptions opt;
  opt.backend = Backend::Solver;
  opt.grid = kLine;
  opt.fit_t_min = 2.0;
  std::vector<double> ts;
  for (int i = 0; i <= 120; ++i) ts.push_back(0.5 * i);
  const EnergySweep s = energy_rate_sweep(&d, d, ts, opt);
  const double limit = -0.5 + 0.1;
  return {s.energy_nonincreasing && s.energy_fit.exponent <= limit,
          fmt::format("u0=u1=Gaussian, 121 steps to t=60, nonincreasing={}, slope over [2, {:.2f}] = {:.4f} (<= {:.1f})",
                      s.energy_nonincreasing, s.trusted_horizon, s.energy_fit.exponent, limit)};
}

Outcome solver_vs_quadrature() {
  const auto d = InitialDatum::gaussian(1.0, 1.0, 1);
  const double horizon = trusted_horizon(kLine, support_radius(d));
  const Field u1 = sample(kLine, d);
  double worst = 0.0;
  bool conv = true;
  for (const InitialDatum* u0 : {static_cast<const InitialDatum*>(nullptr), &d}) {
    const SpectralEvolver ev(u0 ? u1 : Field::zeros(kLine), u1);
    for (double t = 0.5; t <= horizon; t += 0.5) {
      const FrequencyNorms q = frequency_norms(u0, d, t);
      conv = conv && q.converged;
      worst = std::max(worst, std::abs(ev.norms_at(t).l2_u / q.l2_u - 1.0));
    }
  }
  return {conv && worst <= 0.01,
          fmt::format("t in [0.5, {:.2f}], u0 in {{0, u1}}: max relative difference {:.2e}", horizon, worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"ip-ratio-convergence", 10.0, ip_ratio},
      {"jp-ratio-convergence", 10.0, jp_ratio},
      {"middle-frequency-monotone", 5.0, middle_monotone},
      {"pointwise-decay-sweep", 5.0, pointwise_sweep},
      {"mode-closed-form-vs-rk4", 30.0, mode_oracle},
      {"scripti-n3-band-and-slope", 60.0, scripti_n3},
      {"scripti-n1-band", 60.0, [] { return band(Claim::P61); }},
      {"scripti-n2-band", 60.0, [] { return band(Claim::P62); }},
      {"cosine-integral-bound", 5.0, cosine_bound},
      {"profile-error-rate", 120.0, profile_rate},
      {"l2-norm-rates", 120.0, l2_rates},
      {"solver-energy-decay", 60.0, solver_energy},
      {"solver-vs-quadrature", 60.0, solver_vs_quadrature},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    fmt::print("{} {:<28} {:7.3f}s/{:g}s{}  {}\n", pass ? "PASS" : "FAIL", c.name, secs, c.time_limit_s,
               in_time ? "" : " (over time)", o.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
