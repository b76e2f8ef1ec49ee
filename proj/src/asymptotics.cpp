#include "logevo/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "logevo/error.hpp"
#include "logevo/parallel.hpp"

namespace logevo {

RateFit fit_rate(std::span<const std::pair<double, double>> samples, double t_min, double t_max) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, v] : samples) {
    if (t < t_min || t > t_max) continue;
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("fit_rate: t must be positive and finite");
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("fit_rate: values must be positive, got " + std::to_string(v) + " at t=" + std::to_string(t));
    }
    pts.emplace_back(std::log(t), std::log(v));
  }
  if (pts.size() < 3) throw DomainError("fit_rate: need at least 3 samples in the window");
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].first == pts[i - 1].first) throw DomainError("fit_rate: sample times must be distinct");
  }

  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.amplitude = std::exp(my - fit.exponent * mx);
  double ss_res = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - (my + fit.exponent * (x - mx));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.t_min = std::exp(pts.front().first);
  fit.t_max = std::exp(pts.back().first);
  fit.n_points = static_cast<int>(pts.size());
  return fit;
}

std::string_view to_string(Claim claim) {
  switch (claim) {
    case Claim::P51:
      return "P51";
    case Claim::P61:
      return "P61";
    case Claim::P62:
      return "P62";
    case Claim::L21:
      return "L21";
    case Claim::L22:
      return "L22";
  }
  return "Unknown";
}

Claim parse_claim(std::string_view name) {
  for (auto c : {Claim::P51, Claim::P61, Claim::P62, Claim::L21, Claim::L22}) {
    if (name == to_string(c)) return c;
  }
  throw DomainError("unknown claim '" + std::string(name) + "'");
}

namespace {

std::vector<CompensatedPoint> last_decade(std::span<const CompensatedPoint> points) {
  double t_last = 0.0;
  for (const auto& p : points) t_last = std::max(t_last, p.t);
  std::vector<CompensatedPoint> out;
  for (const auto& p : points) {
    if (p.t >= t_last / 10.0 * (1.0 - 1e-12)) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

double mean_abs(const std::vector<CompensatedPoint>& pts) {
  double m = 0.0;
  for (const auto& p : pts) m += p.compensated;
  return std::abs(m / static_cast<double>(pts.size()));
}

}  // namespace

double last_decade_variation(std::span<const CompensatedPoint> points) {
  const auto pts = last_decade(points);
  if (pts.empty()) return 0.0;
  double lo = pts.front().compensated, hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.compensated);
    hi = std::max(hi, p.compensated);
  }
  const double m = mean_abs(pts);
  return m > 0.0 ? (hi - lo) / m : std::numeric_limits<double>::infinity();
}

double last_decade_total_variation(std::span<const CompensatedPoint> points) {
  const auto pts = last_decade(points);
  if (pts.empty()) return 0.0;
  double tv = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) tv += std::abs(pts[i].compensated - pts[i - 1].compensated);
  const double m = mean_abs(pts);
  return m > 0.0 ? tv / m : std::numeric_limits<double>::infinity();
}

double gaussian_moment_a(int n) {
  if (n < 3) throw DomainError("A_n is finite only for n >= 3");
  return 0.5 * std::tgamma(0.5 * (n - 2));
}

SandwichReport verify_sandwich(Claim claim, std::span<const double> t_grid, double parameter, const Tolerances& tol) {
  if (t_grid.empty()) throw DomainError("verify_sandwich: empty t grid");
  SandwichReport rep;
  rep.claim = claim;
  rep.parameter = parameter;
  rep.values.resize(t_grid.size());

  bool convergence_claim = false;
  switch (claim) {
    case Claim::P61:
      rep.lower_coef = (64.0 + 49.0 * std::numbers::pi * std::numbers::pi) / (196.0 * std::numbers::pi * std::numbers::pi);
      rep.upper_coef = 12.0;
      break;
    case Claim::P62:
      rep.lower_coef = std::numbers::pi / (4.0 * std::numbers::e);
      rep.upper_coef = 6.0 * std::numbers::pi;
      break;
    case Claim::P51: {
      const int n = static_cast<int>(parameter);
      if (n < 3 || n != parameter) throw DomainError("P51 needs an integer n >= 3");
      rep.lower_coef = unit_sphere_area(n) * gaussian_moment_a(n) / 4.0;
      convergence_claim = true;
      break;
    }
    case Claim::L21:
      if (!(parameter > -1.0)) throw DomainError("L21 needs p > -1");
      convergence_claim = true;
      break;
    case Claim::L22:
      convergence_claim = true;
      break;
  }

  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    CompensatedPoint& pt = rep.values[i];
    pt.t = t;
    switch (claim) {
      case Claim::P61:
      case Claim::P62:
      case Claim::P51: {
        const double n = claim == Claim::P61 ? 1.0 : claim == Claim::P62 ? 2.0 : parameter;
        const QuadratureResult r = integrate({IntegralKind::ScriptI, n, t, 0.5, tol, 1.0});
        pt.raw = r.value;
        pt.converged = r.converged;
        const double rate = claim == Claim::P61 ? t : claim == Claim::P62 ? std::log(t) : std::pow(t, -0.5 * (n - 2.0));
        pt.compensated = r.value / rate;
        break;
      }
      case Claim::L21: {
        const QuadratureResult r = integrate({IntegralKind::Ip, parameter, t, 0.5, tol, 1.0});
        pt.raw = r.value;
        pt.converged = r.converged;
        pt.compensated = r.value * std::pow(t, 0.5 * (parameter + 1.0));
        break;
      }
      case Claim::L22: {
        const ScaledIntegral r = integrate_scaled({IntegralKind::Jp, parameter, t, 0.5, tol, 1.0});
        pt.raw = r.result.value * std::exp(-r.log_scale);
        pt.converged = r.result.converged;
        pt.compensated = r.result.value * (t - 1.0);
        break;
      }
    }
  });

  if (claim == Claim::P51 || claim == Claim::L21 || claim == Claim::L22) {
    rep.empirical_upper = true;
    rep.upper_coef = 0.0;
    for (const auto& p : rep.values) rep.upper_coef = std::max(rep.upper_coef, p.compensated);
  }
  rep.last_decade_variation = last_decade_variation(rep.values);

  rep.pass = true;
  for (const auto& p : rep.values) {
    if (!p.converged) {
      rep.pass = false;
      rep.note = "quadrature did not converge at t=" + std::to_string(p.t);
    }
    const bool strict_positive = claim == Claim::L21 || claim == Claim::L22;
    const bool in_band = strict_positive ? p.compensated > 0.0 : p.compensated >= rep.lower_coef;
    if (!in_band || !(p.compensated <= rep.upper_coef)) {
      rep.pass = false;
      if (rep.note.empty()) rep.note = "compensated value outside the band at t=" + std::to_string(p.t);
    }
  }
  if (convergence_claim && !(rep.last_decade_variation < 0.05)) {
    rep.pass = false;
    if (rep.note.empty()) rep.note = "last-decade variation " + std::to_string(rep.last_decade_variation) + " >= 5%";
  }
  return rep;
}

double riemann_lebesgue_integral(int n, double t, const Tolerances& tol) {
  if (n < 3) throw DomainError("F_n needs n >= 3");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("F_n needs t >= 0");
  const double w = 2.0 * std::sqrt(t);
  // exp(-y^2) y^{n-3} is below 1e-25 of its peak beyond this point.
  const double upper = 8.0 + std::sqrt(static_cast<double>(n));
  std::vector<double> pts{0.0};
  if (w > 0.0) {
    const double half = std::numbers::pi / w;
    for (double y = half; y < upper; y += half) pts.push_back(y);
  }
  pts.push_back(upper);
  return gauss_kronrod(
             [n, w](std::span<const double> y, std::span<double> f) {
               for (std::size_t i = 0; i < y.size(); ++i) {
                 f[i] = std::exp(-y[i] * y[i]) * std::pow(y[i], n - 3) * std::cos(w * y[i]);
               }
             },
             pts, tol)
      .value;
}

RiemannLebesgueReport riemann_lebesgue_check(int n, std::span<const double> t_grid, const Tolerances& tol) {
  if (t_grid.size() < 2) throw DomainError("riemann_lebesgue_check: need at least two t values");
  RiemannLebesgueReport rep;
  rep.n = n;
  rep.values.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { rep.values[i] = {t_grid[i], riemann_lebesgue_integral(n, t_grid[i], tol)}; });
  const std::size_t half = t_grid.size() / 2;
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    (i < half ? first : second) = std::max(i < half ? first : second, std::abs(rep.values[i].second));
  }
  rep.decreasing = second < first;
  rep.below_half = std::abs(rep.values.back().second) < 0.5 * gaussian_moment_a(n);
  rep.pass = rep.decreasing && rep.below_half;
  return rep;
}

std::string_view to_string(Backend backend) { return backend == Backend::Radial ? "radial" : "solver"; }

Backend parse_backend(std::string_view name) {
  if (name == "radial") return Backend::Radial;
  if (name == "solver") return Backend::Solver;
  throw DomainError("unknown backend '" + std::string(name) + "'");
}

EnergySweep energy_rate_sweep(const InitialDatum* u0, const InitialDatum& u1, std::span<const double> t_grid,
                              const SweepOptions& options) {
  if (t_grid.empty()) throw DomainError("energy_rate_sweep: empty t grid");
  EnergySweep out;
  out.samples.resize(t_grid.size());
  double fit_max = options.fit_t_max;

  if (options.backend == Backend::Radial) {
    std::vector<char> ok(t_grid.size(), 0);
    parallel_for(t_grid.size(), [&](std::size_t i) {
      const FrequencyNorms f = frequency_norms(u0, u1, t_grid[i], options.tol);
      out.samples[i] = {t_grid[i], f.l2_u, f.energy, 0.0};
      ok[i] = f.converged;
    });
    out.converged = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  } else {
    const GridSpec& g = options.grid;
    validate(g);
    if (g.dim != u1.dim) throw DomainError("energy_rate_sweep: grid and data dimensions differ");
    const Field f1 = sample(g, u1);
    const Field f0 = u0 ? sample(g, *u0) : Field::zeros(g);
    const SpectralEvolver ev(f0, f1);
    double radius = support_radius(u1);
    if (u0) radius = std::max(radius, support_radius(*u0));
    out.trusted_horizon = trusted_horizon(g, radius);
    fit_max = std::min(fit_max, out.trusted_horizon);
    parallel_for(t_grid.size(), [&](std::size_t i) { out.samples[i] = ev.norms_at(t_grid[i], true); });
  }

  std::vector<std::size_t> order(t_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t_grid[a] < t_grid[b]; });
  out.energy_nonincreasing = true;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = out.samples[order[k - 1]];
    const auto& cur = out.samples[order[k]];
    if (cur.t > prev.t && cur.energy > prev.energy * (1.0 + 1e-10)) out.energy_nonincreasing = false;
  }

  std::vector<std::pair<double, double>> e, l;
  for (const auto& s : out.samples) {
    if (!(s.t > 0.0)) continue;
    e.emplace_back(s.t, s.energy);
    l.emplace_back(s.t, s.l2_u);
  }
  out.energy_fit = fit_rate(e, options.fit_t_min, fit_max);
  out.l2_fit = fit_rate(l, options.fit_t_min, fit_max);
  return out;
}

}  // namespace logevo
