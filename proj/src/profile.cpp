#include "logevo/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "logevo/error.hpp"
#include "logevo/kernels.hpp"
#include "radial_grid.hpp"

namespace logevo {

std::string_view to_string(DataFamily family) {
  switch (family) {
    case DataFamily::Gaussian:
      return "Gaussian";
    case DataFamily::BallIndicator:
      return "BallIndicator";
    case DataFamily::Custom:
      return "Custom";
  }
  return "Unknown";
}

DataFamily parse_data_family(std::string_view name) {
  for (auto f : {DataFamily::Gaussian, DataFamily::BallIndicator, DataFamily::Custom}) {
    if (name == to_string(f)) return f;
  }
  throw DomainError("unknown data family '" + std::string(name) + "'");
}

InitialDatum InitialDatum::gaussian(double amplitude, double width, int dim) {
  InitialDatum d;
  d.family = DataFamily::Gaussian;
  d.amplitude = amplitude;
  d.width = width;
  d.dim = dim;
  return d;
}

InitialDatum InitialDatum::ball(double amplitude, double radius, int dim) {
  InitialDatum d = gaussian(amplitude, radius, dim);
  d.family = DataFamily::BallIndicator;
  return d;
}

InitialDatum InitialDatum::custom(std::vector<double> radii, std::vector<double> values, int dim, double amplitude) {
  InitialDatum d;
  d.family = DataFamily::Custom;
  d.amplitude = amplitude;
  d.width = radii.empty() ? 0.0 : radii.back();
  d.dim = dim;
  d.radii = std::move(radii);
  d.values = std::move(values);
  return d;
}

void validate(const InitialDatum& d) {
  if (d.dim < 1 || d.dim > 3) throw UnsupportedError("initial data: dimension must be 1, 2 or 3, got " + std::to_string(d.dim));
  if (!std::isfinite(d.amplitude)) throw DomainError("initial data: amplitude must be finite");
  if (d.family == DataFamily::Custom) {
    if (d.dim == 2) throw UnsupportedError("Custom radial data has no closed-form transform in dimension 2");
    if (d.radii.size() < 2 || d.radii.size() != d.values.size()) {
      throw DomainError("Custom data: need at least two (radius, value) samples of equal count");
    }
    if (d.radii.front() != 0.0) throw DomainError("Custom data: the first radius must be 0");
    for (std::size_t i = 1; i < d.radii.size(); ++i) {
      if (!(d.radii[i] > d.radii[i - 1]) || !std::isfinite(d.radii[i])) {
        throw DomainError("Custom data: radii must be finite and strictly increasing");
      }
    }
    for (double v : d.values) {
      if (!std::isfinite(v)) throw DomainError("Custom data: values must be finite");
    }
    return;
  }
  if (!(d.width > 0.0) || !std::isfinite(d.width)) throw DomainError("initial data: width must be positive");
}

namespace {

// Piecewise-linear profile on one table segment: f = alpha + beta rho on [a, b].
struct Segment {
  double a, b, alpha, beta;
};

std::vector<Segment> segments(const InitialDatum& d) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < d.radii.size(); ++i) {
    const double a = d.radii[i];
    const double b = d.radii[i + 1];
    const double beta = (d.values[i + 1] - d.values[i]) / (b - a);
    out.push_back({a, b, d.values[i] - beta * a, beta});
  }
  return out;
}

// int_a^b (alpha + beta rho) rho^k drho
double moment(const Segment& s, int k) {
  const double k1 = k + 1.0;
  return s.alpha * (std::pow(s.b, k1) - std::pow(s.a, k1)) / k1 +
         s.beta * (std::pow(s.b, k1 + 1.0) - std::pow(s.a, k1 + 1.0)) / (k1 + 1.0);
}

double custom_transform(const InitialDatum& d, double r) {
  const auto segs = segments(d);
  const double support = d.radii.back();
  if (r * support < 1e-2) {
    // Taylor series of cos / sinc in r with the table moments.
    double sum = 0.0;
    double term = 1.0;  // r^{2j} / (2j)! or r^{2j} / (2j+1)!
    for (int j = 0; j < 5; ++j) {
      double m = 0.0;
      for (const Segment& s : segs) m += moment(s, d.dim == 1 ? 2 * j : 2 * j + 2);
      sum += (j % 2 == 0 ? 1.0 : -1.0) * term * m;
      term *= d.dim == 1 ? r * r / ((2.0 * j + 1.0) * (2.0 * j + 2.0)) : r * r / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
    }
    return d.amplitude * (d.dim == 1 ? 2.0 * sum : 4.0 * std::numbers::pi * sum);
  }
  double sum = 0.0;
  if (d.dim == 1) {
    auto F = [r](const Segment& s, double x) {
      return (s.alpha + s.beta * x) * std::sin(r * x) / r + s.beta * std::cos(r * x) / (r * r);
    };
    for (const Segment& s : segs) sum += F(s, s.b) - F(s, s.a);
    return 2.0 * d.amplitude * sum;
  }
  auto F = [r](const Segment& s, double x) {
    const double sn = std::sin(r * x);
    const double cs = std::cos(r * x);
    return s.alpha * (sn / (r * r) - x * cs / r) + s.beta * (2.0 * x * sn / (r * r) + (2.0 / (r * r * r) - x * x / r) * cs);
  };
  for (const Segment& s : segs) sum += F(s, s.b) - F(s, s.a);
  return 4.0 * std::numbers::pi * d.amplitude * sum / r;
}

double ball_transform(const InitialDatum& d, double r) {
  const double R = d.width;
  const double x = r * R;
  const double A = d.amplitude;
  switch (d.dim) {
    case 1: {
      const double sinc = x < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      return 2.0 * A * R * sinc;
    }
    case 2: {
      const double j1_over_x = x < 1e-3 ? 0.5 - x * x / 16.0 + x * x * x * x / 384.0 : std::cyl_bessel_j(1.0, x) / x;
      return 2.0 * std::numbers::pi * A * R * R * j1_over_x;
    }
    default: {
      const double x2 = x * x;
      const double g = x < 5e-2 ? 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0
                                : (std::sin(x) - x * std::cos(x)) / (x2 * x);
      return 4.0 * std::numbers::pi * A * R * R * R * g;
    }
  }
}

}  // namespace

double hat_u1(const InitialDatum& d, double r) {
  validate(d);
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("hat_u1: r must be finite and nonnegative");
  switch (d.family) {
    case DataFamily::Gaussian: {
      const double w = d.width;
      return d.amplitude * std::pow(w * std::sqrt(std::numbers::pi), d.dim) * std::exp(-0.25 * w * w * r * r);
    }
    case DataFamily::BallIndicator:
      return ball_transform(d, r);
    case DataFamily::Custom:
      return custom_transform(d, r);
  }
  throw UnsupportedError("hat_u1: unknown family");
}

double mass(const InitialDatum& d) { return hat_u1(d, 0.0); }

DataNorms data_norms(const InitialDatum& d) {
  validate(d);
  const int n = d.dim;
  const double omega = unit_sphere_area(n);
  const double A = std::abs(d.amplitude);
  DataNorms out;
  switch (d.family) {
    case DataFamily::Gaussian: {
      const double w = d.width;
      out.l2 = A * std::pow(0.5 * std::numbers::pi * w * w, 0.25 * n);
      const double l1 = A * std::pow(w * std::sqrt(std::numbers::pi), n);
      const double first = A * omega * std::pow(w, n + 1) * std::tgamma(0.5 * (n + 1)) / 2.0;
      out.l11 = l1 + first;
      break;
    }
    case DataFamily::BallIndicator: {
      const double R = d.width;
      const double vol = omega * std::pow(R, n) / n;
      out.l2 = A * std::sqrt(vol);
      out.l11 = A * (vol + omega * std::pow(R, n + 1) / (n + 1));
      break;
    }
    case DataFamily::Custom: {
      auto table = [&d](double rho) {
        const auto it = std::upper_bound(d.radii.begin(), d.radii.end(), rho);
        if (it == d.radii.end()) return rho == d.radii.back() ? d.values.back() : 0.0;
        const std::size_t i = static_cast<std::size_t>(it - d.radii.begin()) - 1;
        const double w = (rho - d.radii[i]) / (d.radii[i + 1] - d.radii[i]);
        return (1.0 - w) * d.values[i] + w * d.values[i + 1];
      };
      auto radial = [&](auto&& g) {
        return gauss_kronrod(
                   [&](std::span<const double> rho, std::span<double> f) {
                     for (std::size_t i = 0; i < rho.size(); ++i) f[i] = g(rho[i], table(rho[i]));
                   },
                   d.radii, Tolerances{1e-12, 1e-15, 200000})
            .value;
      };
      const double l2sq = radial([n](double rho, double v) { return v * v * std::pow(rho, n - 1); });
      const double l1 = radial([n](double rho, double v) { return std::abs(v) * std::pow(rho, n - 1); });
      const double first = radial([n](double rho, double v) { return std::abs(v) * std::pow(rho, n); });
      out.l2 = A * std::sqrt(omega * l2sq);
      out.l11 = A * omega * (l1 + first);
      break;
    }
  }
  out.i0 = out.l2 + out.l11;
  return out;
}

std::complex<double> phi_at(double p1, const SymbolPoint& point, double t) {
  if (!(t > 0.0)) throw DomainError("phi_at: t must be positive, got " + std::to_string(t));
  double d = 0.0;
  const double sigma = point.sigma;
  kernels::active().damped_sinc(t, std::span<const double>(&sigma, 1), std::span<double>(&d, 1));
  return {p1 * d, 0.0};
}

std::vector<DecompositionRow> decomposition_bounds(const InitialDatum& d, std::span<const double> r_grid) {
  validate(d);
  const double p1 = mass(d);
  const double norm = data_norms(d).l11;
  std::vector<DecompositionRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) {
    DecompositionRow row;
    row.r = r;
    row.abs_a = std::abs(hat_u1(d, r) - p1);
    row.bound = r * norm;
    row.k_needed = r > 0.0 && norm > 0.0 ? row.abs_a / (r * norm) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

double ProfileErrorReport::total_error() const { return std::sqrt(total_error_sq()); }

QuadratureResult radial_frequency_integral(const BatchIntegrand& g, int n, double t, double lo, double hi,
                                           const Tolerances& tol) {
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("radial_frequency_integral: need 0 <= lo < hi");
  const double omega = unit_sphere_area(n);
  // Beyond twice the double-root radius every mode decays at least like exp(-t).
  const double far = 2.0 * kDegenerateRadius;
  const double finite_hi = std::isinf(hi) ? std::max(far, 2.0 * lo) : hi;
  const double r_env = t > 0.0 ? std::sqrt(std::expm1(std::min(70.0 / t, 700.0))) : 0.0;

  std::vector<double> pts{lo};
  if (t > 0.0) {
    const double k0 = std::floor(2.0 * t * std::sqrt(std::log1p(lo * lo)) / std::numbers::pi) + 1.0;
    for (double k = k0;; k += 1.0) {
      const double r = detail::half_period_radius(k, t);
      if (!(r < std::min(finite_hi, r_env))) break;
      if (r > lo) pts.push_back(r);
      if (pts.size() * 21 > tol.node_budget / 2) throw DomainError("radial_frequency_integral: too many oscillations");
    }
  }
  pts.push_back(finite_hi);

  Tolerances inner = tol;
  inner.abs = tol.abs / omega;
  auto weighted = [&g, n](std::span<const double> r, std::span<double> f) {
    g(r, f);
    if (n > 1) {
      for (std::size_t i = 0; i < r.size(); ++i) f[i] *= n == 2 ? r[i] : r[i] * r[i];
    }
  };
  QuadratureResult out = gauss_kronrod(weighted, detail::geometric_fill(pts), inner);

  if (std::isinf(hi)) {
    // r = R + u / (1 - u) on [0, 1).
    std::vector<double> upts{0.0};
    for (int j = 1; j <= 30; ++j) upts.push_back(1.0 - std::ldexp(1.0, -j));
    upts.push_back(1.0);
    thread_local std::vector<double> rbuf;
    const double R = finite_hi;
    const QuadratureResult tail = gauss_kronrod(
        [&](std::span<const double> u, std::span<double> f) {
          rbuf.resize(u.size());
          for (std::size_t i = 0; i < u.size(); ++i) rbuf[i] = R + u[i] / (1.0 - u[i]);
          weighted(rbuf, f);
          for (std::size_t i = 0; i < u.size(); ++i) {
            const double jac = 1.0 / ((1.0 - u[i]) * (1.0 - u[i]));
            f[i] = std::isfinite(f[i] * jac) ? f[i] * jac : 0.0;
          }
        },
        upts, inner);
    out.value += tail.value;
    out.abs_error_estimate += tail.abs_error_estimate;
    out.nodes_used += tail.nodes_used;
    out.converged = out.converged && tail.converged;
  }
  out.value *= omega;
  out.abs_error_estimate *= omega;
  return out;
}

namespace {

struct ModeBuffers {
  std::vector<double> sigma, s, sp, aux;
  void resize(std::size_t n) {
    sigma.resize(n);
    s.resize(n);
    sp.resize(n);
    aux.resize(n);
  }
};

}  // namespace

ProfileErrorReport profile_error(const InitialDatum& u1, double t, double delta, const Tolerances& tol) {
  validate(u1);
  if (!(t >= 1.0) || !std::isfinite(t)) throw DomainError("profile_error: t must be >= 1, got " + std::to_string(t));
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("profile_error: delta must be positive");

  ProfileErrorReport rep;
  rep.t = t;
  rep.delta = delta;
  rep.p1 = mass(u1);
  rep.i0 = data_norms(u1).i0;
  rep.plancherel_factor = std::pow(2.0 * std::numbers::pi, -u1.dim);

  const double p1 = rep.p1;
  auto integrand = [&](std::span<const double> r, std::span<double> f) {
    thread_local ModeBuffers b;
    b.resize(r.size());
    const auto& k = kernels::active();
    k.log1p_square(r, b.sigma);
    k.mode_basis(t, b.sigma, b.s, b.sp);
    k.damped_sinc(t, b.sigma, b.aux);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double diff = hat_u1(u1, r[i]) * b.s[i] - p1 * b.aux[i];
      f[i] = diff * diff;
    }
  };
  const QuadratureResult low = radial_frequency_integral(integrand, u1.dim, t, 0.0, delta, tol);
  const QuadratureResult high =
      radial_frequency_integral(integrand, u1.dim, t, delta, std::numeric_limits<double>::infinity(), tol);
  rep.low_freq_error_sq = low.value;
  rep.high_freq_error_sq = high.value;
  rep.nodes_used = low.nodes_used + high.nodes_used;
  rep.converged = low.converged && high.converged;
  return rep;
}

FrequencyNorms frequency_norms(const InitialDatum* u0, const InitialDatum& u1, double t, const Tolerances& tol) {
  validate(u1);
  if (u0) {
    validate(*u0);
    if (u0->dim != u1.dim) throw DomainError("frequency_norms: u0 and u1 must share the dimension");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("frequency_norms: t must be nonnegative");

  // mode: 0 -> |u_hat|^2, 1 -> |u_t_hat|^2 + sigma |u_hat|^2
  auto make = [&](int mode) {
    return [&, mode](std::span<const double> r, std::span<double> f) {
      thread_local ModeBuffers b;
      b.resize(r.size());
      const auto& k = kernels::active();
      k.log1p_square(r, b.sigma);
      k.mode_basis(t, b.sigma, b.s, b.sp);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double v1 = hat_u1(u1, r[i]);
        const double v0 = u0 ? hat_u1(*u0, r[i]) : 0.0;
        const double sg = b.sigma[i];
        const double u = v1 * b.s[i] + v0 * (b.sp[i] + sg * b.s[i]);
        if (mode == 0) {
          f[i] = u * u;
        } else {
          const double ut = v1 * b.sp[i] - v0 * sg * b.s[i];
          f[i] = ut * ut + sg * u * u;
        }
      }
    };
  };
  const double inf = std::numeric_limits<double>::infinity();
  const QuadratureResult l2 = radial_frequency_integral(make(0), u1.dim, t, 0.0, inf, tol);
  const QuadratureResult en = radial_frequency_integral(make(1), u1.dim, t, 0.0, inf, tol);
  const double factor = std::pow(2.0 * std::numbers::pi, -u1.dim);

  FrequencyNorms out;
  out.t = t;
  out.l2_u = std::sqrt(std::max(0.0, l2.value) * factor);
  out.energy = 0.5 * en.value * factor;
  out.nodes_used = l2.nodes_used + en.nodes_used;
  out.converged = l2.converged && en.converged;
  return out;
}

}  // namespace logevo
