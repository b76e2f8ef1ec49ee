#include "logevo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "logevo/error.hpp"
#include "logevo/kernels.hpp"
#include "logevo/parallel.hpp"
#include "radial_grid.hpp"

namespace logevo {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208292237568, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::size_t kRuleNodes = 21;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

bool by_error(const Panel& x, const Panel& y) { return x.error < y.error; }

// Evaluates the rule on each panel [a_i, b_i] with one integrand call.
class PanelEvaluator {
 public:
  explicit PanelEvaluator(const BatchIntegrand& f) : f_(f) {}

  void run(std::span<Panel> panels) {
    x_.resize(panels.size() * kRuleNodes);
    fx_.resize(x_.size());
    for (std::size_t p = 0; p < panels.size(); ++p) {
      const double c = 0.5 * (panels[p].a + panels[p].b);
      const double h = 0.5 * (panels[p].b - panels[p].a);
      double* x = &x_[p * kRuleNodes];
      x[0] = c;
      for (int j = 0; j < 10; ++j) {
        x[1 + 2 * j] = c - h * xgk[j];
        x[2 + 2 * j] = c + h * xgk[j];
      }
    }
    f_(x_, fx_);
    for (std::size_t p = 0; p < panels.size(); ++p) apply_rule(panels[p], &fx_[p * kRuleNodes]);
  }

 private:
  static void apply_rule(Panel& panel, const double* fv) {
    const double h = 0.5 * (panel.b - panel.a);
    const double fc = fv[0];
    double resg = 0.0;
    double resk = wgk[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
      const double f1 = fv[1 + 2 * j];
      const double f2 = fv[2 + 2 * j];
      resk += wgk[j] * (f1 + f2);
      resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += wgk[j] * (std::abs(fv[1 + 2 * j] - mean) + std::abs(fv[2 + 2 * j] - mean));

    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    panel.value = resk * h;
    panel.error = err;
  }

  const BatchIntegrand& f_;
  std::vector<double> x_;
  std::vector<double> fx_;
};

}  // namespace

QuadratureResult gauss_kronrod(const BatchIntegrand& f, std::span<const double> breakpoints, const Tolerances& tol) {
  if (breakpoints.size() < 2) throw DomainError("gauss_kronrod: need at least two breakpoints");
  if (!(tol.rel >= 0.0) || !(tol.abs >= 0.0) || (tol.rel == 0.0 && tol.abs == 0.0)) {
    throw DomainError("gauss_kronrod: tolerances must be nonnegative and not both zero");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) throw DomainError("gauss_kronrod: breakpoints must be increasing");
  }
  const std::size_t initial = breakpoints.size() - 1;
  if (initial * kRuleNodes > tol.node_budget) {
    throw DomainError("gauss_kronrod: " + std::to_string(initial) + " initial panels exceed the node budget");
  }

  PanelEvaluator eval(f);
  std::vector<Panel> heap(initial);
  for (std::size_t i = 0; i < initial; ++i) heap[i] = {breakpoints[i], breakpoints[i + 1], 0.0, 0.0};
  constexpr std::size_t kChunk = 256;
  for (std::size_t i = 0; i < initial; i += kChunk) {
    eval.run(std::span<Panel>(heap).subspan(i, std::min(kChunk, initial - i)));
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  QuadratureResult out;
  out.nodes_used = initial * kRuleNodes;
  std::vector<Panel> frozen;  // panels too narrow to bisect further
  std::vector<Panel> work;

  auto totals = [&] {
    double v = 0.0;
    double e = 0.0;
    for (const Panel& p : heap) {
      v += p.value;
      e += p.error;
    }
    for (const Panel& p : frozen) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  for (;;) {
    if (error <= std::max(tol.abs, tol.rel * std::abs(value))) {
      std::tie(value, error) = totals();
      if (error <= std::max(tol.abs, tol.rel * std::abs(value))) {
        out.converged = true;
        break;
      }
    }
    if (heap.empty()) break;

    // Bisect the worst panel together with any others of comparable error.
    work.clear();
    const double worst = heap.front().error;
    while (!heap.empty() && work.size() < 64 && heap.front().error >= 0.5 * worst &&
           out.nodes_used + 2 * kRuleNodes * (work.size() + 1) <= tol.node_budget) {
      std::pop_heap(heap.begin(), heap.end(), by_error);
      const Panel p = heap.back();
      heap.pop_back();
      const double mid = 0.5 * (p.a + p.b);
      value -= p.value;
      error -= p.error;
      if (!(mid > p.a && mid < p.b) || (p.b - p.a) <= 8.0 * kEps * std::max(std::abs(p.a), std::abs(p.b))) {
        frozen.push_back(p);
        value += p.value;
        error += p.error;
        continue;
      }
      work.push_back({p.a, mid, 0.0, 0.0});
      work.push_back({mid, p.b, 0.0, 0.0});
    }
    if (work.empty()) {
      if (heap.empty() || out.nodes_used + 2 * kRuleNodes > tol.node_budget) break;
      continue;
    }
    eval.run(work);
    out.nodes_used += work.size() * kRuleNodes;
    for (const Panel& p : work) {
      value += p.value;
      error += p.error;
      heap.push_back(p);
      std::push_heap(heap.begin(), heap.end(), by_error);
    }
  }

  std::tie(value, error) = totals();
  out.value = value;
  out.abs_error_estimate = error;
  if (!out.converged) out.converged = error <= std::max(tol.abs, tol.rel * std::abs(value));
  return out;
}

std::string_view to_string(IntegralKind kind) {
  switch (kind) {
    case IntegralKind::Ip:
      return "Ip";
    case IntegralKind::Jp:
      return "Jp";
    case IntegralKind::Middle:
      return "Middle";
    case IntegralKind::ScriptI:
      return "ScriptI";
    case IntegralKind::CosOverY:
      return "CosOverY";
  }
  return "Unknown";
}

IntegralKind parse_integral_kind(std::string_view name) {
  for (auto k : {IntegralKind::Ip, IntegralKind::Jp, IntegralKind::Middle, IntegralKind::ScriptI,
                 IntegralKind::CosOverY}) {
    if (name == to_string(k)) return k;
  }
  if (name == "ScriptI_n") return IntegralKind::ScriptI;
  throw DomainError("unknown integral kind '" + std::string(name) + "'");
}

double unit_sphere_area(int n) {
  if (n < 1) throw DomainError("unit_sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

void validate(const IntegralSpec& s) {
  if (!std::isfinite(s.t) || !(s.t > 0.0)) throw DomainError("integral: t must be positive, got " + std::to_string(s.t));
  if (!(s.tail_scale >= 1.0)) throw DomainError("integral: tail_scale must be >= 1");
  switch (s.kind) {
    case IntegralKind::Ip:
      if (!(s.p_or_n > -1.0)) throw DomainError("Ip requires p > -1, got " + std::to_string(s.p_or_n));
      break;
    case IntegralKind::Jp:
      if (!(s.t > 0.5 * (s.p_or_n + 1.0))) {
        throw DomainError("Jp converges only for t > (p + 1) / 2, got p=" + std::to_string(s.p_or_n) +
                          " t=" + std::to_string(s.t));
      }
      break;
    case IntegralKind::Middle:
      if (!(s.eta > 0.0 && s.eta <= 1.0)) throw DomainError("Middle requires 0 < eta <= 1");
      if (!std::isfinite(s.p_or_n)) throw DomainError("Middle requires finite p");
      break;
    case IntegralKind::ScriptI: {
      const double n = s.p_or_n;
      if (!(n >= 1.0) || n != std::floor(n) || n > 64.0) {
        throw DomainError("ScriptI requires an integer n >= 1, got " + std::to_string(n));
      }
      if (!(s.t > 0.5 * n)) {
        throw DomainError("ScriptI diverges unless t > n / 2, got n=" + std::to_string(n) + " t=" + std::to_string(s.t));
      }
      break;
    }
    case IntegralKind::CosOverY:
      break;
  }
}

namespace {

// Smallest R found by doubling and bisection (in log R) with log_bound(R) <= log_target.
template <class F>
double bisect_cutoff(F log_bound, double start, double log_target) {
  double hi = start;
  while (!(log_bound(hi) <= log_target)) {
    hi *= 2.0;
    if (hi > 1e30) throw DomainError("tail cutoff: integrand tail too heavy to truncate");
  }
  if (hi == start) return start;
  double lo = 0.5 * hi;
  for (int i = 0; i < 60 && hi / lo > 1.0 + 1e-6; ++i) {
    const double mid = std::sqrt(lo * hi);
    (log_bound(mid) <= log_target ? hi : lo) = mid;
  }
  return hi;
}

// Bound on the tail beyond R of exp(-t (log(1+r^2) - shift)) r^q g(r) with g
// nonincreasing: log(1+r^2) >= log(1+R^2) + 2c log(r/R), c = R^2/(1+R^2), so
// the tail is at most exp(-t (log(1+R^2) - shift)) R^{q+1} g(R) / (2ct - q - 1).
double log_tail_bound(double r, double t, double shift, double q, double log_g) {
  const double c = r * r / (1.0 + r * r);
  const double denom = 2.0 * c * t - q - 1.0;
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return -t * (std::log1p(r * r) - shift) + (q + 1.0) * std::log(r) + log_g - std::log(denom);
}

// a, a + h, a + 2h, a + 4h, ... below b, then b.
std::vector<double> doubling_from(double a, double h, double b) {
  std::vector<double> pts{a};
  for (double step = h; a + step < b * (1.0 - 1e-12) - 1e-300; step *= 2.0) pts.push_back(a + step);
  pts.push_back(b);
  return pts;
}

Tolerances scaled_tol(const Tolerances& tol, double factor) {
  Tolerances t = tol;
  t.abs = tol.abs / factor;
  return t;
}

ScaledIntegral ip_integral(const IntegralSpec& s) {
  const double p = s.p_or_n;
  const double t = s.t;
  const double scale = 1.0 / std::sqrt(t);
  ScaledIntegral out;
  if (p >= 0.0) {
    const auto pts = doubling_from(0.0, scale, 1.0);
    out.result = gauss_kronrod(
        [t, p](std::span<const double> r, std::span<double> f) { kernels::active().power_weight(t, 0.0, p, r, f); },
        pts, s.tol);
    return out;
  }
  // r = w^{1/(p+1)} turns r^p dr into dw / (p+1).
  const double k = 1.0 / (p + 1.0);
  std::vector<double> pts{0.0};
  for (double r = scale; r < 1.0 - 1e-12; r *= 2.0) pts.push_back(std::pow(r, p + 1.0));
  pts.push_back(1.0);
  out.result = gauss_kronrod(
      [t, k](std::span<const double> w, std::span<double> f) {
        for (std::size_t i = 0; i < w.size(); ++i) f[i] = std::pow(w[i], k);
        kernels::active().power_weight(t, 0.0, 0.0, f, f);
        for (double& v : f) v *= k;
      },
      pts, s.tol);
  return out;
}

ScaledIntegral jp_integral(const IntegralSpec& s) {
  const double p = s.p_or_n;
  const double t = s.t;
  const double shift = std::numbers::ln2;
  const double R = tail_cutoff(s) * s.tail_scale;
  ScaledIntegral out;
  out.log_scale = t * shift;
  out.result = gauss_kronrod(
      [t, p, shift](std::span<const double> r, std::span<double> f) {
        kernels::active().power_weight(t, shift, p, r, f);
      },
      detail::geometric_fill(doubling_from(1.0, 1.0 / t, R)), s.tol);
  return out;
}

ScaledIntegral middle_integral(const IntegralSpec& s) {
  const double p = s.p_or_n;
  const double t = s.t;
  const double eta = s.eta;
  const double shift = std::log1p(eta * eta);
  ScaledIntegral out;
  out.log_scale = t * shift;
  if (eta == 1.0) return out;
  // Decay length of the integrand just above eta.
  const double h = std::min(1.0 - eta, (1.0 + eta * eta) / (2.0 * eta * t));
  out.result = gauss_kronrod(
      [t, p, shift](std::span<const double> r, std::span<double> f) {
        kernels::active().power_weight(t, shift, p, r, f);
      },
      doubling_from(eta, h, 1.0), s.tol);
  return out;
}

ScaledIntegral script_i_integral(const IntegralSpec& s) {
  const int n = static_cast<int>(s.p_or_n);
  const double t = s.t;
  const double omega = unit_sphere_area(n);
  const double R = tail_cutoff(s) * s.tail_scale;

  // One panel per half oscillation of sin^2(t sqrt(sigma)), then doubling.
  std::vector<double> pts{0.0};
  for (double k = 1.0;; k += 1.0) {
    const double r = detail::half_period_radius(k, t);
    if (!(r < R)) break;
    pts.push_back(r);
    if (pts.size() * kRuleNodes > s.tol.node_budget / 2) {
      throw DomainError("ScriptI: oscillation count exceeds the node budget at t=" + std::to_string(t));
    }
  }
  pts.push_back(R);

  ScaledIntegral out;
  out.result = gauss_kronrod(
      [t, n](std::span<const double> r, std::span<double> f) {
        const auto& k = kernels::active();
        thread_local std::vector<double> sigma;
        sigma.resize(r.size());
        k.log1p_square(r, sigma);
        k.damped_sinc(t, sigma, f);
        for (std::size_t i = 0; i < r.size(); ++i) {
          double v = f[i] * f[i];
          for (int j = 1; j < n; ++j) v *= r[i];
          f[i] = v;
        }
      },
      detail::geometric_fill(pts), scaled_tol(s.tol, omega));
  out.result.value *= omega;
  out.result.abs_error_estimate *= omega;
  return out;
}

ScaledIntegral cos_over_y_integral(const IntegralSpec& s) {
  const double upper = 2.0 * std::sqrt(s.t);
  ScaledIntegral out;
  if (upper == 2.0) {
    out.result.converged = true;
    return out;
  }
  const double lo = std::min(2.0, upper);
  const double hi = std::max(2.0, upper);
  std::vector<double> pts{lo};
  const double quarter = 0.5 * std::numbers::pi;
  for (double k = std::floor(lo / quarter) + 1.0; k * quarter < hi; k += 1.0) {
    if (k * quarter > lo) pts.push_back(k * quarter);
  }
  pts.push_back(hi);
  out.result = gauss_kronrod(
      [](std::span<const double> y, std::span<double> f) {
        for (std::size_t i = 0; i < y.size(); ++i) f[i] = std::cos(y[i]) / y[i];
      },
      pts, s.tol);
  if (upper < 2.0) out.result.value = -out.result.value;
  return out;
}

}  // namespace

double tail_cutoff(const IntegralSpec& s) {
  validate(s);
  const double log_target = std::log(1e-2 * s.tol.abs);
  switch (s.kind) {
    case IntegralKind::Jp:
      return bisect_cutoff(
          [&](double r) { return log_tail_bound(r, s.t, std::numbers::ln2, s.p_or_n, 0.0); }, 2.0, log_target);
    case IntegralKind::ScriptI: {
      const double omega = unit_sphere_area(static_cast<int>(s.p_or_n));
      // |damped sinc|^2 <= exp(-t sigma) / sigma, and 1/sigma is decreasing.
      return bisect_cutoff(
          [&](double r) {
            return log_tail_bound(r, s.t, 0.0, s.p_or_n - 1.0, std::log(omega) - std::log(std::log1p(r * r)));
          },
          1.0 / s.t, log_target);
    }
    case IntegralKind::Ip:
    case IntegralKind::Middle:
      return 1.0;
    case IntegralKind::CosOverY:
      return 2.0 * std::sqrt(s.t);
  }
  return 1.0;
}

ScaledIntegral integrate_scaled(const IntegralSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case IntegralKind::Ip:
      return ip_integral(spec);
    case IntegralKind::Jp:
      return jp_integral(spec);
    case IntegralKind::Middle:
      return middle_integral(spec);
    case IntegralKind::ScriptI:
      return script_i_integral(spec);
    case IntegralKind::CosOverY:
      return cos_over_y_integral(spec);
  }
  throw DomainError("integrate: unknown kind");
}

QuadratureResult integrate(const IntegralSpec& spec) {
  ScaledIntegral s = integrate_scaled(spec);
  if (s.log_scale != 0.0) {
    const double f = std::exp(-s.log_scale);
    s.result.value *= f;
    s.result.abs_error_estimate *= f;
  }
  return s.result;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("log_grid: need points >= 1 and 0 < lo <= hi");
  std::vector<double> g(static_cast<std::size_t>(points));
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

std::vector<RatioPoint> ip_ratio_curve(double p, std::span<const double> t_grid, const Tolerances& tol) {
  std::vector<RatioPoint> out(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    IntegralSpec s{IntegralKind::Ip, p, t_grid[i], 0.5, tol, 1.0};
    const QuadratureResult r = integrate(s);
    out[i] = {t_grid[i], r.value * std::pow(t_grid[i], 0.5 * (p + 1.0)), r.converged};
  });
  return out;
}

std::vector<RatioPoint> jp_ratio_curve(double p, std::span<const double> t_grid, const Tolerances& tol) {
  std::vector<RatioPoint> out(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    IntegralSpec s{IntegralKind::Jp, p, t_grid[i], 0.5, tol, 1.0};
    const ScaledIntegral r = integrate_scaled(s);
    out[i] = {t_grid[i], r.result.value * (t_grid[i] - 1.0), r.result.converged};
  });
  return out;
}

}  // namespace logevo
