#include "cli.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "logevo/asymptotics.hpp"
#include "logevo/error.hpp"
#include "logevo/kernels.hpp"
#include "logevo/modes.hpp"
#include "logevo/multiplier.hpp"
#include "logevo/parallel.hpp"
#include "logevo/profile.hpp"
#include "logevo/quadrature.hpp"
#include "logevo/solver.hpp"

namespace logevo::cli {

namespace {

using json = nlohmann::json;

constexpr const char* kSchema = "logevo/1";

std::string num(double v) { return fmt::format("{:.16e}", v); }

struct Common {
  std::string out;
  std::string json_path;
  bool no_timestamp = false;
  int threads = 0;
  std::string schema = kSchema;
};

// A t grid given either as an explicit list or as (tmin, tmax, points).
struct TGrid {
  std::vector<double> t;
  double tmin = 1.0;
  double tmax = 10.0;
  int points = 5;
  bool linear = false;

  std::vector<double> resolve() const {
    if (!t.empty()) return t;
    if (points < 1) throw DomainError("--points must be >= 1");
    if (!linear) return log_grid(tmin, tmax, points);
    if (!(tmax >= tmin)) throw DomainError("--tmax must be >= --tmin");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = points == 1 ? tmin : tmin + (tmax - tmin) * i / (points - 1);
    return g;
  }
};

void add_grid(CLI::App* sub, TGrid& g) {
  sub->add_option("--t", g.t, "Explicit list of times (overrides the range)")->delimiter(',');
  sub->add_option("--tmin", g.tmin, "First time of the range")->capture_default_str();
  sub->add_option("--tmax", g.tmax, "Last time of the range")->capture_default_str();
  sub->add_option("--points", g.points, "Number of times in the range")->capture_default_str();
}

struct DataOpts {
  std::string family = "Gaussian";
  double amplitude = 1.0;
  double width = 1.0;
  std::vector<double> radii;
  std::vector<double> values;

  InitialDatum make(int dim) const {
    switch (parse_data_family(family)) {
      case DataFamily::Gaussian:
        return InitialDatum::gaussian(amplitude, width, dim);
      case DataFamily::BallIndicator:
        return InitialDatum::ball(amplitude, width, dim);
      case DataFamily::Custom:
        return InitialDatum::custom(radii, values, dim, amplitude);
    }
    throw DomainError("unknown family");
  }
};

void add_data(CLI::App* sub, DataOpts& d) {
  sub->add_option("--family", d.family, "Gaussian, BallIndicator or Custom")->capture_default_str();
  sub->add_option("--amplitude", d.amplitude, "Data amplitude")->capture_default_str();
  sub->add_option("--width", d.width, "Gaussian width or ball radius")->capture_default_str();
  sub->add_option("--radii", d.radii, "Custom profile radii")->delimiter(',');
  sub->add_option("--values", d.values, "Custom profile values")->delimiter(',');
}

void add_tolerances(CLI::App* sub, Tolerances& tol) {
  sub->add_option("--rel-tol", tol.rel, "Relative quadrature tolerance")->capture_default_str();
  sub->add_option("--abs-tol", tol.abs, "Absolute quadrature tolerance")->capture_default_str();
  sub->add_option("--budget", tol.node_budget, "Quadrature node budget")->capture_default_str();
}

// Output stream for CSV: the --out file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") {
      os_ = &std::cout;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw DomainError("cannot open output file '" + path + "'");
    os_ = file_.get();
  }
  std::ostream& os() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

struct Context {
  const CLI::App* app = nullptr;
  const CLI::App* sub = nullptr;
  Common* common = nullptr;
};

void write_header(std::ostream& os, const Context& ctx) {
  os << "# logevo " << ctx.sub->get_name() << "\n";
  os << "# schema = \"" << kSchema << "\"\n";
  if (!ctx.common->no_timestamp) {
    os << "# generated = " << fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr))) << "\n";
  }
  os << "# kernels = " << kernels::active().name << "\n";
  std::istringstream config(ctx.sub->config_to_str(true, false));
  for (std::string line; std::getline(config, line);) {
    if (line.empty() || line.rfind("config", 0) == 0) continue;
    os << "# " << ctx.sub->get_name() << "." << line << "\n";
  }
}

void write_json(const Context& ctx, json summary) {
  if (ctx.common->json_path.empty()) return;
  summary["command"] = ctx.sub->get_name();
  summary["schema"] = kSchema;
  std::ofstream f(ctx.common->json_path, std::ios::binary);
  if (!f) throw DomainError("cannot open JSON output '" + ctx.common->json_path + "'");
  f << summary.dump(2) << "\n";
}

std::string flag(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------

struct RootsOpts {
  std::vector<double> sigma;
  std::vector<double> r;
};

int cmd_roots(const Context& ctx, const RootsOpts& o) {
  if (o.sigma.empty() == o.r.empty()) throw CLI::ValidationError("roots", "give exactly one of --sigma or --r");
  std::vector<SymbolPoint> pts;
  for (double s : o.sigma) pts.push_back(symbol_from_sigma(s));
  for (double r : o.r) pts.push_back(symbol_at(r));

  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "r,sigma,rho,regime,lambda_plus_re,lambda_plus_im,lambda_minus_re,lambda_minus_im,a,b\n";
  json rows = json::array();
  for (const auto& p : pts) {
    const RootPair rp = roots_at(p);
    os << num(p.r) << ',' << num(p.sigma) << ',' << num(p.rho) << ',' << to_string(p.regime) << ','
       << num(rp.lambda_plus.real()) << ',' << num(rp.lambda_plus.imag()) << ',' << num(rp.lambda_minus.real()) << ','
       << num(rp.lambda_minus.imag()) << ',' << num(rp.a) << ',' << num(rp.b) << '\n';
    if (p.regime == Regime::Degenerate) {
      std::cerr << fmt::format("sigma = {}: lambda = {} (double)\n", p.sigma, rp.lambda_plus.real());
    } else if (p.regime == Regime::Complex) {
      std::cerr << fmt::format("sigma = {}: lambda = {} +/- {} i\n", p.sigma, rp.lambda_plus.real(), rp.b);
    } else {
      std::cerr << fmt::format("sigma = {}: lambda = {}, {}\n", p.sigma, rp.lambda_plus.real(), rp.lambda_minus.real());
    }
    rows.push_back({{"sigma", p.sigma}, {"regime", to_string(p.regime)}, {"lambda_plus", rp.lambda_plus.real()},
                    {"lambda_minus", rp.lambda_minus.real()}, {"b", rp.b}});
  }
  write_json(ctx, {{"roots", rows}});
  return kExitOk;
}

struct ModeOpts {
  double sigma = 1.0;
  double u0_re = 0.0, u0_im = 0.0, u1_re = 1.0, u1_im = 0.0;
  double dt = 1e-3;
  TGrid grid;
};

int cmd_mode(const Context& ctx, const ModeOpts& o) {
  const SymbolPoint p = symbol_from_sigma(o.sigma);
  const ModeClosedForm m = ModeClosedForm::make(p, {o.u0_re, o.u0_im}, {o.u1_re, o.u1_im});
  const auto ts = o.grid.resolve();
  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "t,value_re,value_im,velocity_re,velocity_im,oracle_re,oracle_im,e0,e,f,rr\n";
  double worst = 0.0;
  for (double t : ts) {
    const ModeState s = mode_evaluate(m, t);
    const std::complex<double> oracle = ode_oracle(p, m.u0_hat, m.u1_hat, t, o.dt);
    const EnergyDensity d = energy_density(p, s);
    worst = std::max(worst, std::abs(oracle - s.value) / (1.0 + std::abs(s.value)));
    os << num(t) << ',' << num(s.value.real()) << ',' << num(s.value.imag()) << ',' << num(s.velocity.real()) << ','
       << num(s.velocity.imag()) << ',' << num(oracle.real()) << ',' << num(oracle.imag()) << ',' << num(d.e0) << ','
       << num(d.e) << ',' << num(d.f) << ',' << num(d.rr) << '\n';
  }
  write_json(ctx, {{"sigma", o.sigma}, {"regime", to_string(p.regime)}, {"max_oracle_mismatch", worst}});
  return kExitOk;
}

struct PointwiseOpts {
  double sigma_min = 1e-2, sigma_max = 1e2;
  int sigma_points = 40;
  double t_min = 0.1, t_max = 50.0;
  int t_points = 40;
  bool violations_only = false;
};

int cmd_verify_pointwise(const Context& ctx, const PointwiseOpts& o) {
  const auto sigmas = log_grid(o.sigma_min, o.sigma_max, o.sigma_points);
  TGrid tg;
  tg.tmin = o.t_min;
  tg.tmax = o.t_max;
  tg.points = o.t_points;
  tg.linear = true;
  const auto ts = tg.resolve();
  const std::complex<double> data[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};

  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "sigma,t,u0,u1,lhs6,rhs6,lhs7,rhs7,pass\n";
  long checked = 0, violations = 0;
  for (double s : sigmas) {
    const SymbolPoint p = symbol_from_sigma(s);
    for (const auto& d : data) {
      const ModeClosedForm m = ModeClosedForm::make(p, d[0], d[1]);
      for (double t : ts) {
        const PointwiseCheck c = check_pointwise_estimates(m, t);
        ++checked;
        if (!c.pass) {
          ++violations;
          std::cerr << fmt::format("violation at sigma={} t={} u0={} u1={}\n", s, t, d[0].real(), d[1].real());
        }
        if (o.violations_only && c.pass) continue;
        os << num(s) << ',' << num(t) << ',' << num(d[0].real()) << ',' << num(d[1].real()) << ',' << num(c.lhs6) << ','
           << num(c.rhs6) << ',' << num(c.lhs7) << ',' << num(c.rhs7) << ',' << flag(c.pass) << '\n';
      }
    }
  }
  write_json(ctx, {{"checked", checked}, {"violations", violations}, {"pass", violations == 0}});
  return violations == 0 ? kExitOk : kExitVerificationFailed;
}

struct IntegralOpts {
  std::string kind = "Ip";
  double p = 1.0;
  double eta = 0.5;
  double tail_scale = 1.0;
  std::vector<double> t{2.0};
  Tolerances tol;
};

int cmd_integral(const Context& ctx, const IntegralOpts& o) {
  const IntegralKind kind = parse_integral_kind(o.kind);
  std::vector<QuadratureResult> res(o.t.size());
  std::vector<IntegralSpec> specs;
  for (double t : o.t) {
    IntegralSpec s{kind, o.p, t, o.eta, o.tol, o.tail_scale};
    validate(s);
    specs.push_back(s);
  }
  parallel_for(specs.size(), [&](std::size_t i) { res[i] = integrate(specs[i]); });

  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "kind,p_or_n,t,value,error_estimate,nodes,converged\n";
  bool ok = true;
  json rows = json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    os << to_string(kind) << ',' << num(o.p) << ',' << num(o.t[i]) << ',' << num(r.value) << ',' << num(r.abs_error_estimate)
       << ',' << r.nodes_used << ',' << flag(r.converged) << '\n';
    if (!r.converged) {
      ok = false;
      std::cerr << fmt::format("{} did not converge at t={} (estimate {} +/- {}, {} nodes)\n", to_string(kind), o.t[i], r.value,
                               r.abs_error_estimate, r.nodes_used);
    }
    rows.push_back({{"t", o.t[i]}, {"value", r.value}, {"error_estimate", r.abs_error_estimate},
                    {"nodes", r.nodes_used}, {"converged", r.converged}});
  }
  write_json(ctx, {{"kind", to_string(kind)}, {"p_or_n", o.p}, {"results", rows}, {"pass", ok}});
  return ok ? kExitOk : kExitVerificationFailed;
}

struct RatioOpts {
  std::string kind = "Ip";
  double p = 1.0;
  TGrid grid{{}, 1e2, 1e5, 13};
  Tolerances tol;
};

int cmd_ratio(const Context& ctx, const RatioOpts& o) {
  const auto ts = o.grid.resolve();
  std::vector<RatioPoint> pts;
  if (o.kind == "Ip") {
    pts = ip_ratio_curve(o.p, ts, o.tol);
  } else if (o.kind == "Jp") {
    pts = jp_ratio_curve(o.p, ts, o.tol);
  } else {
    throw CLI::ValidationError("--kind", "ratio curves exist for Ip and Jp only");
  }
  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "kind,p,t,ratio,converged\n";
  std::vector<CompensatedPoint> cps;
  bool ok = true;
  for (const auto& p : pts) {
    os << o.kind << ',' << num(o.p) << ',' << num(p.t) << ',' << num(p.ratio) << ',' << flag(p.converged) << '\n';
    cps.push_back({p.t, p.ratio, p.ratio, p.converged});
    ok = ok && p.converged;
  }
  write_json(ctx, {{"kind", o.kind}, {"p", o.p}, {"last_decade_variation", last_decade_variation(cps)}, {"converged", ok}});
  return ok ? kExitOk : kExitVerificationFailed;
}

struct SandwichOpts {
  std::string claim = "P61";
  double param = 3.0;
  TGrid grid{{}, 1e3, 1e5, 9};
  Tolerances tol;
};

int cmd_sandwich(const Context& ctx, const SandwichOpts& o) {
  const Claim claim = parse_claim(o.claim);
  const auto ts = o.grid.resolve();
  const SandwichReport rep = verify_sandwich(claim, ts, o.param, o.tol);
  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "claim,t,raw,compensated,lower,upper,pass\n";
  json rows = json::array();
  for (const auto& v : rep.values) {
    const bool in_band = v.converged && v.compensated >= rep.lower_coef && v.compensated <= rep.upper_coef;
    os << to_string(claim) << ',' << num(v.t) << ',' << num(v.raw) << ',' << num(v.compensated) << ',' << num(rep.lower_coef)
       << ',' << num(rep.upper_coef) << ',' << flag(in_band) << '\n';
    rows.push_back({{"t", v.t}, {"raw", v.raw}, {"compensated", v.compensated}, {"converged", v.converged}});
  }
  if (!rep.pass) std::cerr << "sandwich " << to_string(claim) << " failed: " << rep.note << "\n";
  write_json(ctx, {{"claim", to_string(claim)},
                   {"parameter", rep.parameter},
                   {"lower_coef", rep.lower_coef},
                   {"upper_coef", rep.upper_coef},
                   {"empirical_upper", rep.empirical_upper},
                   {"last_decade_variation", rep.last_decade_variation},
                   {"values", rows},
                   {"pass", rep.pass}});
  return rep.pass ? kExitOk : kExitVerificationFailed;
}

json fit_json(const RateFit& f) {
  return {{"exponent", f.exponent}, {"amplitude", f.amplitude}, {"r_squared", f.r_squared},
          {"t_min", f.t_min},       {"t_max", f.t_max},         {"n_points", f.n_points}};
}

struct ProfileOpts {
  int n = 1;
  DataOpts data;
  double delta = kDefaultProfileDelta;
  TGrid grid{{10.0, 20.0, 40.0, 80.0, 160.0}};
  std::optional<double> max_slope;
  Tolerances tol;
};

int cmd_profile_error(const Context& ctx, const ProfileOpts& o) {
  const InitialDatum d = o.data.make(o.n);
  validate(d);
  const auto ts = o.grid.resolve();
  std::vector<ProfileErrorReport> reps(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { reps[i] = profile_error(d, ts[i], o.delta, o.tol); });

  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "family,n,t,delta,low_err_sq,high_err_sq,total_err,i0,p1\n";
  bool ok = true;
  std::vector<std::pair<double, double>> samples;
  for (const auto& r : reps) {
    os << to_string(d.family) << ',' << d.dim << ',' << num(r.t) << ',' << num(r.delta) << ',' << num(r.low_freq_error_sq)
       << ',' << num(r.high_freq_error_sq) << ',' << num(r.total_error()) << ',' << num(r.i0) << ',' << num(r.p1) << '\n';
    if (!r.converged) {
      ok = false;
      std::cerr << fmt::format("profile error quadrature did not converge at t={}\n", r.t);
    }
    if (r.total_error() > 0.0) samples.emplace_back(r.t, r.total_error());
  }
  json summary{{"family", to_string(d.family)}, {"n", d.dim}, {"delta", o.delta},
               {"plancherel_factor", reps.empty() ? 0.0 : reps.front().plancherel_factor}};
  if (samples.size() >= 3) {
    const RateFit fit = fit_rate(samples);
    summary["fit"] = fit_json(fit);
    summary["reference_exponent"] = -0.25 * d.dim;
    if (o.max_slope && fit.exponent > *o.max_slope) {
      ok = false;
      std::cerr << fmt::format("fitted slope {} exceeds {}\n", fit.exponent, *o.max_slope);
    }
  }
  summary["pass"] = ok;
  write_json(ctx, summary);
  return ok ? kExitOk : kExitVerificationFailed;
}

struct SolveOpts {
  int n = 1;
  double half_length = 80.0;
  std::size_t points = 4096;
  DataOpts data;
  std::string u0 = "zero";
  double tmax = 50.0;
  int steps = 50;
};

int cmd_solve(const Context& ctx, const SolveOpts& o) {
  const GridSpec g{o.n, o.half_length, o.points};
  validate(g);
  const InitialDatum d = o.data.make(o.n);
  if (o.u0 != "zero" && o.u0 != "same") throw CLI::ValidationError("--u0", "must be zero or same");
  if (o.steps < 1 || !(o.tmax >= 0.0)) throw CLI::ValidationError("--steps", "need steps >= 1 and tmax >= 0");
  const Field f1 = sample(g, d);
  const Field f0 = o.u0 == "same" ? f1 : Field::zeros(g);
  const SpectralEvolver ev(f0, f1);
  double radius = support_radius(d);
  const double horizon = trusted_horizon(g, radius);

  std::vector<SolutionNorms> out(static_cast<std::size_t>(o.steps) + 1);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = ev.norms_at(o.tmax * static_cast<double>(i) / o.steps, true); });

  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "# trusted_horizon = " << num(horizon) << "\n";
  os << "t,l2_u,energy,linf_u\n";
  bool monotone = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& s = out[i];
    os << num(s.t) << ',' << num(s.l2_u) << ',' << num(s.energy) << ',' << num(s.linf_u) << '\n';
    if (i > 0 && s.energy > out[i - 1].energy * (1.0 + 1e-10)) {
      monotone = false;
      std::cerr << fmt::format("energy increased between t={} and t={}\n", out[i - 1].t, s.t);
    }
  }
  if (o.tmax > horizon) {
    std::cerr << fmt::format("warning: results beyond t = {:.4g} are affected by the periodic box (L = {})\n", horizon,
                             o.half_length);
  }
  json summary{{"trusted_horizon", horizon}, {"energy_nonincreasing", monotone}, {"pass", monotone}};
  std::vector<std::pair<double, double>> e, l;
  for (const auto& s : out) {
    if (s.t > 0.0 && s.t <= horizon) {
      e.emplace_back(s.t, s.energy);
      l.emplace_back(s.t, s.l2_u);
    }
  }
  if (e.size() >= 3) {
    summary["energy_fit"] = fit_json(fit_rate(e));
    summary["l2_fit"] = fit_json(fit_rate(l));
  }
  write_json(ctx, summary);
  return monotone ? kExitOk : kExitVerificationFailed;
}

struct RatesOpts {
  int n = 3;
  std::string backend = "radial";
  DataOpts data;
  std::string u0 = "zero";
  TGrid grid{{}, 1e2, 1e5, 13};
  double fit_tmin = 0.0;
  double fit_tmax = std::numeric_limits<double>::infinity();
  double half_length = 80.0;
  std::size_t points = 4096;
  std::optional<double> max_energy_exponent;
  std::optional<double> expect_l2;
  double l2_tol = 0.05;
  Tolerances tol;
};

int cmd_rates(const Context& ctx, const RatesOpts& o) {
  const InitialDatum d = o.data.make(o.n);
  if (o.u0 != "zero" && o.u0 != "same") throw CLI::ValidationError("--u0", "must be zero or same");
  SweepOptions so;
  so.backend = parse_backend(o.backend);
  so.grid = GridSpec{o.n, o.half_length, o.points};
  so.fit_t_min = o.fit_tmin;
  so.fit_t_max = o.fit_tmax;
  so.tol = o.tol;
  const auto ts = o.grid.resolve();
  const EnergySweep sw = energy_rate_sweep(o.u0 == "same" ? &d : nullptr, d, ts, so);

  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "t,l2_u,energy,linf_u\n";
  // The radial backend has no physical-space field, so the sup norm is not available.
  const bool have_linf = so.backend == Backend::Solver;
  for (const auto& s : sw.samples) {
    os << num(s.t) << ',' << num(s.l2_u) << ',' << num(s.energy) << ',' << (have_linf ? num(s.linf_u) : "nan") << '\n';
  }

  bool ok = sw.converged && sw.energy_nonincreasing;
  if (!sw.converged) std::cerr << "some radial quadratures did not converge\n";
  if (!sw.energy_nonincreasing) std::cerr << "energy is not nonincreasing over the sweep\n";
  if (o.max_energy_exponent && sw.energy_fit.exponent > *o.max_energy_exponent) {
    ok = false;
    std::cerr << fmt::format("energy exponent {} exceeds {}\n", sw.energy_fit.exponent, *o.max_energy_exponent);
  }
  if (o.expect_l2 && std::abs(sw.l2_fit.exponent - *o.expect_l2) > o.l2_tol) {
    ok = false;
    std::cerr << fmt::format("l2 exponent {} differs from {} by more than {}\n", sw.l2_fit.exponent, *o.expect_l2, o.l2_tol);
  }
  json summary{{"n", o.n},
               {"backend", o.backend},
               {"energy_fit", fit_json(sw.energy_fit)},
               {"l2_fit", fit_json(sw.l2_fit)},
               {"energy_nonincreasing", sw.energy_nonincreasing},
               {"converged", sw.converged},
               {"pass", ok}};
  if (std::isfinite(sw.trusted_horizon)) summary["trusted_horizon"] = sw.trusted_horizon;
  write_json(ctx, summary);
  return ok ? kExitOk : kExitVerificationFailed;
}

// Compact end-to-end check of the main claims at reduced sizes.
int cmd_report(const Context& ctx) {
  struct Row {
    std::string check;
    bool pass;
    std::string detail;
  };
  std::vector<Row> rows;

  {
    long violations = 0;
    for (double s : log_grid(1e-2, 1e2, 20)) {
      const SymbolPoint p = symbol_from_sigma(s);
      for (auto [a, b] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}) {
        const ModeClosedForm m = ModeClosedForm::make(p, a, b);
        for (int k = 0; k <= 20; ++k) violations += !check_pointwise_estimates(m, 0.1 + 49.9 * k / 20.0).pass;
      }
    }
    rows.push_back({"pointwise", violations == 0, fmt::format("violations={}", violations)});
  }
  for (auto [claim, param] : {std::pair{Claim::P61, 0.0}, {Claim::P62, 0.0}}) {
    const auto grid = log_grid(1e3, 1e5, 5);
    const SandwichReport r = verify_sandwich(claim, grid, param);
    double lo = r.values.front().compensated, hi = lo;
    for (const auto& v : r.values) {
      lo = std::min(lo, v.compensated);
      hi = std::max(hi, v.compensated);
    }
    rows.push_back({std::string(to_string(claim)), r.pass, fmt::format("compensated in [{:.6g}, {:.6g}]", lo, hi)});
  }
  {
    const SandwichReport r = verify_sandwich(Claim::P51, log_grid(1e2, 1e4, 9), 3.0);
    rows.push_back({"P51", r.pass, fmt::format("last-decade variation {:.3g}", r.last_decade_variation)});
  }
  {
    double worst = 0.0;
    for (double t : log_grid(1.0 + 1e-9, 1e6, 50)) {
      worst = std::max(worst, std::abs(integrate({IntegralKind::CosOverY, 0.0, t, 0.5, {}, 1.0}).value));
    }
    rows.push_back({"cosine_bound", worst <= 1.0, fmt::format("max |integral| = {:.6g}", worst)});
  }
  {
    const InitialDatum d = InitialDatum::gaussian(1.0, 1.0, 3);
    std::vector<std::pair<double, double>> s;
    for (double t : {10.0, 20.0, 40.0, 80.0, 160.0}) s.emplace_back(t, profile_error(d, t).total_error());
    const RateFit f = fit_rate(s);
    rows.push_back({"profile_n3", f.exponent <= -0.70, fmt::format("slope {:.4f}", f.exponent)});
  }
  {
    const InitialDatum d = InitialDatum::gaussian(1.0, 1.0, 1);
    SweepOptions so;
    so.backend = Backend::Solver;
    so.fit_t_min = 2.0;
    std::vector<double> ts{0.0};
    for (double t : log_grid(1.0, 35.0, 12)) ts.push_back(t);
    const EnergySweep sw = energy_rate_sweep(&d, d, ts, so);
    rows.push_back({"energy_n1", sw.energy_nonincreasing && sw.energy_fit.exponent <= -0.4,
                    fmt::format("slope {:.4f}", sw.energy_fit.exponent)});
  }

  Sink sink(ctx.common->out);
  auto& os = sink.os();
  write_header(os, ctx);
  os << "check,pass,detail\n";
  bool ok = true;
  json checks = json::array();
  for (const auto& r : rows) {
    os << r.check << ',' << flag(r.pass) << ',' << r.detail << '\n';
    checks.push_back({{"check", r.check}, {"pass", r.pass}, {"detail", r.detail}});
    ok = ok && r.pass;
  }
  write_json(ctx, {{"checks", checks}, {"pass", ok}});
  return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for u_tt + L u + L u_t = 0 with L = log(I - Laplacian)", "logevo"};
  app.allow_config_extras(false);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file (must contain schema = \"logevo/1\")");
  app.require_subcommand(1);

  Common common;
  app.add_option("--out,-o", common.out, "CSV output path (default: stdout)");
  app.add_option("--json", common.json_path, "Write a JSON summary to this path");
  app.add_flag("--no-timestamp", common.no_timestamp, "Omit the timestamp header line");
  app.add_option("--threads", common.threads, "Worker threads (default: LOGEVO_THREADS or all cores)");
  auto* schema_opt = app.add_option("--schema", common.schema, "Config schema tag")->capture_default_str();

  RootsOpts roots;
  auto* s_roots = app.add_subcommand("roots", "Characteristic roots at given sigma or |xi|");
  s_roots->add_option("--sigma", roots.sigma, "Symbol values")->delimiter(',');
  s_roots->add_option("--r", roots.r, "Frequency magnitudes")->delimiter(',');

  ModeOpts mode;
  auto* s_mode = app.add_subcommand("mode", "Closed-form evolution of one Fourier mode with the RK4 cross-check");
  s_mode->add_option("--sigma", mode.sigma, "Symbol value")->capture_default_str();
  s_mode->add_option("--u0-re", mode.u0_re)->capture_default_str();
  s_mode->add_option("--u0-im", mode.u0_im)->capture_default_str();
  s_mode->add_option("--u1-re", mode.u1_re)->capture_default_str();
  s_mode->add_option("--u1-im", mode.u1_im)->capture_default_str();
  s_mode->add_option("--dt", mode.dt, "RK4 step of the oracle")->capture_default_str();
  mode.grid = TGrid{{}, 0.0, 10.0, 11, true};
  add_grid(s_mode, mode.grid);

  IntegralOpts integral;
  auto* s_int = app.add_subcommand("integral", "Evaluate one of the radial integrals");
  s_int->add_option("--kind", integral.kind, "Ip, Jp, Middle, ScriptI or CosOverY")->capture_default_str();
  s_int->add_option("--p,--n", integral.p, "p for Ip/Jp/Middle, n for ScriptI")->capture_default_str();
  s_int->add_option("--t", integral.t, "Times")->delimiter(',')->capture_default_str();
  s_int->add_option("--eta", integral.eta, "Lower limit of the Middle integral")->capture_default_str();
  s_int->add_option("--tail-scale", integral.tail_scale, "Multiplier on the tail cutoff")->capture_default_str();
  add_tolerances(s_int, integral.tol);

  RatioOpts ratio;
  auto* s_ratio = app.add_subcommand("ratio", "Compensated ratio curves of I_p and J_p");
  s_ratio->add_option("--kind", ratio.kind, "Ip or Jp")->capture_default_str();
  s_ratio->add_option("--p", ratio.p)->capture_default_str();
  add_grid(s_ratio, ratio.grid);
  add_tolerances(s_ratio, ratio.tol);

  SandwichOpts sandwich;
  auto* s_sand = app.add_subcommand("sandwich", "Two-sided bound checks on compensated integrals");
  s_sand->add_option("--claim", sandwich.claim, "P51, P61, P62, L21 or L22")->capture_default_str();
  s_sand->add_option("--param,--n,--p", sandwich.param, "n for P51, p for L21/L22")->capture_default_str();
  add_grid(s_sand, sandwich.grid);
  add_tolerances(s_sand, sandwich.tol);

  ProfileOpts profile;
  auto* s_prof = app.add_subcommand("profile-error", "Frequency-side distance to the asymptotic profile (u0 = 0)");
  s_prof->add_option("--n", profile.n, "Dimension")->capture_default_str();
  add_data(s_prof, profile.data);
  s_prof->add_option("--delta", profile.delta, "Low/high frequency split")->capture_default_str();
  s_prof->add_option("--max-slope", profile.max_slope, "Fail if the fitted slope exceeds this");
  add_grid(s_prof, profile.grid);
  add_tolerances(s_prof, profile.tol);

  SolveOpts solve;
  auto* s_solve = app.add_subcommand("solve", "FFT solver on the periodic box [-L, L)^n");
  s_solve->add_option("--n", solve.n, "Dimension")->capture_default_str();
  s_solve->add_option("--L", solve.half_length, "Half length of the box")->capture_default_str();
  s_solve->add_option("--N", solve.points, "Points per axis (power of two)")->capture_default_str();
  add_data(s_solve, solve.data);
  s_solve->add_option("--u0", solve.u0, "zero or same (u0 = u1)")->capture_default_str();
  s_solve->add_option("--tmax", solve.tmax, "Final time")->capture_default_str();
  s_solve->add_option("--steps", solve.steps, "Number of output intervals")->capture_default_str();

  RatesOpts rates;
  auto* s_rates = app.add_subcommand("rates", "Energy and L2 decay/growth rate sweeps");
  s_rates->add_option("--n", rates.n, "Dimension")->capture_default_str();
  s_rates->add_option("--backend", rates.backend, "radial or solver")->capture_default_str();
  add_data(s_rates, rates.data);
  s_rates->add_option("--u0", rates.u0, "zero or same (u0 = u1)")->capture_default_str();
  add_grid(s_rates, rates.grid);
  s_rates->add_option("--fit-tmin", rates.fit_tmin)->capture_default_str();
  s_rates->add_option("--fit-tmax", rates.fit_tmax);
  s_rates->add_option("--L", rates.half_length, "Solver box half length")->capture_default_str();
  s_rates->add_option("--N", rates.points, "Solver points per axis")->capture_default_str();
  s_rates->add_option("--max-energy-exponent", rates.max_energy_exponent, "Fail if the energy exponent exceeds this");
  s_rates->add_option("--expect-l2", rates.expect_l2, "Expected L2 exponent");
  s_rates->add_option("--l2-tol", rates.l2_tol, "Tolerance on the L2 exponent")->capture_default_str();
  add_tolerances(s_rates, rates.tol);

  PointwiseOpts pointwise;
  auto* s_pw = app.add_subcommand("verify-pointwise", "Sweep the factor-6 pointwise decay bounds");
  s_pw->add_option("--sigma-min", pointwise.sigma_min)->capture_default_str();
  s_pw->add_option("--sigma-max", pointwise.sigma_max)->capture_default_str();
  s_pw->add_option("--sigma-points", pointwise.sigma_points)->capture_default_str();
  s_pw->add_option("--t-min", pointwise.t_min)->capture_default_str();
  s_pw->add_option("--t-max", pointwise.t_max)->capture_default_str();
  s_pw->add_option("--t-points", pointwise.t_points)->capture_default_str();
  s_pw->add_flag("--violations-only", pointwise.violations_only, "Only write failing samples");

  auto* s_report = app.add_subcommand("report", "Run a compact set of checks and summarise pass/fail");

  try {
    app.parse(argc, argv);
    if (common.schema != kSchema) {
      throw CLI::ValidationError("--schema", "unsupported schema '" + common.schema + "', expected " + kSchema);
    }
    if (app.get_option("--config")->count() > 0 && schema_opt->count() == 0) {
      throw CLI::ValidationError("--config", std::string("config file must declare schema = \"") + kSchema + "\"");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  int threads = common.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("LOGEVO_THREADS")) threads = std::atoi(env);
  }
  set_thread_count(threads);

  Context ctx{&app, app.get_subcommands().front(), &common};
  try {
    if (ctx.sub == s_roots) return cmd_roots(ctx, roots);
    if (ctx.sub == s_mode) return cmd_mode(ctx, mode);
    if (ctx.sub == s_int) return cmd_integral(ctx, integral);
    if (ctx.sub == s_ratio) return cmd_ratio(ctx, ratio);
    if (ctx.sub == s_sand) return cmd_sandwich(ctx, sandwich);
    if (ctx.sub == s_prof) return cmd_profile_error(ctx, profile);
    if (ctx.sub == s_solve) return cmd_solve(ctx, solve);
    if (ctx.sub == s_rates) return cmd_rates(ctx, rates);
    if (ctx.sub == s_pw) return cmd_verify_pointwise(ctx, pointwise);
    if (ctx.sub == s_report) return cmd_report(ctx);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  return kExitUsage;
}

}  // namespace logevo::cli
