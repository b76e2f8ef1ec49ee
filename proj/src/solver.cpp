#include "logevo/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "logevo/error.hpp"
#include "logevo/kernels.hpp"

namespace logevo {

std::size_t GridSpec::total_points() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= points_per_dim;
  return n;
}

double GridSpec::frequency_step() const { return std::numbers::pi / half_length; }

void validate(const GridSpec& g) {
  if (g.dim < 1 || g.dim > 3) throw DomainError("grid: dim must be 1, 2 or 3, got " + std::to_string(g.dim));
  if (!(g.half_length > 0.0) || !std::isfinite(g.half_length)) throw DomainError("grid: half_length must be positive");
  const std::size_t n = g.points_per_dim;
  if (n < 2 || (n & (n - 1)) != 0) throw DomainError("grid: points_per_dim must be a power of two >= 2, got " + std::to_string(n));
  if (g.dim == 3 && n > 256) throw DomainError("grid: 3-d grids are limited to 256 points per axis");
  if (g.dim == 2 && n > 8192) throw DomainError("grid: 2-d grids are limited to 8192 points per axis");
  if (g.dim == 1 && n > (std::size_t{1} << 24)) throw DomainError("grid: 1-d grids are limited to 2^24 points");
}

Field Field::zeros(const GridSpec& g, Space space) {
  validate(g);
  Field f;
  f.grid = g;
  f.space = space;
  if (space == Space::Physical) {
    f.physical.assign(g.total_points(), 0.0);
  } else {
    f.spectral.assign(g.total_points(), {0.0, 0.0});
  }
  return f;
}

namespace {

std::mutex planner_mutex;  // the FFTW planner is not thread safe

void fft_inplace(const GridSpec& g, std::vector<std::complex<double>>& data, int sign) {
  int dims[3];
  for (int i = 0; i < g.dim; ++i) dims[i] = static_cast<int>(g.points_per_dim);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft(g.dim, dims, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw UnsupportedError("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(plan);
}

// Multiplies by (-1)^(m1 + ... + mn), the phase of the shift x_0 = -L, and by scale.
void apply_checkerboard(const GridSpec& g, std::vector<std::complex<double>>& data, double scale) {
  const std::size_t n = g.points_per_dim;
  const std::size_t total = data.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    std::size_t parity = 0;
    for (int d = 0; d < g.dim; ++d) {
      parity += rest % n;
      rest /= n;
    }
    data[idx] *= (parity & 1) ? -scale : scale;
  }
}

std::size_t mirror_index(const GridSpec& g, std::size_t idx) {
  const std::size_t n = g.points_per_dim;
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int d = 0; d < g.dim; ++d) {
    const std::size_t m = idx % n;
    idx /= n;
    out += ((n - m) % n) * stride;
    stride *= n;
  }
  return out;
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid == b.grid)) throw DomainError(std::string(what) + ": fields live on different grids");
}

}  // namespace

Field to_spectral(const Field& f) {
  validate(f.grid);
  if (f.space == Space::Spectral) return f;
  if (f.physical.size() != f.grid.total_points()) throw DomainError("to_spectral: field size does not match its grid");
  Field out;
  out.grid = f.grid;
  out.space = Space::Spectral;
  out.spectral.assign(f.physical.begin(), f.physical.end());
  fft_inplace(f.grid, out.spectral, FFTW_FORWARD);
  apply_checkerboard(f.grid, out.spectral, std::pow(f.grid.spacing(), f.grid.dim));
  return out;
}

Field to_physical(const Field& f) {
  validate(f.grid);
  if (f.space == Space::Physical) return f;
  if (f.spectral.size() != f.grid.total_points()) throw DomainError("to_physical: field size does not match its grid");
  std::vector<std::complex<double>> work = f.spectral;
  apply_checkerboard(f.grid, work, std::pow(2.0 * f.grid.half_length, -f.grid.dim));
  fft_inplace(f.grid, work, FFTW_BACKWARD);
  Field out;
  out.grid = f.grid;
  out.space = Space::Physical;
  out.physical.resize(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) out.physical[i] = work[i].real();
  return out;
}

double conjugate_symmetry_error(const Field& f) {
  if (f.space != Space::Spectral) throw DomainError("conjugate_symmetry_error: spectral field required");
  double worst = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < f.spectral.size(); ++i) {
    peak = std::max(peak, std::abs(f.spectral[i]));
    worst = std::max(worst, std::abs(f.spectral[i] - std::conj(f.spectral[mirror_index(f.grid, i)])));
  }
  return peak > 0.0 ? worst / peak : 0.0;
}

std::vector<double> grid_symbol(const GridSpec& g) {
  validate(g);
  const std::size_t n = g.points_per_dim;
  const double dk = g.frequency_step();
  std::vector<double> xi2(g.total_points());
  for (std::size_t idx = 0; idx < xi2.size(); ++idx) {
    std::size_t rest = idx;
    double sum = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      const std::size_t m = rest % n;
      rest /= n;
      const double k = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
      sum += (k * dk) * (k * dk);
    }
    xi2[idx] = std::sqrt(sum);
  }
  kernels::active().log1p_square(xi2, xi2);
  return xi2;
}

Field sample(const GridSpec& g, const InitialDatum& d) {
  validate(g);
  validate(d);
  if (d.dim != g.dim) throw DomainError("sample: datum dimension does not match the grid");
  Field f = Field::zeros(g);
  const std::size_t n = g.points_per_dim;
  const double dx = g.spacing();
  for (std::size_t idx = 0; idx < f.physical.size(); ++idx) {
    std::size_t rest = idx;
    double r2 = 0.0;
    for (int k = 0; k < g.dim; ++k) {
      const double x = -g.half_length + static_cast<double>(rest % n) * dx;
      rest /= n;
      r2 += x * x;
    }
    const double r = std::sqrt(r2);
    double v = 0.0;
    switch (d.family) {
      case DataFamily::Gaussian:
        v = d.amplitude * std::exp(-r2 / (d.width * d.width));
        break;
      case DataFamily::BallIndicator:
        v = r < d.width ? d.amplitude : 0.0;
        break;
      case DataFamily::Custom: {
        const auto it = std::upper_bound(d.radii.begin(), d.radii.end(), r);
        if (it != d.radii.end()) {
          const std::size_t i = static_cast<std::size_t>(it - d.radii.begin()) - 1;
          const double w = (r - d.radii[i]) / (d.radii[i + 1] - d.radii[i]);
          v = d.amplitude * ((1.0 - w) * d.values[i] + w * d.values[i + 1]);
        }
        break;
      }
    }
    f.physical[idx] = v;
  }
  return f;
}

SpectralEvolver::SpectralEvolver(const Field& u0, const Field& u1) {
  require_same_grid(u0, u1, "SpectralEvolver");
  grid_ = u0.grid;
  u0_hat_ = to_spectral(u0).spectral;
  u1_hat_ = to_spectral(u1).spectral;
  sigma_ = grid_symbol(grid_);
}

std::pair<Field, Field> SpectralEvolver::spectral_at(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolve: t must be nonnegative, got " + std::to_string(t));
  const std::size_t n = sigma_.size();
  std::vector<double> s(n), sp(n);
  kernels::active().mode_basis(t, sigma_, s, sp);
  Field u = Field::zeros(grid_, Space::Spectral);
  Field ut = Field::zeros(grid_, Space::Spectral);
  for (std::size_t i = 0; i < n; ++i) {
    const double sg = sigma_[i];
    u.spectral[i] = u1_hat_[i] * s[i] + u0_hat_[i] * (sp[i] + sg * s[i]);
    ut.spectral[i] = u1_hat_[i] * sp[i] - u0_hat_[i] * (sg * s[i]);
  }
  return {std::move(u), std::move(ut)};
}

std::pair<Field, Field> SpectralEvolver::evolve(double t) const {
  auto [u, ut] = spectral_at(t);
  return {to_physical(u), to_physical(ut)};
}

SolutionNorms SpectralEvolver::norms_at(double t, bool with_linf) const {
  const auto [u, ut] = spectral_at(t);
  const kernels::SpectralSums sums = kernels::active().spectral_sums(sigma_, u.spectral, ut.spectral);
  const double cell = std::pow(2.0 * grid_.half_length, -grid_.dim);
  SolutionNorms out;
  out.t = t;
  out.l2_u = std::sqrt(sums.u_sq * cell);
  out.energy = 0.5 * (sums.ut_sq + sums.sigma_u_sq) * cell;
  if (with_linf) {
    const Field phys = to_physical(u);
    for (double v : phys.physical) out.linf_u = std::max(out.linf_u, std::abs(v));
  }
  return out;
}

double SpectralEvolver::profile_deviation(double t, double p1) const {
  if (!(t > 0.0)) throw DomainError("profile_deviation: t must be positive");
  const auto [u, ut] = spectral_at(t);
  std::vector<double> d(sigma_.size());
  kernels::active().damped_sinc(t, sigma_, d);
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) sum += std::norm(u.spectral[i] - p1 * d[i]);
  return std::sqrt(sum * std::pow(2.0 * grid_.half_length, -grid_.dim));
}

std::pair<Field, Field> evolve(const GridSpec& g, const Field& u0, const Field& u1, double t) {
  validate(g);
  if (!(u0.grid == g) || !(u1.grid == g)) throw DomainError("evolve: fields do not live on the given grid");
  return SpectralEvolver(u0, u1).evolve(t);
}

SolutionNorms norms(const Field& u, const Field& ut) {
  require_same_grid(u, ut, "norms");
  const Field uh = to_spectral(u);
  const Field uth = to_spectral(ut);
  const std::vector<double> sigma = grid_symbol(u.grid);
  const kernels::SpectralSums sums = kernels::active().spectral_sums(sigma, uh.spectral, uth.spectral);
  const double cell = std::pow(2.0 * u.grid.half_length, -u.grid.dim);
  SolutionNorms out;
  out.l2_u = std::sqrt(sums.u_sq * cell);
  out.energy = 0.5 * (sums.ut_sq + sums.sigma_u_sq) * cell;
  const Field up = to_physical(u);
  for (double v : up.physical) out.linf_u = std::max(out.linf_u, std::abs(v));
  return out;
}

double trusted_horizon(const GridSpec& g, double radius) {
  return std::max(0.0, 0.5 * g.half_length - radius);
}

double support_radius(const InitialDatum& d) {
  validate(d);
  switch (d.family) {
    case DataFamily::Gaussian:
      return d.width * std::sqrt(std::log(1e8));
    case DataFamily::BallIndicator:
      return d.width;
    case DataFamily::Custom:
      return d.radii.back();
  }
  return d.width;
}

}  // namespace logevo
