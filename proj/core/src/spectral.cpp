#include "fdlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include "fdlab/errors.hpp"

namespace fdlab {

void FractionalOrders::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(beta > 0.0 && beta <= 2.0)) {
    throw std::invalid_argument("beta must lie in (0, 2], got " + std::to_string(beta));
  }
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("gamma must be non-negative, got " + std::to_string(gamma));
  }
}

SpectralGrid::SpectralGrid(int dim, int n_per_dim, double half_width)
    : dim_(dim), n_(n_per_dim), L_(half_width) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (n_per_dim < 8 || (n_per_dim & (n_per_dim - 1)) != 0) {
    throw std::invalid_argument("points per dimension must be a power of two >= 8");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("half width must be positive");
  }
  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
  abs_freq_.resize(size_);
  phase_.resize(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    double xi2 = 0.0;
    long parity = 0;
    for (int a = 0; a < dim_; ++a) {
      const int k = wavenumber(i, a);
      const double xi = k / (2.0 * L_);
      xi2 += xi * xi;
      parity += k;
    }
    abs_freq_[i] = std::sqrt(xi2);
    phase_[i] = (parity % 2 == 0) ? 1.0 : -1.0;
  }
}

double SpectralGrid::cell_volume() const noexcept { return std::pow(dx(), dim_); }

int SpectralGrid::wavenumber(std::size_t i, int axis) const noexcept {
  std::size_t stride = 1;
  for (int a = dim_ - 1; a > axis; --a) stride *= static_cast<std::size_t>(n_);
  const int j = static_cast<int>((i / stride) % static_cast<std::size_t>(n_));
  return j < n_ / 2 ? j : j - n_;
}

double SpectralGrid::coordinate(std::size_t i, int axis) const noexcept {
  std::size_t stride = 1;
  for (int a = dim_ - 1; a > axis; --a) stride *= static_cast<std::size_t>(n_);
  const auto j = static_cast<double>((i / stride) % static_cast<std::size_t>(n_));
  return -L_ + j * dx();
}

GridPtr make_grid(int dim, int n_per_dim, double half_width) {
  return std::make_shared<const SpectralGrid>(dim, n_per_dim, half_width);
}

Field::Field(GridPtr g, Representation r) : grid(std::move(g)), rep(r) {
  if (!grid) throw std::invalid_argument("field needs a grid");
  values.assign(grid->size(), cplx(0.0, 0.0));
}

Field::Field(GridPtr g, std::vector<cplx> v, Representation r)
    : grid(std::move(g)), values(std::move(v)), rep(r) {
  if (!grid) throw std::invalid_argument("field needs a grid");
  if (values.size() != grid->size()) {
    throw std::invalid_argument("field length " + std::to_string(values.size()) +
                                " does not match grid size " + std::to_string(grid->size()));
  }
  for (const auto& c : values) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("field values must be finite");
    }
  }
}

Potential::Potential(GridPtr grid, std::vector<double> values, double delta0)
    : grid_(std::move(grid)), values_(std::move(values)), delta0_(delta0) {
  if (!grid_) throw std::invalid_argument("potential needs a grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("potential length does not match grid size");
  }
  if (!(delta0_ >= 0.0)) throw std::invalid_argument("delta0 must be non-negative");
  double max_value = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("potential values must be finite");
    max_value = std::max(max_value, v);
    sup_abs_ = std::max(sup_abs_, std::fabs(v));
    sum += v;
    if (v != values_.front()) constant_ = false;
  }
  mean_ = sum / static_cast<double>(values_.size());
  if (max_value > 0.0) {
    throw std::invalid_argument("potential must be non-positive, max is " +
                                std::to_string(max_value));
  }
  if (delta0_ > 0.0 && max_value > -delta0_ * (1.0 - 1e-14)) {
    throw std::invalid_argument("potential exceeds -delta0: max " + std::to_string(max_value) +
                                " vs delta0 " + std::to_string(delta0_));
  }
}

namespace {

// Plans are created once per (dim, n, sign) under a lock; fftw_execute_dft is
// thread-safe on existing plans.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    int dims[3];
    for (int a = 0; a < dim; ++a) {
      dims[a] = n;
      total *= static_cast<std::size_t>(n);
    }
    auto* in = fftw_alloc_complex(total);
    auto* out = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(dim, dims, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const SpectralGrid& grid, int sign, const std::vector<cplx>& in,
             std::vector<cplx>& out) {
  fftw_plan plan = PlanCache::instance().get(grid.dim(), grid.n_per_dim(), sign);
  out.resize(in.size());
  // std::complex<double> is layout compatible with fftw_complex.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

Field forward_transform(const Field& f) {
  if (f.spectral()) throw RepresentationMismatch("forward transform of a spectral field");
  const SpectralGrid& grid = *f.grid;
  Field out(f.grid, Representation::spectral);
  execute(grid, FFTW_FORWARD, f.values, out.values);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= scale * grid.phase(i);
  return out;
}

Field inverse_transform(const Field& f) {
  if (!f.spectral()) throw RepresentationMismatch("inverse transform of a physical field");
  const SpectralGrid& grid = *f.grid;
  std::vector<cplx> tmp(f.values.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = f.values[i] * (scale * grid.phase(i));
  Field out(f.grid, Representation::physical);
  execute(grid, FFTW_BACKWARD, tmp, out.values);
  return out;
}

Field to_spectral(const Field& f) { return f.spectral() ? f : forward_transform(f); }
Field to_physical(const Field& f) { return f.spectral() ? inverse_transform(f) : f; }

Field riesz_apply(const Field& f, double beta) {
  Field s = to_spectral(f);
  const SpectralGrid& grid = *f.grid;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double k = grid.abs_freq(i);
    s.values[i] *= (k == 0.0) ? 0.0 : std::pow(k, beta);
  }
  return f.spectral() ? s : inverse_transform(s);
}

double sobolev_norm(const Field& f, double gamma, NormKind kind) {
  if (!(gamma >= 0.0) && kind == NormKind::inhomogeneous) {
    throw std::invalid_argument("sobolev_norm: gamma must be non-negative");
  }
  const Field s = to_spectral(f);
  const SpectralGrid& grid = *f.grid;
  if (kind == NormKind::homogeneous) {
    double mass = 0.0;
    for (const auto& c : s.values) mass += std::norm(c);
    const double zero = std::abs(s.values[SpectralGrid::zero_index()]);
    if (zero > 1e-10 * std::sqrt(mass)) {
      throw NotInHomogeneousSpace("zero-frequency coefficient " + std::to_string(zero) +
                                  " exceeds 1e-10 of the l2 mass " +
                                  std::to_string(std::sqrt(mass)));
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double k = grid.abs_freq(i);
    double w;
    if (kind == NormKind::inhomogeneous) {
      w = (gamma == 0.0) ? 1.0 : std::pow(1.0 + k * k, gamma);
    } else {
      if (k == 0.0) continue;
      w = (gamma == 0.0) ? 1.0 : std::pow(k, 2.0 * gamma);
    }
    acc += w * std::norm(s.values[i]);
  }
  return std::sqrt(grid.cell_volume() * acc);
}

double sobolev_norm(const Field& f, double gamma, bool homogeneous) {
  return sobolev_norm(f, gamma, homogeneous ? NormKind::homogeneous : NormKind::inhomogeneous);
}

double l2_norm(const Field& f) {
  double acc = 0.0;
  for (const auto& c : f.values) acc += std::norm(c);
  return std::sqrt(f.grid->cell_volume() * acc);
}

void write_snapshot(const std::filesystem::path& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
  const std::int32_t dim = f.grid->dim();
  const std::int32_t n = f.grid->n_per_dim();
  const double L = f.grid->half_width();
  const std::int32_t flag = static_cast<std::int32_t>(f.rep);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&L), sizeof L);
  out.write(reinterpret_cast<const char*>(&flag), sizeof flag);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
  if (!out) throw std::runtime_error("snapshot write failed: " + path.string());
}

Field read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path.string());
  std::int32_t dim = 0;
  std::int32_t n = 0;
  double L = 0.0;
  std::int32_t flag = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  in.read(reinterpret_cast<char*>(&flag), sizeof flag);
  if (!in || (flag != 0 && flag != 1)) throw std::runtime_error("malformed snapshot header");
  auto grid = make_grid(dim, n, L);
  std::vector<cplx> values(grid->size());
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(cplx)));
  if (!in) throw std::runtime_error("truncated snapshot payload");
  return Field(grid, std::move(values), static_cast<Representation>(flag));
}

}  // namespace fdlab
