#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

namespace fdlab {

using cplx = std::complex<double>;

/// Time order alpha, space order beta and norm index gamma.
struct FractionalOrders {
  double alpha = 0.5;
  double beta = 2.0;
  double gamma = 0.0;

  /// Throws std::invalid_argument unless 0 < alpha < 1, 0 < beta <= 2, gamma >= 0.
  void validate() const;
};

/// Periodic lattice on [-L, L)^d with n points per dimension.
///
/// Frequencies are xi_k = k / (2L) for integer k in FFT order
/// (0, 1, ..., n/2 - 1, -n/2, ..., -1); the Riesz symbol is |xi|^beta in this
/// convention, so -Laplacian corresponds to (2 pi |xi|)^2.
class SpectralGrid {
 public:
  SpectralGrid(int dim, int n_per_dim, double half_width);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int n_per_dim() const noexcept { return n_; }
  [[nodiscard]] double half_width() const noexcept { return L_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] double dx() const noexcept { return 2.0 * L_ / n_; }
  [[nodiscard]] double cell_volume() const noexcept;

  /// Signed integer frequency index of flat position i along axis `axis`.
  [[nodiscard]] int wavenumber(std::size_t i, int axis) const noexcept;
  /// Physical coordinate of flat position i along `axis`.
  [[nodiscard]] double coordinate(std::size_t i, int axis) const noexcept;
  /// |xi| at flat spectral index i.
  [[nodiscard]] double abs_freq(std::size_t i) const noexcept { return abs_freq_[i]; }
  [[nodiscard]] const std::vector<double>& abs_freq() const noexcept { return abs_freq_; }
  /// (-1)^(k_1 + ... + k_d): phase relating the DFT to the [-L, L) grid.
  [[nodiscard]] double phase(std::size_t i) const noexcept { return phase_[i]; }
  [[nodiscard]] static std::size_t zero_index() noexcept { return 0; }

  bool operator==(const SpectralGrid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_ && L_ == other.L_;
  }

 private:
  int dim_;
  int n_;
  double L_;
  std::size_t size_;
  std::vector<double> abs_freq_;
  std::vector<double> phase_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr make_grid(int dim, int n_per_dim, double half_width);

enum class Representation : int { physical = 0, spectral = 1 };

/// Complex lattice function with a representation flag.
struct Field {
  GridPtr grid;
  std::vector<cplx> values;
  Representation rep = Representation::physical;

  Field() = default;
  Field(GridPtr g, Representation r);
  Field(GridPtr g, std::vector<cplx> v, Representation r);

  [[nodiscard]] bool spectral() const noexcept { return rep == Representation::spectral; }
  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Real potential on the lattice, required to satisfy p <= -delta0 <= 0.
class Potential {
 public:
  Potential(GridPtr grid, std::vector<double> values, double delta0 = 0.0);

  [[nodiscard]] const GridPtr& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] double delta0() const noexcept { return delta0_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double sup_abs() const noexcept { return sup_abs_; }
  /// True when all samples coincide (the problem is then Fourier-diagonal).
  [[nodiscard]] bool is_constant() const noexcept { return constant_; }
  [[nodiscard]] bool is_zero() const noexcept { return constant_ && mean_ == 0.0; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
  double delta0_;
  double mean_ = 0.0;
  double sup_abs_ = 0.0;
  bool constant_ = true;
};

/// Unitary DFT with the grid phase: coefficient k equals
/// n^{-d/2} sum_j f(x_j) exp(-2 pi i xi_k . x_j).
Field forward_transform(const Field& f);
Field inverse_transform(const Field& f);
Field to_spectral(const Field& f);
Field to_physical(const Field& f);

/// Multiplies spectral coefficients by |xi|^beta; the zero mode maps to 0.
/// Negative beta is the pseudo-inverse on mean-zero fields. The result keeps
/// the representation of the input.
Field riesz_apply(const Field& f, double beta);

enum class NormKind {
  inhomogeneous,        // ||(1 + |xi|^2)^{gamma/2} f^||
  homogeneous,          // ||  |xi|^gamma f^||, requires vanishing mean
  homogeneous_seminorm  // same weight, zero mode simply excluded
};

/// Grid quadrature of the Sobolev norm: cell volume times the spectral sum.
double sobolev_norm(const Field& f, double gamma, NormKind kind);
double sobolev_norm(const Field& f, double gamma, bool homogeneous);

/// Plain weighted l2 norm sqrt(dx^d sum |f_j|^2), either representation.
double l2_norm(const Field& f);

/// Flat binary snapshot: int32 dim, int32 n, float64 L, int32 representation,
/// then interleaved re/im float64 values in row-major order.
void write_snapshot(const std::filesystem::path& path, const Field& f);
Field read_snapshot(const std::filesystem::path& path);

}  // namespace fdlab
