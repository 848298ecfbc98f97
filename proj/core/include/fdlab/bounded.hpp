#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "fdlab/asymptotics.hpp"
#include "fdlab/spectral.hpp"

namespace fdlab {

/// Column-major dense matrix; kept minimal so no linear-algebra library
/// leaks into the public interface.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }
  double& operator()(int i, int j) { return data_[std::size_t(j) * rows_ + i]; }
  double operator()(int i, int j) const { return data_[std::size_t(j) * rows_ + i]; }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
  [[nodiscard]] std::vector<double>& data() noexcept { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// D_t^alpha u + A^{beta/2} u = p u on (0, L), Dirichlet, with A = -d^2/dx^2
/// taken in the spectral sense on the basis phi0_n = sqrt(2/L) sin(n pi x / L).
struct IntervalProblem {
  double length = 3.141592653589793;
  FractionalOrders orders;
  int N = 64;
  std::vector<double> a_coeffs;           // sine-basis coefficients of a, size N (zero-padded)
  std::function<double(double)> p;        // p(x) <= 0; empty means p = 0
  int quad_panels = 0;                    // 0: N panels of 16 Gauss points

  void validate() const;
};

/// Entry i is the pair (lambda_{i+1}, phi_{i+1}).
struct EigenSystem {
  std::vector<double> lambdas;  // increasing
  DenseMatrix vectors;          // column n holds phi_n in the sine basis; empty if values only
};

/// diag((n pi / L)^beta) - P with P_mn = <p phi0_m, phi0_n>. Throws
/// QuadratureUnderResolved if doubling the panels moves an entry by > 1e-10.
DenseMatrix assemble_operator(const IntervalProblem& problem);

/// Symmetric eigendecomposition. Throws NotPositive when lambda_1 <= 0.
EigenSystem eigen_solve(const DenseMatrix& matrix, bool with_vectors = true);

/// (a, phi_n) for every n.
std::vector<double> eigen_coefficients(const EigenSystem& es, const std::vector<double>& a_coeffs);

/// Eigen-coefficients of u(t): (a, phi_n) E_{alpha,1}(-lambda_n t^alpha).
std::vector<double> evolve(const IntervalProblem& problem, const EigenSystem& es, double t);

/// Eigen-coefficients back to the sine basis.
std::vector<double> to_sine_basis(const EigenSystem& es, const std::vector<double>& c);

/// (sum lambda_n^{2 gamma / beta} c_n^2)^{1/2}.
double eigen_norm(const EigenSystem& es, const std::vector<double>& c, double gamma, double beta);

struct NormEquivalence {
  double c1 = 0.0;  // smallest observed ratio eigen-norm / H^gamma norm
  double c2 = 0.0;  // largest
};

/// Ratio of the eigen-norm to (sum (n pi/L)^{2 gamma} b_n^2)^{1/2} over random
/// band-limited samples b_n ~ N(0, 1) / n, fixed seed.
NormEquivalence norm_equivalence_check(const EigenSystem& es, const IntervalProblem& problem,
                                       double gamma, int samples, std::uint64_t seed = 1234);

struct BoundedDecay {
  NormSeries series;
  DecayFit fit;
};

/// Eigen-norm of u(t) for each t and its log-log fit over the window. For
/// gamma < beta the window must satisfy lambda_1 t_min^alpha > gamma / (beta - gamma).
BoundedDecay decay_check_bounded(const IntervalProblem& problem, const EigenSystem& es,
                                 const std::vector<double>& times, double gamma,
                                 FitWindow window = {});

struct BlowupRow {
  int N = 0;
  double S = 0.0;        // S_N(t)
  double S_2t = 0.0;     // S_N(2t)
  double growth = 0.0;   // S_N / S_{previous N}, 0 for the first row
};

struct BlowupResult {
  std::vector<BlowupRow> rows;
  double time_ratio = 0.0;     // S_{N_max}(2t) / S_{N_max}(t)
  double expected_ratio = 0.0;  // 2^{-2 alpha}
  double min_growth = 0.0;
};

/// Partial sums S_N = sum_{n <= N} lambda_n^{2 gamma / beta} c_n^2 |E_{alpha,1}(-lambda_n t^alpha)|^2
/// with eigen-coefficients c_n = coefficient_law(n), from one eigenvalue solve at max(N_list).
BlowupResult regularity_blowup_probe(const IntervalProblem& problem, double gamma, double t,
                                     const std::vector<int>& N_list,
                                     const std::function<double(int)>& coefficient_law);

/// CSV: n,lambda then one column per sine-basis component of phi_n.
void write_eigen_csv(const std::filesystem::path& path, const EigenSystem& es);

}  // namespace fdlab
