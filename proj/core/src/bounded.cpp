#include "fdlab/bounded.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fdlab/errors.hpp"
#include "fdlab/mittag_leffler.hpp"
#include "fdlab/quadrature.hpp"

namespace fdlab {

void IntervalProblem::validate() const {
  orders.validate();
  if (!(length > 0.0)) throw std::invalid_argument("interval length must be positive");
  if (N < 4) throw std::invalid_argument("basis size N must be at least 4");
  if (a_coeffs.size() > static_cast<std::size_t>(N)) {
    throw std::invalid_argument("more datum coefficients than basis functions");
  }
  if (quad_panels < 0) throw std::invalid_argument("quad_panels must be non-negative");
}

namespace {

constexpr std::size_t kGauss = 16;

// C(k) = (1/L) int_0^L p(x) cos(k pi x / L) dx, k = 0..kmax, on `panels` Gauss panels.
// cos(k theta) comes from repeated complex rotation, whose rounding grows
// only linearly in k.
std::vector<double> cosine_moments(const IntervalProblem& problem, int kmax, int panels) {
  const QuadratureRule& g = gauss_legendre(kGauss);
  const double L = problem.length;
  const double h = L / panels;
  std::vector<double> C(kmax + 1, 0.0);
  for (int j = 0; j < panels; ++j) {
    const double a = j * h;
    for (std::size_t q = 0; q < kGauss; ++q) {
      const double x = a + 0.5 * h * (g.nodes[q] + 1.0);
      const double w = 0.5 * h * g.weights[q] * problem.p(x) / L;
      if (w == 0.0) continue;
      const double th = std::numbers::pi * x / L;
      const std::complex<double> step(std::cos(th), std::sin(th));
      std::complex<double> e(1.0, 0.0);
      for (int k = 0; k <= kmax; ++k) {
        C[k] += w * e.real();
        e *= step;
      }
    }
  }
  return C;
}

}  // namespace

DenseMatrix assemble_operator(const IntervalProblem& problem) {
  problem.validate();
  const int N = problem.N;
  const double L = problem.length;
  DenseMatrix M(N, N);
  for (int n = 1; n <= N; ++n) {
    M(n - 1, n - 1) = std::pow(n * std::numbers::pi / L, problem.orders.beta);
  }
  if (!problem.p) return M;

  const int panels = problem.quad_panels > 0 ? problem.quad_panels : std::max(N, 16);
  const std::vector<double> coarse = cosine_moments(problem, 2 * N, panels);
  const std::vector<double> C = cosine_moments(problem, 2 * N, 2 * panels);
  double change = 0.0;
  for (int k = 0; k <= 2 * N; ++k) change = std::max(change, std::fabs(C[k] - coarse[k]));
  // Each entry is a difference of two moments.
  if (2.0 * change > 1e-10) {
    throw QuadratureUnderResolved("doubling " + std::to_string(panels) +
                                  " panels moved an entry by " + std::to_string(2.0 * change));
  }
  for (int m = 1; m <= N; ++m) {
    for (int n = 1; n <= N; ++n) M(m - 1, n - 1) -= C[std::abs(m - n)] - C[m + n];
  }
  return M;
}

EigenSystem eigen_solve(const DenseMatrix& matrix, bool with_vectors) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw std::invalid_argument("eigen_solve needs a non-empty square matrix");
  }
  const int N = matrix.rows();
  const Eigen::Map<const Eigen::MatrixXd> A(matrix.data().data(), N, N);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      A, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");

  EigenSystem es;
  es.lambdas.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
  if (!(es.lambdas.front() > 0.0)) {
    throw NotPositive("lambda_1 = " + std::to_string(es.lambdas.front()));
  }
  if (with_vectors) {
    es.vectors = DenseMatrix(N, N);
    const Eigen::MatrixXd& V = solver.eigenvectors();
    for (int j = 0; j < N; ++j) {
      // Sign fixed by the largest component, for reproducible output.
      Eigen::Index imax = 0;
      V.col(j).cwiseAbs().maxCoeff(&imax);
      const double sign = V(imax, j) < 0.0 ? -1.0 : 1.0;
      for (int i = 0; i < N; ++i) es.vectors(i, j) = sign * V(i, j);
    }
  }
  return es;
}

std::vector<double> eigen_coefficients(const EigenSystem& es, const std::vector<double>& a_coeffs) {
  const int N = es.vectors.rows();
  if (N == 0) throw std::invalid_argument("eigen system was solved without vectors");
  std::vector<double> c(N, 0.0);
  for (int j = 0; j < N; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a_coeffs.size() && i < static_cast<std::size_t>(N); ++i) {
      s += es.vectors(static_cast<int>(i), j) * a_coeffs[i];
    }
    c[j] = s;
  }
  return c;
}

std::vector<double> evolve(const IntervalProblem& problem, const EigenSystem& es, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("evolve: t must be positive");
  std::vector<double> c = eigen_coefficients(es, problem.a_coeffs);
  const MittagLeffler ml({problem.orders.alpha, 1.0});
  const double ta = std::pow(t, problem.orders.alpha);
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= ml.value(-es.lambdas[n] * ta).real();
  return c;
}

std::vector<double> to_sine_basis(const EigenSystem& es, const std::vector<double>& c) {
  const int N = es.vectors.rows();
  if (N == 0 || c.size() != static_cast<std::size_t>(N)) {
    throw std::invalid_argument("to_sine_basis: size mismatch");
  }
  std::vector<double> b(N, 0.0);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) b[i] += es.vectors(i, j) * c[j];
  }
  return b;
}

double eigen_norm(const EigenSystem& es, const std::vector<double>& c, double gamma, double beta) {
  double s = 0.0;
  const double e = 2.0 * gamma / beta;
  for (std::size_t n = 0; n < c.size() && n < es.lambdas.size(); ++n) {
    s += std::pow(es.lambdas[n], e) * c[n] * c[n];
  }
  return std::sqrt(s);
}

NormEquivalence norm_equivalence_check(const EigenSystem& es, const IntervalProblem& problem,
                                       double gamma, int samples, std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma <= 2.0)) throw std::invalid_argument("gamma must lie in [0, 2]");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const int N = es.vectors.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  NormEquivalence out{std::numeric_limits<double>::infinity(), 0.0};
  std::vector<double> b(N);
  for (int s = 0; s < samples; ++s) {
    double ref = 0.0;
    for (int n = 1; n <= N; ++n) {
      b[n - 1] = normal(rng) / n;
      ref += std::pow(n * std::numbers::pi / problem.length, 2.0 * gamma) * b[n - 1] * b[n - 1];
    }
    const double r = eigen_norm(es, eigen_coefficients(es, b), gamma, problem.orders.beta) /
                     std::sqrt(ref);
    out.c1 = std::min(out.c1, r);
    out.c2 = std::max(out.c2, r);
  }
  return out;
}

BoundedDecay decay_check_bounded(const IntervalProblem& problem, const EigenSystem& es,
                                 const std::vector<double>& times, double gamma,
                                 FitWindow window) {
  const double alpha = problem.orders.alpha;
  const double beta = problem.orders.beta;
  if (gamma > beta) throw std::invalid_argument("decay check needs gamma <= beta");
  if (gamma < beta) {
    const double need = gamma / (beta - gamma);
    if (!(es.lambdas.front() * std::pow(window.t_min, alpha) > need)) {
      throw DegenerateWindow("lambda_1 t_min^alpha must exceed gamma / (beta - gamma) = " +
                             std::to_string(need));
    }
  }
  BoundedDecay out;
  out.series.spec = {gamma, NormKind::inhomogeneous};
  out.series.solver_path = "eigen";
  out.series.times = times;
  for (double t : times) out.series.values.push_back(eigen_norm(es, evolve(problem, es, t), gamma, beta));
  out.series.validate();
  out.fit = decay_fit(out.series, window);
  return out;
}

BlowupResult regularity_blowup_probe(const IntervalProblem& problem, double gamma, double t,
                                     const std::vector<int>& N_list,
                                     const std::function<double(int)>& coefficient_law) {
  if (N_list.empty()) throw std::invalid_argument("N_list is empty");
  if (!(t > 0.0)) throw std::invalid_argument("blow-up probe: t must be positive");
  if (!std::is_sorted(N_list.begin(), N_list.end())) {
    throw std::invalid_argument("N_list must be increasing");
  }
  IntervalProblem big = problem;
  big.N = N_list.back();
  big.a_coeffs.clear();
  const EigenSystem es = eigen_solve(assemble_operator(big), false);

  const double alpha = problem.orders.alpha;
  const double e = 2.0 * gamma / problem.orders.beta;
  const MittagLeffler ml({alpha, 1.0});
  const double ta = std::pow(t, alpha);
  const double ta2 = std::pow(2.0 * t, alpha);

  BlowupResult res;
  res.expected_ratio = std::pow(2.0, -2.0 * alpha);
  res.min_growth = std::numeric_limits<double>::infinity();
  double S = 0.0;
  double S2 = 0.0;
  int n = 0;
  for (int N : N_list) {
    for (; n < N; ++n) {
      const double lam = es.lambdas[n];
      const double c = coefficient_law(n + 1);
      const double w = std::pow(lam, e) * c * c;
      const double E1 = ml.value(-lam * ta).real();
      const double E2 = ml.value(-lam * ta2).real();
      S += w * E1 * E1;
      S2 += w * E2 * E2;
    }
    BlowupRow row{N, S, S2, 0.0};
    if (!res.rows.empty()) {
      row.growth = S / res.rows.back().S;
      res.min_growth = std::min(res.min_growth, row.growth);
    }
    res.rows.push_back(row);
  }
  if (res.rows.size() < 2) res.min_growth = 0.0;
  res.time_ratio = S2 / S;
  return res;
}

void write_eigen_csv(const std::filesystem::path& path, const EigenSystem& es) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const int N = es.vectors.rows();
  out << "n,lambda";
  for (int i = 1; i <= N; ++i) out << ",b" << i;
  out << '\n' << std::setprecision(17);
  for (std::size_t j = 0; j < es.lambdas.size(); ++j) {
    out << j + 1 << ',' << es.lambdas[j];
    for (int i = 0; i < N; ++i) out << ',' << es.vectors(i, static_cast<int>(j));
    out << '\n';
  }
}

}  // namespace fdlab
