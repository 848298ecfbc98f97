#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fdlab {

using cplx = std::complex<double>;

/// Orders of the two-parameter Mittag-Leffler function E_{alpha,rho}.
struct MLParams {
  double alpha = 0.5;
  double rho = 1.0;
};

enum class MLRegime { series, asymptotic, crossover };

const char* to_string(MLRegime regime) noexcept;

struct MLEvaluation {
  cplx value;
  MLRegime regime = MLRegime::series;
  double est_error = 0.0;  // absolute error estimate
};

/// Regime boundaries used by the dispatcher.
///
/// The power series is only used where it is both inside `series_radius`
/// and free of cancellation: its largest term grows like exp(|z|^(1/alpha)),
/// so the effective radius is min(series_radius, cancellation_growth^alpha).
struct MLConfig {
  double series_radius = 5.0;
  double asymptotic_radius = 50.0;
  double cancellation_growth = 12.0;
  std::size_t series_cap = 10000;
};

/// Evaluator for one fixed (alpha, rho) pair.
///
/// Series coefficients, asymptotic coefficients and the quadrature nodes of
/// the crossover contour are tabulated at construction, so repeated calls
/// (the propagators evaluate millions of kernels) reduce to a short
/// polynomial or rational sum. Instances are immutable and safe to share
/// between threads.
class MittagLeffler {
 public:
  explicit MittagLeffler(MLParams params, MLConfig config = {});

  [[nodiscard]] MLEvaluation evaluate(cplx z) const;
  /// Value only; skips the second contour resolution used for est_error.
  [[nodiscard]] cplx value(cplx z) const;
  [[nodiscard]] cplx operator()(cplx z) const { return value(z); }

  /// Truncated power series; the tail bound comes from the monotone term ratio.
  [[nodiscard]] MLEvaluation series(cplx z, double tol) const;

  /// Inverse-power expansion -sum_{k=1}^{terms} z^{-k}/Gamma(rho - alpha k),
  /// plus the exponentially large pole contribution when |arg z| < alpha*pi.
  /// `terms <= 0` selects optimal truncation. Throws OutOfRegime below the
  /// asymptotic radius.
  [[nodiscard]] MLEvaluation asymptotic(cplx z, int terms = 0) const;

  /// Hankel-type integral representation discretised on a parabolic contour.
  [[nodiscard]] MLEvaluation crossover(cplx z) const;

  [[nodiscard]] double effective_series_radius() const noexcept { return series_limit_; }
  [[nodiscard]] const MLParams& params() const noexcept { return params_; }
  [[nodiscard]] const MLConfig& config() const noexcept { return config_; }

 private:
  struct ContourRule {
    double mu = 0.0;
    double h = 0.0;  // step in the contour parameter u
    // Kept in extended precision: the terms are of size e^mu while the
    // result can be many orders smaller.
    std::vector<std::complex<long double>> weight;   // e^s s^(alpha-rho) ds/(2 pi i)
    std::vector<std::complex<long double>> s_alpha;  // s^alpha
  };

  [[nodiscard]] long double series_coefficient(std::size_t k) const;
  [[nodiscard]] std::size_t select_rule(cplx z) const;
  [[nodiscard]] cplx contour_sum(const ContourRule& rule, cplx z) const;
  [[nodiscard]] cplx pole_contribution(cplx z, const ContourRule* rule) const;

  MLParams params_;
  MLConfig config_;
  double series_limit_ = 0.0;
  bool exponential_ = false;  // alpha == rho == 1

  std::vector<long double> series_coeff_;   // 1/Gamma(alpha k + rho)
  // 1/Gamma(rho - alpha k) = asym_coeff_[k-1] * exp(asym_log_envelope_[k-1]),
  // the first factor being a sign or sin(pi x), the second free of it.
  std::vector<double> asym_coeff_;
  std::vector<double> asym_log_envelope_;
  std::vector<ContourRule> fine_rules_;
  std::vector<ContourRule> coarse_rules_;
};

/// Free-function forms. They reuse a small per-thread cache of evaluators.
MLEvaluation ml_series(MLParams params, cplx z, double tol);
MLEvaluation ml_asymptotic(MLParams params, cplx z, int terms);
MLEvaluation ml(MLParams params, cplx z);

/// 1/Gamma(x) for real x, exact zero at the poles, no overflow for large
/// negative x (returned through its logarithm when needed).
double reciprocal_gamma(double x);

}  // namespace fdlab
