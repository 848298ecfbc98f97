#include "fdlab/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fdlab/errors.hpp"

namespace fdlab {

namespace {

using cplxl = std::complex<long double>;

constexpr double kPi = std::numbers::pi;
constexpr long double kEpsL = std::numeric_limits<long double>::epsilon();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// sin(pi x) with exact zeros at the integers.
double sin_pi(double x) {
  const double n = std::nearbyint(x);
  const double f = x - n;
  const double s = std::sin(kPi * f);
  return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

long double reciprocal_gamma_l(long double x) {
  if (x > 0.0L) {
    if (x < 1700.0L) return 1.0L / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  if (x == std::floor(x)) return 0.0L;
  const long double s = static_cast<long double>(sin_pi(static_cast<double>(x)));
  return s * std::exp(std::lgamma(1.0L - x)) / std::numbers::pi_v<long double>;
}

}  // namespace

const char* to_string(MLRegime regime) noexcept {
  switch (regime) {
    case MLRegime::series:
      return "series";
    case MLRegime::asymptotic:
      return "asymptotic";
    case MLRegime::crossover:
      return "crossover";
  }
  return "unknown";
}

double reciprocal_gamma(double x) {
  if (x > 0.0) {
    if (x < 171.0) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  if (x == std::floor(x)) return 0.0;
  return sin_pi(x) * std::exp(std::lgamma(1.0 - x)) / kPi;
}

MittagLeffler::MittagLeffler(MLParams params, MLConfig config)
    : params_(params), config_(config) {
  if (!(params_.alpha > 0.0) || !std::isfinite(params_.alpha)) {
    throw std::invalid_argument("Mittag-Leffler order alpha must be positive and finite");
  }
  if (!std::isfinite(params_.rho)) {
    throw std::invalid_argument("Mittag-Leffler parameter rho must be finite");
  }
  const double alpha = params_.alpha;
  const double rho = params_.rho;
  exponential_ = (alpha == 1.0 && rho == 1.0);
  series_limit_ = std::min(config_.series_radius, std::pow(config_.cancellation_growth, alpha));

  // Series coefficients: enough terms to converge at the effective radius.
  {
    const double log_r = std::log(std::max(series_limit_, 1e-300));
    double peak = -std::numeric_limits<double>::infinity();
    bool descending = false;
    double previous = peak;
    for (std::size_t k = 0; k < config_.series_cap; ++k) {
      const long double c = reciprocal_gamma_l(alpha * static_cast<long double>(k) + rho);
      series_coeff_.push_back(c);
      const double mag = (c == 0.0L) ? -std::numeric_limits<double>::infinity()
                                     : static_cast<double>(std::log(std::fabs(c))) + k * log_r;
      peak = std::max(peak, mag);
      if (k > 0 && mag < previous) descending = true;
      previous = mag;
      if (descending && k > 8 && mag < peak - 48.0) break;
    }
  }

  // Asymptotic coefficients stored as (sine factor, log envelope) so that
  // large negative Gamma arguments never overflow.
  constexpr std::size_t kAsymTerms = 400;
  asym_coeff_.reserve(kAsymTerms);
  asym_log_envelope_.reserve(kAsymTerms);
  for (std::size_t k = 1; k <= kAsymTerms; ++k) {
    const double x = rho - alpha * static_cast<double>(k);
    if (x > 0.0) {
      asym_coeff_.push_back(std::tgamma(x) > 0.0 ? 1.0 : -1.0);
      asym_log_envelope_.push_back(-std::lgamma(x));
    } else {
      asym_coeff_.push_back(sin_pi(x));
      asym_log_envelope_.push_back(std::lgamma(1.0 - x) - std::log(kPi));
    }
  }

  // Parabolic contour s(u) = mu (1 + i u)^2, trapezoid with step 3/N.
  // Three scalings per resolution, none above 1: larger mu undersamples the
  // oscillation of e^s. A smaller one is used only when a pole sits close to
  // the default contour.
  auto build = [&](int n, double scale) {
    ContourRule rule;
    const long double h = 3.0L / n;
    rule.mu = kPi * n / 12.0 * scale;
    rule.h = 3.0 / n;
    const long double mu = static_cast<long double>(kPi) * n / 12.0L * scale;
    const cplxl two_pi_i(0.0L, 2.0L * std::numbers::pi_v<long double>);
    for (int j = -n; j <= n; ++j) {
      const long double u = j * h;
      const cplxl one_iu(1.0L, u);
      const cplxl s = mu * one_iu * one_iu;
      const cplxl ds = cplxl(0.0L, 2.0L * mu) * one_iu;
      const cplxl log_s = std::log(s);
      const long double ar = static_cast<long double>(alpha) - static_cast<long double>(rho);
      rule.weight.push_back(h * std::exp(s + ar * log_s) * ds / two_pi_i);
      rule.s_alpha.push_back(std::exp(static_cast<long double>(alpha) * log_s));
    }
    return rule;
  };
  for (double scale : {1.0, 0.7, 0.5}) {
    fine_rules_.push_back(build(32, scale));
    coarse_rules_.push_back(build(24, scale));
  }
}

long double MittagLeffler::series_coefficient(std::size_t k) const {
  if (k < series_coeff_.size()) return series_coeff_[k];
  return reciprocal_gamma_l(params_.alpha * static_cast<long double>(k) + params_.rho);
}

MLEvaluation MittagLeffler::series(cplx z, double tol) const {
  const cplxl zl(z.real(), z.imag());
  const long double r = std::abs(zl);
  cplxl sum = 0.0L;
  cplxl power = 1.0L;
  long double power_abs = 1.0L;
  long double abs_sum = 0.0L;
  long double tail = std::numeric_limits<long double>::infinity();
  bool decreasing = false;
  long double previous = std::numeric_limits<long double>::infinity();
  const long double tol_l = tol;

  long double c = series_coefficient(0);
  long double c1 = series_coefficient(1);
  for (std::size_t k = 0; k < config_.series_cap; ++k) {
    sum += c * power;
    const long double mag = std::fabs(c) * power_abs;
    abs_sum += mag;
    if (mag < previous) decreasing = true;
    previous = mag;

    if (r == 0.0L) {
      tail = 0.0L;
      break;
    }
    // Ratios |t_{j+1}/t_j| = r Gamma(x_j)/Gamma(x_j + alpha) decrease in j
    // (log-convexity of Gamma), so a geometric bound certifies the tail.
    const long double c2 = series_coefficient(k + 2);
    power_abs *= r;
    if (decreasing && c1 != 0.0L && c2 != 0.0L) {
      const long double next = std::fabs(c1) * power_abs;
      const long double ratio = r * std::fabs(c2 / c1);
      if (ratio < 1.0L) {
        const long double bound = next / (1.0L - ratio);
        const long double scale = std::fabs(sum.real()) + std::fabs(sum.imag());
        if (bound <= tol_l || bound <= 1e-19L * scale) {
          tail = bound;
          break;
        }
      }
    }
    power *= zl;
    c = c1;
    c1 = c2;
  }
  if (!std::isfinite(static_cast<double>(tail))) {
    throw NonConvergent("power series did not converge within " +
                        std::to_string(config_.series_cap) + " terms at |z| = " +
                        std::to_string(static_cast<double>(r)));
  }
  const cplx value(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  const double rounding = static_cast<double>(8.0L * kEpsL * abs_sum) + kEps * std::abs(value);
  return {value, MLRegime::series, static_cast<double>(tail) + rounding};
}

cplx MittagLeffler::pole_contribution(cplx z, const ContourRule* rule) const {
  // Poles of s^(alpha-rho)/(s^alpha - z) on the principal sheet sit at
  // s_j = |z|^(1/alpha) exp(i (arg z + 2 pi j)/alpha) with |arg z + 2 pi j| < alpha pi.
  // With a contour rule only poles to its right are added; without one
  // (asymptotic regime) all of them are. A pole near the rule also spoils the
  // trapezoid sum, by R (-pi cot(pi u_p / h) - i pi sgn Im u_p) for a simple
  // pole R / (u - u_p) in the parameter; that error is removed here.
  const double alpha = params_.alpha;
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  const double theta = std::arg(z);
  cplx total = 0.0;
  const int jmax = static_cast<int>(std::ceil(alpha / 2.0)) + 1;
  for (int j = -jmax; j <= jmax; ++j) {
    const double phase = theta + 2.0 * kPi * j;
    const bool inside = std::fabs(phase) < alpha * kPi ||
                        (alpha >= 1.0 && std::fabs(phase) <= alpha * kPi && j == 0);
    if (!inside) continue;
    const cplx log_s(std::log(r) / alpha, phase / alpha);
    const cplx s = std::exp(log_s);
    const cplx residue = std::exp(s + (1.0 - params_.rho) * log_s) / alpha;
    if (rule == nullptr) {
      total += residue;
      continue;
    }
    const cplx w = std::sqrt(s / rule->mu);
    if (w.real() > 1.0) total += residue;
    const cplx u_p(w.imag(), 1.0 - w.real());  // w = 1 + i u
    if (std::fabs(u_p.imag()) < 1.0) {
      const cplx x = kPi * u_p / rule->h;
      const double side = u_p.imag() > 0.0 ? 1.0 : -1.0;
      const cplx alias = -kPi * std::cos(x) / std::sin(x) - cplx(0.0, kPi * side);
      total -= residue / cplx(0.0, 2.0 * kPi) * alias;
    }
  }
  return total;
}

MLEvaluation MittagLeffler::asymptotic(cplx z, int terms) const {
  const double r = std::abs(z);
  if (r < config_.asymptotic_radius) {
    throw OutOfRegime("asymptotic expansion requires |z| >= " +
                      std::to_string(config_.asymptotic_radius) + ", got " + std::to_string(r));
  }
  if (terms > static_cast<int>(asym_coeff_.size()) - 2) {
    throw std::invalid_argument("too many asymptotic terms requested");
  }
  const double log_r = std::log(r);
  const double theta = std::arg(z);
  const auto term = [&](std::size_t k) {
    // -z^{-k}/Gamma(rho - alpha k)
    const double mag = std::exp(asym_log_envelope_[k - 1] - k * log_r);
    return -asym_coeff_[k - 1] * mag * std::polar(1.0, -static_cast<double>(k) * theta);
  };
  const auto envelope = [&](std::size_t k) {
    return std::exp(asym_log_envelope_[k - 1] - k * log_r);
  };

  cplx sum = 0.0;
  std::size_t used = 0;
  if (terms > 0) {
    for (std::size_t k = 1; k <= static_cast<std::size_t>(terms); ++k) sum += term(k);
    used = static_cast<std::size_t>(terms);
  } else {
    double previous = std::numeric_limits<double>::infinity();
    const std::size_t limit = asym_coeff_.size() - 2;
    for (std::size_t k = 1; k <= limit; ++k) {
      const double env = envelope(k);
      if (params_.alpha * k > params_.rho + 1.0 && env > previous) break;
      sum += term(k);
      used = k;
      previous = env;
      if (env < 1e-18 * std::abs(sum)) break;
    }
  }
  const double omitted = std::max(std::abs(term(used + 1)), std::abs(term(used + 2)));
  sum += pole_contribution(z, nullptr);
  return {sum, MLRegime::asymptotic, omitted + 4.0 * kEps * std::abs(sum)};
}

cplx MittagLeffler::contour_sum(const ContourRule& rule, cplx z) const {
  const cplxl zl(z.real(), z.imag());
  cplxl acc = 0.0L;
  for (std::size_t j = 0; j < rule.weight.size(); ++j) {
    acc += rule.weight[j] / (rule.s_alpha[j] - zl);
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::size_t MittagLeffler::select_rule(cplx z) const {
  // Pick the contour scaling whose distance to the nearest pole (measured in
  // the parameter plane, where the trapezoid error decays like e^{-2 pi d/h})
  // is largest.
  const double alpha = params_.alpha;
  const double r = std::abs(z);
  std::size_t best = 0;
  if (r == 0.0) return best;
  const double theta = std::arg(z);
  double best_distance = -1.0;
  for (std::size_t i = 0; i < fine_rules_.size(); ++i) {
    double distance = std::numeric_limits<double>::infinity();
    for (const auto* rule : {&fine_rules_[i], &coarse_rules_[i]}) {
      for (int j = -2; j <= 2; ++j) {
        const double phase = theta + 2.0 * kPi * j;
        if (std::fabs(phase) >= alpha * kPi) continue;
        const cplx s = std::polar(std::pow(r, 1.0 / alpha), phase / alpha);
        distance = std::min(distance, std::fabs(1.0 - std::sqrt(s / rule->mu).real()));
      }
    }
    if (distance > best_distance + 1e-12) {
      best_distance = distance;
      best = i;
    }
    if (distance >= 0.5) break;  // pole error below e^{-2 pi d/h}, negligible
  }
  return best;
}

MLEvaluation MittagLeffler::crossover(cplx z) const {
  const std::size_t best = select_rule(z);
  const ContourRule& fine = fine_rules_[best];
  const ContourRule& coarse = coarse_rules_[best];
  const cplx v_fine = contour_sum(fine, z) + pole_contribution(z, &fine);
  const cplx v_coarse = contour_sum(coarse, z) + pole_contribution(z, &coarse);

  const cplxl zl(z.real(), z.imag());
  long double magnitude = 0.0L;
  for (std::size_t j = 0; j < fine.weight.size(); ++j) {
    magnitude += std::abs(fine.weight[j] / (fine.s_alpha[j] - zl));
  }
  const double est = std::abs(v_fine - v_coarse) + static_cast<double>(16.0L * kEpsL * magnitude) +
                     kEps * std::abs(v_fine);
  return {v_fine, MLRegime::crossover, est};
}

cplx MittagLeffler::value(cplx z) const {
  if (exponential_) return std::exp(z);
  const double r = std::abs(z);
  if (r <= series_limit_) return series(z, 0.0).value;
  if (r >= config_.asymptotic_radius) return asymptotic(z, 0).value;
  const ContourRule& fine = fine_rules_[select_rule(z)];
  return contour_sum(fine, z) + pole_contribution(z, &fine);
}

MLEvaluation MittagLeffler::evaluate(cplx z) const {
  if (exponential_) {
    const cplx v = std::exp(z);
    return {v, MLRegime::series, 2.0 * kEps * std::abs(v)};
  }
  const double r = std::abs(z);
  if (r <= series_limit_) return series(z, 0.0);
  if (r >= config_.asymptotic_radius) return asymptotic(z, 0);
  return crossover(z);
}

namespace {

const MittagLeffler& cached_evaluator(MLParams params) {
  struct Entry {
    MLParams params;
    std::unique_ptr<MittagLeffler> evaluator;
  };
  thread_local std::vector<Entry> cache;
  for (auto& e : cache) {
    if (e.params.alpha == params.alpha && e.params.rho == params.rho) return *e.evaluator;
  }
  if (cache.size() >= 16) cache.erase(cache.begin());
  cache.push_back({params, std::make_unique<MittagLeffler>(params)});
  return *cache.back().evaluator;
}

}  // namespace

MLEvaluation ml_series(MLParams params, cplx z, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("ml_series: tol must be positive");
  const MittagLeffler& f = cached_evaluator(params);
  auto result = f.series(z, tol);
  if (result.est_error > tol) {
    throw NonConvergent("series cancellation at |z| = " + std::to_string(std::abs(z)) +
                        " leaves error estimate " + std::to_string(result.est_error) +
                        " above tol");
  }
  return result;
}

MLEvaluation ml_asymptotic(MLParams params, cplx z, int terms) {
  return cached_evaluator(params).asymptotic(z, terms);
}

MLEvaluation ml(MLParams params, cplx z) { return cached_evaluator(params).evaluate(z); }

}  // namespace fdlab
