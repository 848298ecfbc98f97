#include "fdlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "fdlab/errors.hpp"
#include "internal.hpp"

namespace fdlab {

void NormSeries::validate() const {
  if (times.size() != values.size()) throw std::invalid_argument("series length mismatch");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument("series times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("series times must be strictly increasing");
    }
    if (!(values[i] >= 0.0)) throw std::invalid_argument("series values must be non-negative");
  }
}

NormSeries sweep_norms(const CauchyProblem& problem, const std::vector<double>& times,
                       NormSpec spec, const SectorContour& contour,
                       const ResolventOptions& options) {
  NormSeries out;
  out.spec = spec;
  out.times = times;
  out.values.reserve(times.size());
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("sweep_norms: times must be positive");
    const Field u = contour_invert(problem, t, contour, nullptr, options);
    out.values.push_back(sobolev_norm(u, spec.gamma, spec.kind));
  }
  out.validate();
  return out;
}

DecayFit decay_fit(const NormSeries& series, FitWindow window) {
  series.validate();
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < window.t_min * (1.0 - 1e-12) || t > window.t_max * (1.0 + 1e-12)) continue;
    if (!(series.values[i] > 0.0)) {
      throw DegenerateWindow("non-positive norm at t = " + std::to_string(t));
    }
    x.push_back(std::log(t));
    y.push_back(std::log(series.values[i]));
  }
  if (x.size() < 8) {
    throw DegenerateWindow(std::to_string(x.size()) + " points in [" +
                           std::to_string(window.t_min) + ", " + std::to_string(window.t_max) +
                           "], need 8");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateWindow("window holds a single time");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(x.size());
  fit.t_min = std::exp(x.front());
  fit.t_max = std::exp(x.back());
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_residual =
        std::max(fit.max_residual, std::fabs(y[i] - fit.intercept - fit.slope * x[i]));
  }
  return fit;
}

double slope_drift(const NormSeries& series, FitWindow window) {
  const DecayFit base = decay_fit(series, window);
  const DecayFit late = decay_fit(series, {2.0 * window.t_min, window.t_max});
  return std::fabs(base.slope - late.slope);
}

namespace {

// A^{-1} a with A = |xi|^beta - p, spectral coefficients.
Field elliptic_base(const CauchyProblem& problem, const ResolventOptions& options) {
  problem.validate();
  if (!(problem.p.delta0() > 0.0)) {
    throw NotCoercive("potential must satisfy p <= -delta0 with delta0 > 0");
  }
  const Field a_hat = to_spectral(problem.a);
  auto x = detail::solve_shifted(problem, cplx(0.0, 0.0), a_hat.values, options, nullptr);
  return Field(problem.grid, std::move(x), Representation::spectral);
}

double profile_factor(double alpha, double t) {
  return std::pow(t, -alpha) / std::tgamma(1.0 - alpha);
}

}  // namespace

Field elliptic_profile_solve(const CauchyProblem& problem, double t,
                             const ResolventOptions& options) {
  if (!(t > 0.0)) throw std::invalid_argument("elliptic_profile_solve: t must be positive");
  Field v = elliptic_base(problem, options);
  const double f = profile_factor(problem.orders.alpha, t);
  for (auto& c : v.values) c *= f;
  return v;
}

NormSeries profile_gap(const CauchyProblem& problem, const std::vector<double>& times,
                       const SectorContour& contour, const ResolventOptions& options) {
  const Field base = elliptic_base(problem, options);
  const double half_beta = 0.5 * problem.orders.beta;
  NormSeries out;
  out.spec = {half_beta, NormKind::inhomogeneous};
  out.solver_path = "contour-elliptic";
  out.times = times;
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("profile_gap: times must be positive");
    Field u = contour_invert(problem, t, contour, nullptr, options);
    const double f = profile_factor(problem.orders.alpha, t);
    for (std::size_t k = 0; k < u.values.size(); ++k) u.values[k] -= f * base.values[k];
    out.values.push_back(sobolev_norm(u, half_beta, NormKind::inhomogeneous));
  }
  out.validate();
  return out;
}

const char* to_string(Verdict verdict) noexcept {
  return verdict == Verdict::trivial ? "TRIVIAL" : "POSITIVE_LIMIT";
}

TrivialityResult triviality_probe(const CauchyProblem& problem, const std::vector<double>& times,
                                  double margin, const SectorContour& contour,
                                  const ResolventOptions& options) {
  problem.validate();
  if (!(problem.p.delta0() > 0.0)) {
    throw NotCoercive("triviality probe needs delta0 > 0");
  }
  if (times.size() < 4) throw std::invalid_argument("triviality probe needs at least 4 times");
  TrivialityResult res;
  res.times = times;
  const double alpha = problem.orders.alpha;
  const double half_beta = 0.5 * problem.orders.beta;

  if (l2_norm(problem.a) == 0.0) {
    res.verdict = Verdict::trivial;
    res.scaled.assign(times.size(), 0.0);
    return res;
  }

  const NormSeries s = sweep_norms(problem, times, {half_beta, NormKind::inhomogeneous}, contour,
                                   options);
  for (std::size_t i = 0; i < times.size(); ++i) {
    res.scaled.push_back(std::pow(times[i], alpha) * s.values[i]);
  }

  // t^alpha ||u|| = L + c t^{-alpha} + O(t^{-2 alpha}).
  const std::size_t first = times.size() / 2;
  double mx = 0.0;
  double my = 0.0;
  const double n = static_cast<double>(times.size() - first);
  for (std::size_t i = first; i < times.size(); ++i) {
    mx += std::pow(times[i], -alpha);
    my += res.scaled[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = first; i < times.size(); ++i) {
    const double dx = std::pow(times[i], -alpha) - mx;
    sxx += dx * dx;
    sxy += dx * (res.scaled[i] - my);
  }
  res.limit = my - (sxx > 0.0 ? sxy / sxx : 0.0) * mx;
  res.drift = std::fabs(res.limit - res.scaled.back());

  const Field base = elliptic_base(problem, options);
  res.expected_limit = sobolev_norm(base, half_beta, NormKind::inhomogeneous) /
                       std::tgamma(1.0 - alpha);

  if (res.limit > margin * res.drift) {
    res.verdict = Verdict::positive_limit;
    return res;
  }
  throw Inconclusive("limit estimate " + std::to_string(res.limit) + " not above " +
                     std::to_string(margin) + " x drift " + std::to_string(res.drift));
}

std::string theorem_case(const CauchyProblem& problem) {
  const double d = problem.grid->dim();
  const double beta = problem.orders.beta;
  if (d <= beta) return "d<=beta";
  return problem.p.delta0() > 0.0 ? "d>beta,coercive" : "d>beta";
}

std::vector<double> log_times(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
    throw std::invalid_argument("log_times needs 0 < t_min < t_max and count >= 2");
  }
  std::vector<double> out(count);
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

void write_series_csv(const std::filesystem::path& path, const NormSeries& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "t,norm,gamma,homogeneous,solver_path\n" << std::setprecision(17);
  const int homogeneous = series.spec.kind == NormKind::inhomogeneous ? 0 : 1;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << series.times[i] << ',' << series.values[i] << ',' << series.spec.gamma << ','
        << homogeneous << ',' << series.solver_path << '\n';
  }
}

}  // namespace fdlab
