#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fdlab/cauchy.hpp"
#include "fdlab/errors.hpp"
#include "fdlab/quadrature.hpp"

namespace fdlab {

namespace {

constexpr double kTailDecay = 27.6;  // |e^{st}| = 1e-12 at the truncation radius

// Lower bound on the spectrum of |xi|^beta - p used to size the r -> 0 tail.
double coercivity_estimate(const CauchyProblem& problem) {
  if (problem.p.delta0() > 0.0) return problem.p.delta0();
  if (problem.p.is_constant()) return -problem.p.mean();
  const double lam1 = std::pow(1.0 / (2.0 * problem.grid->half_width()), problem.orders.beta);
  return 0.1 * std::min(lam1, -problem.p.mean());
}

struct Accumulator {
  const CauchyProblem& problem;
  double t;
  const ResolventOptions& options;
  ContourReport& report;
  std::vector<cplx> sum;

  // Adds weight * e^{st} * U(s), U the resolvent solution.
  void add(cplx s, cplx weight) {
    ResolventStats stats;
    const Field U = laplace_resolvent_solve(problem, s, options, &stats);
    report.resolvent_iterations += stats.iterations;
    report.max_residual = std::max(report.max_residual, stats.relative_residual);
    const cplx f = weight * std::exp(s * t);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += f * U.values[k];
  }
};

}  // namespace

Field contour_invert(const CauchyProblem& problem, double t, const SectorContour& contour,
                     ContourReport* report_out, const ResolventOptions& options) {
  problem.validate();
  if (!(t > 0.0)) throw std::invalid_argument("contour_invert: t must be positive");
  const double alpha = problem.orders.alpha;
  const double theta0 = contour.theta0 > 0.0 ? contour.theta0 : default_theta0(alpha);
  if (!(theta0 > 0.5 * std::numbers::pi && theta0 < std::numbers::pi)) {
    throw std::invalid_argument("contour half-angle must lie in (pi/2, pi)");
  }
  if (contour.n_arc < 16) throw std::invalid_argument("contour needs at least 16 arc nodes");
  if (contour.n_ray != 0 && contour.n_ray < 16) {
    throw std::invalid_argument("contour needs at least 16 ray nodes");
  }

  ContourReport report;
  report.theta0 = theta0;
  const double eps = contour.eps >= 0.0 ? contour.eps : (problem.p.is_zero() ? 1.0 / t : 0.0);
  report.eps = eps;
  const double decay = std::fabs(std::cos(theta0));
  const double R = contour.R > 0.0 ? contour.R : std::max(kTailDecay / (t * decay), 10.0 * eps);
  report.R = R;
  if (!(R > eps)) throw std::invalid_argument("contour outer radius must exceed eps");

  const std::size_t n = problem.grid->size();
  Accumulator acc{problem, t, options, report, std::vector<cplx>(n, cplx(0.0, 0.0))};
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  const cplx up = std::polar(1.0, theta0);
  const cplx down = std::polar(1.0, -theta0);

  // Ray node set as (v, weight) in v = log r; contributions
  // (1/2 pi i) e^{st} U(s) s dv on the upper ray, minus the same on the lower.
  std::vector<std::pair<double, double>> ray;
  if (eps == 0.0) {
    const double m = coercivity_estimate(problem);
    if (!(m > 0.0)) {
      throw std::invalid_argument("eps = 0 needs a positive spectrum; use an arc (eps > 0)");
    }
    const double r_min = std::pow(1e-13 * alpha * m, 1.0 / alpha);
    report.r_min = r_min;
    const double d = std::min(theta0 - 0.5 * std::numbers::pi, std::numbers::pi - theta0);
    const double v_min = std::log(r_min);
    const double v_max = std::log(R);
    double h;
    int count;
    if (contour.n_ray > 0) {
      count = contour.n_ray;
      h = (v_max - v_min) / (count - 1);
    } else {
      h = 2.0 * std::numbers::pi * d / 40.0;
      count = static_cast<int>(std::ceil((v_max - v_min) / h)) + 1;
    }
    report.step = h;
    for (int k = 0; k < count; ++k) ray.emplace_back(v_min + k * h, h);
  } else {
    report.r_min = eps;
    const std::size_t order = 20;
    const auto& g = gauss_legendre(order);
    const double v0 = std::log(eps);
    const double v1 = std::log(R);
    const int panels = std::max(1, contour.n_ray > 0 ? contour.n_ray / static_cast<int>(order)
                                                     : static_cast<int>(std::ceil((v1 - v0) / 0.4)));
    const double width = (v1 - v0) / panels;
    report.step = width;
    for (int p = 0; p < panels; ++p) {
      const double a = v0 + p * width;
      for (std::size_t i = 0; i < order; ++i) {
        ray.emplace_back(a + 0.5 * width * (g.nodes[i] + 1.0), 0.5 * width * g.weights[i]);
      }
    }
    // Arc s = eps e^{i phi}, phi in [-theta0, theta0]: (1/2 pi) e^{st} U(s) s dphi.
    const auto& ga = gauss_legendre(static_cast<std::size_t>(contour.n_arc));
    for (std::size_t i = 0; i < ga.nodes.size(); ++i) {
      const double phi = theta0 * ga.nodes[i];
      const cplx s = std::polar(eps, phi);
      acc.add(s, theta0 * ga.weights[i] * s / (2.0 * std::numbers::pi));
    }
    report.arc_nodes = static_cast<int>(ga.nodes.size());
  }
  report.ray_nodes = static_cast<int>(ray.size());
  for (const auto& [v, w] : ray) {
    const double r = std::exp(v);
    acc.add(r * up, w * r * up / two_pi_i);
    acc.add(r * down, -w * r * down / two_pi_i);
  }

  // Tail check: the part of the rays between R and 2R.
  Accumulator tail{problem, t, options, report, std::vector<cplx>(n, cplx(0.0, 0.0))};
  {
    const std::size_t order = 24;
    const auto& g = gauss_legendre(order);
    const double a = std::log(R);
    const double width = std::log(2.0);
    for (std::size_t i = 0; i < order; ++i) {
      const double v = a + 0.5 * width * (g.nodes[i] + 1.0);
      const double w = 0.5 * width * g.weights[i];
      const double r = std::exp(v);
      tail.add(r * up, w * r * up / two_pi_i);
      tail.add(r * down, -w * r * down / two_pi_i);
    }
  }
  double norm_sum = 0.0;
  double norm_tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    norm_sum += std::norm(acc.sum[k]);
    norm_tail += std::norm(tail.sum[k]);
  }
  report.tail_change = norm_sum > 0.0 ? std::sqrt(norm_tail / norm_sum) : std::sqrt(norm_tail);
  if (report_out) *report_out = report;
  if (report.tail_change > 1e-8 && norm_sum > 0.0) {
    throw TailNotConverged("extending the contour from R = " + std::to_string(R) +
                           " to 2R changes the result by " + std::to_string(report.tail_change));
  }
  return Field(problem.grid, std::move(acc.sum), Representation::spectral);
}

}  // namespace fdlab
