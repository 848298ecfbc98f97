// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fdlab/asymptotics.hpp"
#include "fdlab/bounded.hpp"
#include "fdlab/cauchy.hpp"
#include "fdlab/mittag_leffler.hpp"
#include "fdlab/profiles.hpp"

using namespace fdlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double rel_l2(const Field& a, const Field& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

Outcome kernel() {
  double e11 = 0.0;
  for (int i = 0; i <= 6000; ++i) {
    const double x = -30.0 + 60.0 * i / 6000.0;
    e11 = std::max(e11, std::abs(ml({1.0, 1.0}, x).value - std::exp(x)) / std::exp(x));
  }
  // Crossover annulus: both expansions are valid for |z|^{1/alpha} in [21, 22].
  double overlap = 0.0;
  for (double alpha = 0.3; alpha < 0.95; alpha += 0.1) {
    MLConfig cfg;
    cfg.asymptotic_radius = 0.999 * std::pow(21.0, alpha);
    const MittagLeffler f({alpha, 1.0}, cfg);
    for (double s = 21.0; s <= 22.0; s += 0.05) {
      const cplx z = -std::pow(s, alpha);
      const cplx a = f.asymptotic(z).value;
      const cplx b = f.series(z, 1e-30).value;
      overlap = std::max(overlap, std::abs(a - b) / std::abs(b));
    }
  }
  bool monotone = true;
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const MittagLeffler f({alpha, 1.0});
    double prev = f.value(0.0).real();
    for (int i = 0; i < 1000; ++i) {
      const double x = std::pow(10.0, -8.0 + 14.0 * i / 999.0);
      const double v = f.value(-x).real();
      if (!(v > 0.0) || v > prev) monotone = false;
      prev = v;
    }
  }
  return {e11 < 1e-12 && overlap < 1e-8 && monotone,
          fmt("E11 rel %.2e, overlap rel %.2e, monotone %.0f", e11, overlap, monotone)};
}

Outcome heat_oracle() {
  const auto g = make_grid(1, 1024, 20.0);
  const double sigma = 1.0;
  const double t = 1.0;
  const CauchyProblem pr({0.5, 2.0, 0.0}, gaussian_datum(g, sigma), constant_potential(g, 0.0));
  const Field u = to_physical(free_propagate(pr, t, KernelKind::exponential));
  // symbol |xi|^2 with xi = k / (2L) is -Laplacian / (4 pi^2)
  const double s2 = sigma * sigma + t / (2.0 * std::numbers::pi * std::numbers::pi);
  Field exact(g, Representation::physical);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double x = g->coordinate(i, 0);
    exact.values[i] = sigma / std::sqrt(s2) * std::exp(-x * x / (2.0 * s2));
  }
  const double e = rel_l2(u, exact);
  return {e < 1e-8, fmt("relative l2 %.2e", e)};
}

Outcome decay_supercritical() {
  const auto g = make_grid(1, 512, 20.0);
  const auto times = log_times(1e2, 1e4, 12);
  bool ok = true;
  std::string d;
  for (double alpha : {0.3, 0.6}) {
    const CauchyProblem pr({alpha, 0.5, 0.25}, gaussian_datum(g, 1.0), constant_potential(g, -1.0));
    const DecayFit f = decay_fit(sweep_norms(pr, times, {0.25, NormKind::homogeneous_seminorm}));
    ok = ok && std::fabs(f.slope + alpha) <= 0.05;
    d += fmt("alpha %.1f slope %.4f; ", alpha, f.slope);
  }
  return {ok, d};
}

Outcome decay_subcritical() {
  const auto g = make_grid(1, 512, 20.0);
  const CauchyProblem pr({0.5, 1.5, 0.75}, gaussian_datum(g, 1.0), constant_potential(g, 0.0));
  const DecayFit f =
      decay_fit(sweep_norms(pr, log_times(1e2, 1e4, 12), {0.75, NormKind::homogeneous_seminorm}));
  return {f.slope <= -0.20, fmt("slope %.4f (bound -0.20)", f.slope)};
}

CauchyProblem coercive_problem(const Field& a) {
  return CauchyProblem({0.4, 2.0, 1.0}, a, constant_potential(a.grid, -1.0));
}

Outcome profile() {
  const auto g = make_grid(1, 512, 20.0);
  const DecayFit f = decay_fit(profile_gap(coercive_problem(gaussian_datum(g, 1.0)), log_times(1e2, 1e4, 12)));
  return {std::fabs(f.slope + 0.8) <= 0.1, fmt("slope %.4f (target -0.8)", f.slope)};
}

Outcome triviality() {
  const auto g = make_grid(1, 512, 20.0);
  const auto times = log_times(1e2, 1e4, 12);
  const auto zero = triviality_probe(coercive_problem(Field(g, Representation::physical)), times);
  const auto gauss = triviality_probe(coercive_problem(gaussian_datum(g, 1.0)), times);
  const double rel = std::fabs(gauss.limit / gauss.expected_limit - 1.0);
  return {zero.verdict == Verdict::trivial && gauss.verdict == Verdict::positive_limit && rel <= 0.05,
          std::string("zero datum ") + to_string(zero.verdict) + ", gaussian " +
              to_string(gauss.verdict) + fmt(" limit %.5f vs %.5f (rel %.1e)", gauss.limit,
                                             gauss.expected_limit, rel)};
}

IntervalProblem interval(double beta, int N) {
  IntervalProblem pr;
  pr.length = std::numbers::pi;
  pr.orders = {0.3, beta, 0.0};
  pr.N = N;
  pr.p = [](double x) { return -1.0 - std::sin(x); };
  return pr;
}

Outcome bounded_rate() {
  const auto times = log_times(1e2, 1e4, 12);
  bool ok = true;
  std::string d;
  for (double beta : {1.0, 2.0}) {
    IntervalProblem pr = interval(beta, 512);
    for (int n = 1; n <= 512; ++n) pr.a_coeffs.push_back(1.0 / (double(n) * n));
    const EigenSystem es = eigen_solve(assemble_operator(pr));
    double lo = 0.0;
    double hi = -1.0;
    for (double gamma : {0.0, beta / 2.0, beta}) {
      const double s = decay_check_bounded(pr, es, times, gamma).fit.slope;
      ok = ok && std::fabs(s + 0.3) <= 0.05;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    ok = ok && hi - lo <= 0.05;
    d += fmt("beta %.0f slopes in [%.4f, %.4f]; ", beta, lo, hi);
  }
  return {ok, d};
}

Outcome blowup() {
  const double delta = 0.2;
  bool ok = true;
  std::string d;
  for (double beta : {1.0, 2.0}) {
    const BlowupResult r = regularity_blowup_probe(
        interval(beta, 64), beta * (1.0 + delta), 1e3, {64, 128, 256, 512, 1024, 2048},
        [&](int n) { return std::pow(n, -0.5 - delta / 4.0); });
    const double ratio_err = std::fabs(r.time_ratio / r.expected_ratio - 1.0);
    ok = ok && r.min_growth > 1.05 && ratio_err <= 0.05;
    d += fmt("beta %.0f min growth %.4f, time ratio %.5f vs %.5f; ", beta, r.min_growth,
             r.time_ratio, r.expected_ratio);
  }
  return {ok, d};
}

Outcome cross_path() {
  const auto g = make_grid(1, 128, 10.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  PicardOptions opt;
  opt.max_iterates = 400;
  bool ok = true;
  std::string d;
  for (double t : {0.5, 1.0, 5.0}) {
    const auto [u, rep] = picard_solve(pr, SectorPoint(cplx(t, 0.0)), 1e-10, opt);
    double worst = 0.0;
    for (std::size_t n = 0; n < rep.increment_norms.size(); ++n) {
      worst = std::max(worst, rep.increment_norms[n] / rep.envelope[n]);
    }
    const double e = rel_l2(u, contour_invert(pr, t));
    ok = ok && e < 1e-6 && worst <= 1.0 + 1e-12;
    d += fmt("t %.1f rel %.1e, increment/envelope %.2f; ", t, e, worst);
  }
  return {ok, d};
}

Outcome analyticity() {
  const auto g = make_grid(1, 1024, 1.0);
  const CauchyProblem pr({0.5, 2.0, 1.0}, power_law_datum(g, 0.5), cosine_potential(g, -1.0, -0.5));
  std::vector<double> radii;
  for (int i = 0; i <= 4; ++i) radii.push_back(1e-7 * std::pow(100.0, i / 4.0));
  bool ok = true;
  std::string d;
  for (double frac : {0.0, 0.9}) {
    const auto r = analyticity_probe(pr, frac * default_theta0(0.5), radii, 1.0,
                                     NormKind::homogeneous_seminorm, 1e-10);
    ok = ok && std::fabs(r.slope - r.expected_slope) <= 0.05;
    d += fmt("ray %.1f theta0 slope %.4f (target %.3f); ", frac, r.slope, r.expected_slope);
  }
  return {ok, d};
}

struct Criterion {
  const char* name;
  double budget;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"C1  mittag-leffler kernel", 10.0, kernel},
      {"C2  heat oracle", 5.0, heat_oracle},
      {"C3  decay rate, d > beta", 120.0, decay_supercritical},
      {"C4  decay rate, d <= beta", 120.0, decay_subcritical},
      {"C5  elliptic profile gap", 180.0, profile},
      {"C6  triviality probe", 120.0, triviality},
      {"C7  interval decay rate", 60.0, bounded_rate},
      {"C8  regularity blow-up", 60.0, blowup},
      {"C9  picard vs contour", 120.0, cross_path},
      {"C10 short-time analyticity", 120.0, analyticity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget;
    failed += pass ? 0 : 1;
    std::printf("%s %-28s %7.2fs (budget %.0fs)  %s\n", pass ? "PASS" : "FAIL", c.name, secs, c.budget,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
