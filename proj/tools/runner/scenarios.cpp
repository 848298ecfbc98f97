#include "runner/scenarios.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>

#include "fdlab/bounded.hpp"
#include "fdlab/diagnostics.hpp"
#include "fdlab/errors.hpp"
#include "fdlab/profiles.hpp"

namespace fdlab::runner {

using json = nlohmann::ordered_json;

bool RunResult::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["scenario"] = to_string(c.scenario);
  j["orders"] = {{"alpha", c.orders.alpha}, {"beta", c.orders.beta}};
  j["grid"] = {{"dim", c.dim}, {"n", c.n}, {"half_width", c.half_width}};
  j["interval"] = {{"length", c.length}, {"N", c.N}, {"quad_panels", c.quad_panels}};
  j["potential"] = {{"kind", c.potential.kind}, {"c", c.potential.c}, {"c0", c.potential.c0},
                    {"c1", c.potential.c1}};
  j["datum"] = {{"kind", c.datum.kind},   {"sigma", c.datum.sigma},
                {"amplitude", c.datum.amplitude}, {"exponent", c.datum.exponent},
                {"k", c.datum.k},         {"amplitudes", c.datum.amplitudes}};
  j["times"] = c.times;
  j["fit"] = {{"t_min", c.window.t_min}, {"t_max", c.window.t_max}};
  j["norm"] = {{"gamma", c.norm_gamma}, {"kind", to_string(c.norm_kind)}};
  j["bounded"] = {{"gammas", c.gammas}};
  j["blowup"] = {{"N_list", c.N_list}, {"delta", c.delta}, {"t", c.probe_time}};
  j["analyticity"] = {{"rays", c.rays}, {"radii", c.radii}};
  j["triviality"] = {{"margin", c.margin}};
  j["contour"] = {{"theta0", c.contour.theta0}, {"eps", c.contour.eps}, {"R", c.contour.R},
                  {"n_ray", c.contour.n_ray}, {"n_arc", c.contour.n_arc}};
  j["resolvent"] = {{"tol", c.resolvent.tol}, {"max_iter", c.resolvent.max_iter},
                    {"restart", c.resolvent.restart}};
  j["picard"] = {{"tol", c.picard_tol},
                 {"max_iterates", c.picard.max_iterates},
                 {"elements", c.picard.elements},
                 {"base_degree", c.picard.base_degree},
                 {"base_gauss", c.picard.base_gauss},
                 {"max_level", c.picard.max_level}};
  j["assert"] = {{"slope_tol", c.checks.slope_tol},
                 {"limit_rel_tol", c.checks.limit_rel_tol},
                 {"min_growth", c.checks.min_growth},
                 {"ratio_rel_tol", c.checks.ratio_rel_tol},
                 {"crosscheck_rel_tol", c.checks.crosscheck_rel_tol}};
  j["output"] = {{"dir", c.out_dir.string()}, {"eigen_csv", c.eigen_csv}};
  j["resolution_scale"] = c.resolution_scale;
  return j;
}

CauchyProblem lattice_problem(const ExperimentConfig& c) {
  const GridPtr g = make_grid(c.dim, c.n, c.half_width);
  Field a;
  const auto& d = c.datum;
  if (d.kind == "gaussian") {
    a = gaussian_datum(g, d.sigma, d.amplitude);
  } else if (d.kind == "power_law") {
    a = power_law_datum(g, d.exponent, d.amplitude);
  } else if (d.kind == "zero") {
    a = Field(g, Representation::physical);
  } else {
    std::vector<LatticeMode> modes;
    for (std::size_t i = 0; i < d.k.size(); ++i) {
      modes.push_back({{d.k[i], 0, 0}, d.amplitude * d.amplitudes[i]});
    }
    a = mode_datum(g, modes);
  }
  const auto& p = c.potential;
  Potential pot = p.kind == "cosine"   ? cosine_potential(g, p.c0, p.c1)
                  : p.kind == "constant" ? constant_potential(g, p.c)
                                         : constant_potential(g, 0.0);
  return CauchyProblem(c.orders, std::move(a), std::move(pot));
}

IntervalProblem interval_problem(const ExperimentConfig& c) {
  IntervalProblem pr;
  pr.length = c.length;
  pr.orders = c.orders;
  pr.N = c.N;
  pr.quad_panels = c.quad_panels;
  const auto& p = c.potential;
  const double L = c.length;
  if (p.kind == "constant") {
    pr.p = [v = p.c](double) { return v; };
  } else if (p.kind == "sine_profile") {
    pr.p = [c0 = p.c0, c1 = p.c1, L](double x) { return c0 + c1 * std::sin(std::numbers::pi * x / L); };
  }
  for (int n = 1; n <= c.N; ++n) pr.a_coeffs.push_back(c.datum.amplitude * std::pow(n, -c.datum.exponent));
  return pr;
}

json fit_json(const DecayFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"window", {f.t_min, f.t_max}},
          {"points", f.points},
          {"residual", f.max_residual}};
}

class Artifacts {
 public:
  Artifacts(const ExperimentConfig& c, bool enabled, RunResult& r)
      : dir_(c.out_dir), enabled_(enabled), result_(r) {
    if (enabled_) std::filesystem::create_directories(dir_);
  }

  void series(const std::string& name, const NormSeries& s) {
    if (!enabled_) return;
    write_series_csv(dir_ / name, s);
    result_.artifacts.push_back(name);
  }

  void text(const std::string& name, const std::string& content) {
    if (!enabled_) return;
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << content << '\n';
    result_.artifacts.push_back(name);
  }

  std::filesystem::path path(const std::string& name) {
    result_.artifacts.push_back(name);
    return dir_ / name;
  }

  [[nodiscard]] bool enabled() const { return enabled_; }

 private:
  std::filesystem::path dir_;
  bool enabled_;
  RunResult& result_;
};

void check(RunResult& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

void slope_check(RunResult& r, const std::string& name, double slope, double target, double tol) {
  check(r, name, std::fabs(slope - target) <= tol,
        "slope " + num(slope) + ", expected " + num(target) + " +- " + num(tol));
}

json run_cauchy_decay(const ExperimentConfig& c, RunResult& r, Artifacts& out) {
  const CauchyProblem pr = lattice_problem(c);
  r.theorem_case = theorem_case(pr);
  const NormSeries s = sweep_norms(pr, c.times, {c.norm_gamma, c.norm_kind}, c.contour, c.resolvent);
  const DecayFit f = decay_fit(s, c.window);
  out.series("series.csv", s);
  out.text("fit.json", to_json(f, r.theorem_case));
  const double alpha = c.orders.alpha;
  if (r.theorem_case == "d<=beta") {
    const double bound = -0.5 * alpha + c.checks.slope_tol;
    check(r, "decay slope", f.slope <= bound, "slope " + num(f.slope) + ", bound " + num(bound));
  } else {
    slope_check(r, "decay slope", f.slope, -alpha, c.checks.slope_tol);
  }
  return {{"fit", fit_json(f)}, {"drift", slope_drift(s, c.window)}};
}

json run_profile_gap(const ExperimentConfig& c, RunResult& r, Artifacts& out) {
  const CauchyProblem pr = lattice_problem(c);
  r.theorem_case = "profile gap, " + theorem_case(pr);
  const NormSeries s = profile_gap(pr, c.times, c.contour, c.resolvent);
  const DecayFit f = decay_fit(s, c.window);
  out.series("series.csv", s);
  out.text("fit.json", to_json(f, r.theorem_case));
  slope_check(r, "gap slope", f.slope, -2.0 * c.orders.alpha, c.checks.slope_tol);
  return {{"fit", fit_json(f)}};
}

json run_triviality(const ExperimentConfig& c, RunResult& r, Artifacts& out) {
  const CauchyProblem pr = lattice_problem(c);
  r.theorem_case = "triviality, " + theorem_case(pr);
  const TrivialityResult t = triviality_probe(pr, c.times, c.margin, c.contour, c.resolvent);
  const bool zero = l2_norm(pr.a) == 0.0;
  if (zero) {
    check(r, "verdict", t.verdict == Verdict::trivial,
          std::string("zero datum gave ") + to_string(t.verdict));
  } else {
    check(r, "verdict", t.verdict == Verdict::positive_limit,
          std::string("nonzero datum gave ") + to_string(t.verdict));
    const double rel = std::fabs(t.limit / t.expected_limit - 1.0);
    check(r, "limit", rel <= c.checks.limit_rel_tol,
          "limit " + num(t.limit) + " vs elliptic " + num(t.expected_limit) + ", rel " + num(rel));
  }
  NormSeries s;
  s.times = t.times;
  s.values = t.scaled;
  s.spec = {0.5 * c.orders.beta, NormKind::inhomogeneous};
  s.solver_path = "contour-scaled";
  out.series("series.csv", s);
  return {{"verdict", to_string(t.verdict)},
          {"limit", t.limit},
          {"drift", t.drift},
          {"expected_limit", t.expected_limit}};
}

json run_bounded_decay(const ExperimentConfig& c, RunResult& r, Artifacts& out) {
  const IntervalProblem pr = interval_problem(c);
  r.theorem_case = "bounded domain decay";
  const EigenSystem es = eigen_solve(assemble_operator(pr));
  if (c.eigen_csv && out.enabled()) write_eigen_csv(out.path("eigen.csv"), es);
  json fits = json::array();
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < c.gammas.size(); ++i) {
    const double g = c.gammas[i];
    const BoundedDecay d = decay_check_bounded(pr, es, c.times, g, c.window);
    const std::string tag = "gamma" + std::to_string(i);
    out.series("series_" + tag + ".csv", d.series);
    out.text("fit_" + tag + ".json", to_json(d.fit, r.theorem_case));
    slope_check(r, "slope at gamma " + num(g), d.fit.slope, -c.orders.alpha, c.checks.slope_tol);
    lo = i == 0 ? d.fit.slope : std::min(lo, d.fit.slope);
    hi = i == 0 ? d.fit.slope : std::max(hi, d.fit.slope);
    json fj = fit_json(d.fit);
    fj["gamma"] = g;
    fits.push_back(fj);
  }
  check(r, "rate independent of gamma", hi - lo <= c.checks.slope_tol,
        "slope spread " + num(hi - lo));
  return {{"lambda_1", es.lambdas.front()}, {"fits", fits}};
}

json run_blowup(const ExperimentConfig& c, RunResult& r, Artifacts& out) {
  const IntervalProblem pr = interval_problem(c);
  r.theorem_case = "regularity blow-up, gamma > beta";
  const double gamma = c.orders.beta * (1.0 + c.delta);
  const double e = c.datum.exponent;
  const double amp = c.datum.amplitude;
  const BlowupResult b = regularity_blowup_probe(pr, gamma, c.probe_time, c.N_list,
                                                 [&](int n) { return amp * std::pow(n, -e); });
  check(r, "partial sums grow", b.min_growth > c.checks.min_growth,
        "min S_2N/S_N " + num(b.min_growth) + ", need > " + num(c.checks.min_growth));
  const double rel = std::fabs(b.time_ratio / b.expected_ratio - 1.0);
  check(r, "t^{-2 alpha} scaling", rel <= c.checks.ratio_rel_tol,
        "S(2t)/S(t) " + num(b.time_ratio) + " vs " + num(b.expected_ratio));
  json rows = json::array();
  std::string csv = "N,S,S_2t,growth";
  for (const auto& row : b.rows) {
    rows.push_back({{"N", row.N}, {"S", row.S}, {"S_2t", row.S_2t}, {"growth", row.growth}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "\n%d,%.17g,%.17g,%.17g", row.N, row.S, row.S_2t, row.growth);
    csv += buf;
  }
  out.text("partial_sums.csv", csv);
  return {{"gamma", gamma},
          {"rows", rows},
          {"time_ratio", b.time_ratio},
          {"expected_ratio", b.expected_ratio}};
}

json run_analyticity(const ExperimentConfig& c, RunResult& r, Artifacts& out) {
  const CauchyProblem pr = lattice_problem(c);
  r.theorem_case = "short-time analyticity";
  json rays = json::array();
  for (std::size_t i = 0; i < c.rays.size(); ++i) {
    const double angle = c.rays[i] * c.contour.theta0;
    const AnalyticityResult a = analyticity_probe(pr, angle, c.radii, c.norm_gamma, c.norm_kind,
                                                  c.picard_tol, c.contour.theta0);
    slope_check(r, "slope on ray " + num(c.rays[i]) + " theta0", a.slope, a.expected_slope,
                c.checks.slope_tol);
    std::string csv = "radius,re_z,im_z,norm,iterates";
    for (const auto& s : a.samples) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "\n%.17g,%.17g,%.17g,%.17g,%d", s.radius, s.z.real(),
                    s.z.imag(), s.norm, s.iterates);
      csv += buf;
    }
    out.text("ray" + std::to_string(i) + ".csv", csv);
    rays.push_back({{"angle", angle}, {"slope", a.slope}, {"expected_slope", a.expected_slope}});
  }
  return {{"rays", rays}};
}

json run_crosscheck(const ExperimentConfig& c, RunResult& r, Artifacts& out) {
  const CauchyProblem pr = lattice_problem(c);
  r.theorem_case = "Picard vs contour";
  std::unique_ptr<JsonLinesWriter> log;
  if (out.enabled()) log = std::make_unique<JsonLinesWriter>(out.path("diagnostics.jsonl"));
  json rows = json::array();
  std::string csv = "t,relative_l2,iterates,nodes,worst_envelope_ratio";
  for (double t : c.times) {
    const auto [u, rep] = picard_solve(pr, SectorPoint(cplx(t, 0.0), c.contour.theta0), c.picard_tol,
                                       c.picard);
    ContourReport cr;
    const Field v = contour_invert(pr, t, c.contour, &cr, c.resolvent);
    double num2 = 0.0;
    double den2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      num2 += std::norm(u.values[i] - v.values[i]);
      den2 += std::norm(v.values[i]);
    }
    const double rel = std::sqrt(num2 / den2);
    double worst = 0.0;
    for (std::size_t n = 0; n < rep.increment_norms.size(); ++n) {
      worst = std::max(worst, rep.increment_norms[n] / rep.envelope[n]);
    }
    check(r, "agreement at t " + num(t), rel <= c.checks.crosscheck_rel_tol,
          "relative l2 " + num(rel));
    check(r, "envelope at t " + num(t), worst <= 1.0 + 1e-12,
          "max increment / envelope " + num(worst));
    if (log) {
      log->write("picard", to_json(rep));
      log->write("contour", to_json(cr));
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "\n%.17g,%.17g,%d,%d,%.17g", t, rel, rep.iterates_used, rep.nodes,
                  worst);
    csv += buf;
    rows.push_back({{"t", t}, {"relative_l2", rel}, {"iterates", rep.iterates_used},
                    {"worst_envelope_ratio", worst}});
  }
  out.text("crosscheck.csv", csv);
  return {{"rows", rows}};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& c, bool write_artifacts) {
  RunResult r;
  Artifacts out(c, write_artifacts, r);
  json results;
  switch (c.scenario) {
    case Scenario::cauchy_decay: results = run_cauchy_decay(c, r, out); break;
    case Scenario::profile_gap: results = run_profile_gap(c, r, out); break;
    case Scenario::triviality: results = run_triviality(c, r, out); break;
    case Scenario::bounded_decay: results = run_bounded_decay(c, r, out); break;
    case Scenario::blowup_probe: results = run_blowup(c, r, out); break;
    case Scenario::analyticity: results = run_analyticity(c, r, out); break;
    case Scenario::crosscheck: results = run_crosscheck(c, r, out); break;
  }
  json checks = json::array();
  for (const auto& ch : r.checks) {
    checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
  }
  json doc;
  doc["config"] = config_json(c);
  doc["theorem_case"] = r.theorem_case;
  doc["results"] = results;
  doc["checks"] = checks;
  doc["passed"] = r.passed();
  r.json = doc.dump(2);
  out.text("run.json", r.json);
  return r;
}

void enforce(const RunResult& result) {
  for (const auto& ch : result.checks) {
    if (!ch.passed) {
      throw AssertionFailure("case '" + result.theorem_case + "', check '" + ch.name + "': " + ch.detail);
    }
  }
  if (result.checks.empty()) throw AssertionFailure("case '" + result.theorem_case + "': no checks ran");
}

}  // namespace fdlab::runner
