#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fdlab/cauchy.hpp"
#include "fdlab/spectral.hpp"

namespace fdlab {

struct NormSpec {
  double gamma = 0.0;
  NormKind kind = NormKind::inhomogeneous;
};

struct NormSeries {
  std::vector<double> times;
  std::vector<double> values;
  NormSpec spec;
  std::string solver_path = "contour";

  void validate() const;
};

struct FitWindow {
  double t_min = 1e2;
  double t_max = 1e4;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double max_residual = 0.0;  // largest |log residual| of the fit
  int points = 0;
};

/// ||u(t)|| for each t, u from contour_invert.
NormSeries sweep_norms(const CauchyProblem& problem, const std::vector<double>& times,
                       NormSpec spec, const SectorContour& contour = {},
                       const ResolventOptions& options = {});

/// Least squares on (log t, log value) over the points inside the window.
/// Throws DegenerateWindow with fewer than 8 points or a non-positive value.
DecayFit decay_fit(const NormSeries& series, FitWindow window = {});

/// |slope(window) - slope(window with t_min doubled)|.
double slope_drift(const NormSeries& series, FitWindow window = {});

/// Solves ((-Laplacian)^{beta/2} - p) v = t^{-alpha} / Gamma(1 - alpha) a.
/// Throws NotCoercive unless the potential certifies delta0 > 0.
Field elliptic_profile_solve(const CauchyProblem& problem, double t,
                             const ResolventOptions& options = {});

/// ||u(t) - v(t)|| in H^{beta/2}; v from a single elliptic solve rescaled per t.
NormSeries profile_gap(const CauchyProblem& problem, const std::vector<double>& times,
                       const SectorContour& contour = {}, const ResolventOptions& options = {});

enum class Verdict { trivial, positive_limit };

const char* to_string(Verdict verdict) noexcept;

struct TrivialityResult {
  Verdict verdict = Verdict::trivial;
  std::vector<double> times;
  std::vector<double> scaled;   // t^alpha ||u(t)||_{H^{beta/2}}
  double limit = 0.0;           // extrapolated to t = infinity
  double drift = 0.0;           // |limit - last scaled value|
  double expected_limit = 0.0;  // ||A^{-1} a||_{H^{beta/2}} / Gamma(1 - alpha)
};

/// Estimates lim t^alpha ||u(t)||_{H^{beta/2}} by a linear fit in t^{-alpha}
/// over the second half of the times. POSITIVE_LIMIT when the limit exceeds
/// `margin` times its drift, TRIVIAL for a vanishing datum; otherwise throws
/// Inconclusive.
TrivialityResult triviality_probe(const CauchyProblem& problem, const std::vector<double>& times,
                                  double margin = 10.0, const SectorContour& contour = {},
                                  const ResolventOptions& options = {});

/// Which rate the decay theorem predicts for this problem.
std::string theorem_case(const CauchyProblem& problem);

/// Geometric grid of `count` times from t_min to t_max inclusive.
std::vector<double> log_times(double t_min, double t_max, int count);

/// CSV with header t,norm,gamma,homogeneous,solver_path.
void write_series_csv(const std::filesystem::path& path, const NormSeries& series);

}  // namespace fdlab
