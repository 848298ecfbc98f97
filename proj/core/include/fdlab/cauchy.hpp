#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "fdlab/spectral.hpp"

namespace fdlab {

/// Fractional diffusion problem on the lattice:
/// D_t^alpha u + (-Laplacian)^{beta/2} u = p u, u(0) = a.
struct CauchyProblem {
  FractionalOrders orders;
  GridPtr grid;
  Field a;
  Potential p;

  CauchyProblem(FractionalOrders o, Field datum, Potential potential);
  void validate() const;
};

/// Midpoint of (pi/2, min(pi, pi/(2 alpha))).
double default_theta0(double alpha);

/// Complex time inside the analyticity sector |arg z| < theta0.
struct SectorPoint {
  cplx z{1.0, 0.0};
  double theta0 = 0.0;  // 0 selects default_theta0(alpha)

  SectorPoint() = default;
  SectorPoint(cplx z_, double theta0_ = 0.0) : z(z_), theta0(theta0_) {}  // NOLINT
  void validate(double alpha) const;
};

/// Laplace inversion contour: rays at +-theta0 joined by an arc of radius eps.
/// Zero values ask for adaptive choices (see contour_invert).
struct SectorContour {
  double theta0 = 0.0;
  double eps = -1.0;   // < 0: choose automatically
  double R = 0.0;      // 0: choose from the e^{st} decay
  int n_ray = 0;       // 0: choose from the analyticity strip of the integrand
  int n_arc = 48;
};

/// How the free propagator evaluates its multiplier.
enum class KernelKind {
  mittag_leffler,  // E_{alpha,1}(-|xi|^beta t^alpha)
  exponential      // exp(-|xi|^beta t), the alpha = 1 test path
};

Field free_propagate(const CauchyProblem& problem, double t,
                     KernelKind kind = KernelKind::mittag_leffler);
/// Complex-time form on the sector; acts on any field over the problem grid.
Field free_propagate(const Field& a, const FractionalOrders& orders, cplx z,
                     KernelKind kind = KernelKind::mittag_leffler);

/// Multiplier -|xi|^beta z^{alpha-1} E_{alpha,alpha}(-|xi|^beta z^alpha).
Field free_propagate_derivative(const Field& a, const FractionalOrders& orders,
                                const SectorPoint& z);

struct PicardOptions {
  int max_iterates = 200;
  int elements = 2;          // polynomial elements in w = (tau)^alpha
  int base_degree = 12;      // interpolation degree at level 0
  int base_gauss = 16;       // Gauss points per panel at level 0
  int max_level = 4;         // refinement levels tried
};

struct PicardReport {
  int iterates_used = 0;
  std::vector<double> increment_norms;  // max over time nodes of the l2 increment
  std::vector<double> envelope;         // certified bound per iterate
  double certified_bound = 0.0;         // envelope at the last iterate
  double envelope_constant = 0.0;       // C fitted from the first increment
  double envelope_rate = 0.0;           // Gamma(alpha) |z|^alpha ||p|| sup|E_{alpha,alpha}|
  int level = 0;                        // refinement level accepted
  int nodes = 0;                        // time nodes at that level
  double refinement_change = 0.0;       // relative change against the previous level
};

/// Picard iteration on the mild form along the ray {z sigma : 0 <= sigma <= 1}.
/// Stops when the increment falls below tol * ||a||; refines the time
/// discretisation until u(z) changes by less than tol / 10.
std::pair<Field, PicardReport> picard_solve(const CauchyProblem& problem, const SectorPoint& z,
                                            double tol, const PicardOptions& options = {});

struct ResolventOptions {
  double tol = 1e-10;
  int max_iter = 500;
  int restart = 60;
};

struct ResolventStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Spectral coefficients of the Laplace transform:
/// (|xi|^beta + s^alpha - p) U = s^{alpha-1} a, preconditioned GMRES.
Field laplace_resolvent_solve(const CauchyProblem& problem, cplx s,
                              const ResolventOptions& options = {},
                              ResolventStats* stats = nullptr);

struct ContourReport {
  double theta0 = 0.0;
  double eps = 0.0;
  double r_min = 0.0;
  double R = 0.0;
  double step = 0.0;
  int ray_nodes = 0;
  int arc_nodes = 0;
  int resolvent_iterations = 0;
  double max_residual = 0.0;
  double tail_change = 0.0;  // relative effect of extending R to 2R
};

/// Bromwich inversion on the deformed contour, trapezoid in log r on the rays.
Field contour_invert(const CauchyProblem& problem, double t, const SectorContour& contour = {},
                     ContourReport* report = nullptr, const ResolventOptions& options = {});

struct AnalyticitySample {
  double radius = 0.0;
  cplx z;
  double norm = 0.0;
  int iterates = 0;
};

struct AnalyticityResult {
  std::vector<AnalyticitySample> samples;
  double slope = 0.0;
  double intercept = 0.0;
  double expected_slope = 0.0;  // -(gamma/beta) alpha
};

/// Picard solutions along the ray arg z = ray_angle, norm kind and index
/// as given; the log-log slope is fitted over all radii.
AnalyticityResult analyticity_probe(const CauchyProblem& problem, double ray_angle,
                                    const std::vector<double>& radii, double gamma,
                                    NormKind kind = NormKind::inhomogeneous, double tol = 1e-10,
                                    double theta0 = 0.0);

/// max over grid and sampled z of |xi|^gamma |z|^{gamma alpha / beta} / |1 + |xi|^beta z^alpha|.
double symbol_bound(const SpectralGrid& grid, const FractionalOrders& orders,
                    const std::vector<cplx>& zs);

}  // namespace fdlab
