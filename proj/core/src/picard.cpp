#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fdlab/cauchy.hpp"
#include "fdlab/errors.hpp"
#include "fdlab/mittag_leffler.hpp"
#include "fdlab/quadrature.hpp"
#include "internal.hpp"

namespace fdlab {

namespace {

constexpr double kRatio = 0.25;  // geometric grading factor toward sigma = 0
constexpr double kLocalNorm = 1.0;  // Volterra norm allowed per time element

// g(X) = E_{alpha,alpha}(-omega X) for real X in [0, x_max], piecewise
// Chebyshev interpolation on geometrically growing pieces. Every piece is
// checked against direct evaluation between its nodes and split until the
// interpolant agrees to `tol` relative to the piece maximum.
class RayKernel {
 public:
  RayKernel(const MittagLeffler& ml, cplx omega, double x_max, double tol)
      : ml_(ml), omega_(omega), x_max_(x_max) {
    ref_ = chebyshev_lobatto(kDegree);
    bary_.assign(kDegree + 1, 1.0);
    for (int j = 0; j <= kDegree; ++j) {
      bary_[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == kDegree) ? 0.5 : 1.0);
    }
    double a = 0.0;
    double b = std::min(1e-2, x_max_);
    while (true) {
      add_piece(a, b, tol, 0);
      if (b >= x_max_) break;
      a = b;
      b = std::min(2.0 * b, x_max_);
    }
  }

  [[nodiscard]] cplx operator()(double x) const {
    if (x > x_max_) return ml_.value(-omega_ * x);
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t p = (it == breaks_.begin()) ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    p = std::min(p, pieces_.size() - 1);
    const Piece& piece = pieces_[p];
    const double t = 2.0 * (x - piece.a) / (piece.b - piece.a) - 1.0;
    cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= kDegree; ++j) {
      const double d = t - ref_[j];
      if (d == 0.0) return piece.values[j];
      const double w = bary_[j] / d;
      num += w * piece.values[j];
      den += w;
    }
    return num / den;
  }

  [[nodiscard]] double sup_abs() const noexcept { return sup_; }

 private:
  static constexpr int kDegree = 20;

  struct Piece {
    double a;
    double b;
    std::vector<cplx> values;
  };

  void add_piece(double a, double b, double tol, int depth) {
    Piece piece{a, b, {}};
    piece.values.resize(kDegree + 1);
    double peak = 0.0;
    for (int j = 0; j <= kDegree; ++j) {
      const double x = a + 0.5 * (b - a) * (ref_[j] + 1.0);
      piece.values[j] = ml_.value(-omega_ * x);
      peak = std::max(peak, std::abs(piece.values[j]));
    }
    double err = 0.0;
    for (int j : {0, kDegree / 2, kDegree - 1}) {
      const double t = 0.5 * (ref_[j] + ref_[j + 1]);
      const double x = a + 0.5 * (b - a) * (t + 1.0);
      err = std::max(err, std::abs(interpolate(piece, t) - ml_.value(-omega_ * x)));
    }
    if (err > tol * peak && depth < 12) {
      const double mid = 0.5 * (a + b);
      add_piece(a, mid, tol, depth + 1);
      add_piece(mid, b, tol, depth + 1);
      return;
    }
    sup_ = std::max(sup_, peak);
    breaks_.push_back(a);
    pieces_.push_back(std::move(piece));
  }

  [[nodiscard]] cplx interpolate(const Piece& piece, double t) const {
    cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= kDegree; ++j) {
      const double w = bary_[j] / (t - ref_[j]);
      num += w * piece.values[j];
      den += w;
    }
    return num / den;
  }

  const MittagLeffler& ml_;
  cplx omega_;
  double x_max_;
  std::vector<double> ref_;
  std::vector<double> bary_;
  std::vector<double> breaks_;
  std::vector<Piece> pieces_;
  double sup_ = 0.0;
};

// Piecewise polynomial representation in w = sigma^alpha on [0, 1]:
// elements [0, r^{E-1}], [r^{E-1}, r^{E-2}], ..., [r, 1], Chebyshev-Lobatto
// nodes of degree q inside each, shared at element ends.
struct TimeMesh {
  int elements = 0;
  int degree = 0;
  std::vector<double> breaks;  // size elements + 1
  std::vector<double> w;       // global nodes
  std::vector<double> ref;
  std::vector<double> bary;

  // `kappa` = |z|^alpha sup|p|: geometric elements are subdivided until
  // kappa (sigma-width)^alpha / Gamma(1 + alpha) <= kLocalNorm on each.
  TimeMesh(int e, int q, double alpha, double kappa) : degree(q) {
    std::vector<double> geo(e + 1);
    geo[0] = 0.0;
    for (int k = 1; k <= e; ++k) geo[k] = std::pow(kRatio, e - k);
    breaks.push_back(0.0);
    const double scale = kappa / std::tgamma(1.0 + alpha);
    for (int k = 0; k < e; ++k) {
      const double ds = std::pow(geo[k + 1], 1.0 / alpha) - std::pow(geo[k], 1.0 / alpha);
      const double local = scale * std::pow(ds, alpha);
      const int split =
          local > kLocalNorm ? static_cast<int>(std::ceil(std::pow(local / kLocalNorm, 1.0 / alpha))) : 1;
      // equal sigma-width pieces
      const double s0 = std::pow(geo[k], 1.0 / alpha);
      for (int j = 1; j <= split; ++j) {
        breaks.push_back(j == split ? geo[k + 1] : std::pow(s0 + ds * j / split, alpha));
      }
    }
    elements = static_cast<int>(breaks.size()) - 1;
    e = elements;
    ref = chebyshev_lobatto(q);
    bary = barycentric_weights(ref);
    w.push_back(0.0);
    for (int el = 0; el < e; ++el) {
      for (int l = 1; l <= q; ++l) {
        w.push_back(breaks[el] + 0.5 * (breaks[el + 1] - breaks[el]) * (ref[l] + 1.0));
      }
    }
    w.back() = 1.0;
  }

  [[nodiscard]] std::size_t nodes() const noexcept { return w.size(); }

  // Element containing w and the local Lagrange basis there.
  int locate(double x, std::vector<double>& basis) const {
    auto it = std::upper_bound(breaks.begin() + 1, breaks.end() - 1, x);
    const int el = static_cast<int>(it - breaks.begin()) - 1;
    const double t = 2.0 * (x - breaks[el]) / (breaks[el + 1] - breaks[el]) - 1.0;
    lagrange_basis(ref, bary, std::clamp(t, -1.0, 1.0), basis);
    return el;
  }
};

struct PointRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Composite Gauss-Legendre over consecutive breaks.
PointRule composite(const std::vector<double>& breaks, std::size_t order) {
  const auto& g = gauss_legendre(order);
  PointRule rule;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    if (!(b > a)) continue;
    for (std::size_t i = 0; i < order; ++i) {
      rule.x.push_back(a + 0.5 * (b - a) * (g.nodes[i] + 1.0));
      rule.w.push_back(0.5 * (b - a) * g.weights[i]);
    }
  }
  return rule;
}

// Panels graded geometrically toward 0 on [0, Y]: Y r^k, k = 0..layers.
std::vector<double> graded_breaks(double Y, int layers) {
  std::vector<double> br{0.0};
  for (int k = layers; k >= 1; --k) br.push_back(Y * std::pow(kRatio, k));
  br.push_back(0.5 * Y);
  br.push_back(Y);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

struct LevelResult {
  std::vector<cplx> u_final;
  std::vector<double> increments;
  int nodes = 0;
};

class PicardLevel {
 public:
  PicardLevel(const CauchyProblem& problem, cplx z, int level, const PicardOptions& opt,
              const detail::ModeTable& modes, const std::vector<double>& lambda,
              const RayKernel& kernel, const MittagLeffler& ml_free)
      : problem_(problem),
        modes_(modes),
        mesh_(opt.elements + level + extra_elements(problem, z, lambda),
              opt.base_degree + 4 * level, problem.orders.alpha,
              std::pow(std::abs(z), problem.orders.alpha) * problem.p.sup_abs()),
        alpha_(problem.orders.alpha) {
    omega_ = std::exp(alpha_ * std::log(z));
    const std::size_t nn = mesh_.nodes();
    const std::size_t nm = lambda.size();
    free_.assign(nn * nm, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < nn; ++i) {
      for (std::size_t m = 0; m < nm; ++m) {
        free_[i * nm + m] = ml_free.value(-omega_ * (lambda[m] * mesh_.w[i]));
      }
    }
    if (!problem.p.is_zero()) assemble(opt, level, lambda, kernel);
  }

  LevelResult run(double tol, int max_iterates) const {
    const std::size_t nn = mesh_.nodes();
    const std::size_t nm = modes_.abs_xi.size();
    const SpectralGrid& grid = *problem_.grid;
    const std::size_t n = grid.size();
    const Field a_hat = to_spectral(problem_.a);
    const double a_norm = l2_norm(a_hat);
    const double dv = grid.cell_volume();

    std::vector<std::vector<cplx>> u(nn, std::vector<cplx>(n, cplx(0.0, 0.0)));
    std::vector<std::vector<cplx>> next = u;
    std::vector<std::vector<cplx>> f = u;
    LevelResult out;
    out.nodes = static_cast<int>(nn);
    const bool constant_p = problem_.p.is_constant();
    const double c = problem_.p.mean();
    const auto& pv = problem_.p.values();

    for (int iter = 0; iter < max_iterates; ++iter) {
      // f = p u_n at every node; u_0 = 0
      if (iter > 0 && !problem_.p.is_zero()) {
        for (std::size_t j = 0; j < nn; ++j) {
          if (constant_p) {
            for (std::size_t k = 0; k < n; ++k) f[j][k] = c * u[j][k];
          } else {
            Field phys = inverse_transform(Field(problem_.grid, u[j], Representation::spectral));
            for (std::size_t k = 0; k < n; ++k) phys.values[k] *= pv[k];
            f[j] = forward_transform(phys).values;
          }
        }
      }
      double increment = 0.0;
      for (std::size_t i = 0; i < nn; ++i) {
        auto& row = next[i];
        for (std::size_t k = 0; k < n; ++k) row[k] = free_[i * nm + modes_.index[k]] * a_hat.values[k];
        if (iter > 0 && !weights_.empty()) {
          for (std::size_t j = 0; j <= last_[i]; ++j) {
            const cplx* wij = &weights_[(i * nn + j) * nm];
            const auto& fj = f[j];
            for (std::size_t k = 0; k < n; ++k) row[k] += wij[modes_.index[k]] * fj[k];
          }
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += std::norm(row[k] - u[i][k]);
        increment = std::max(increment, std::sqrt(dv * acc));
      }
      std::swap(u, next);
      out.increments.push_back(increment);
      if (increment < tol * a_norm) {
        out.u_final = u.back();
        return out;
      }
    }
    throw MaxIterations("Picard increments still " + std::to_string(out.increments.back()) +
                        " after " + std::to_string(max_iterates) + " iterates (tol " +
                        std::to_string(tol) + " relative to ||a||)");
  }

  [[nodiscard]] cplx omega() const noexcept { return omega_; }

 private:
  // Extra layers so the smallest element resolves the fastest mode scale.
  static int extra_elements(const CauchyProblem& problem, cplx z,
                            const std::vector<double>& lambda) {
    const double c = lambda.back() * std::pow(std::abs(z), problem.orders.alpha);
    if (c <= 1.0) return 0;
    return static_cast<int>(std::ceil(std::log(c) / std::log(1.0 / kRatio)));
  }

  // Weak singularities y^{1/alpha} appear unless 1/alpha is an integer.
  int singular_layers() const {
    const double inv = 1.0 / alpha_;
    if (std::fabs(inv - std::round(inv)) < 1e-12) return 0;
    return static_cast<int>(std::ceil(13.0 * alpha_ * std::log(10.0) / std::log(1.0 / kRatio)));
  }

  void assemble(const PicardOptions& opt, int level, const std::vector<double>& lambda,
                const RayKernel& kernel) {
    const std::size_t nn = mesh_.nodes();
    const std::size_t nm = lambda.size();
    const std::size_t gauss = static_cast<std::size_t>(opt.base_gauss + 4 * level);
    weights_.assign(nn * nn * nm, cplx(0.0, 0.0));
    last_.assign(nn, 0);
    const double lam_max = lambda.back();
    const int sing = singular_layers();
    const cplx pre_common = omega_ / alpha_;
    std::vector<double> basis;
    std::vector<cplx> g(nm);
    const int q = mesh_.degree;

    for (std::size_t i = 1; i < nn; ++i) {
      const double wi = mesh_.w[i];
      const double sigma = std::pow(wi, 1.0 / alpha_);
      const double Y = wi * std::pow(0.5, alpha_);
      {
        std::vector<double> tmp;
        last_[i] = static_cast<std::size_t>((mesh_.locate(wi, tmp) + 1) * q);
      }

      auto accumulate = [&](double wprime, const cplx& pre, auto&& xarg) {
        const int el = mesh_.locate(wprime, basis);
        for (std::size_t m = 0; m < nm; ++m) g[m] = kernel(lambda[m] * xarg);
        for (int l = 0; l <= q; ++l) {
          const std::size_t j = static_cast<std::size_t>(el * q + l);
          const cplx f = pre * basis[l];
          cplx* wij = &weights_[(i * nn + j) * nm];
          for (std::size_t m = 0; m < nm; ++m) wij[m] += f * g[m];
        }
      };

      // Part A: tau in [0, sigma/2], variable y = tau^alpha (the w coordinate).
      {
        std::vector<double> br{0.0};
        for (double b : mesh_.breaks) {
          if (b > 0.0 && b < Y) br.push_back(b);
        }
        br.push_back(Y);
        if (sing > 0) {
          const double first = br[1];
          for (int k = 1; k <= sing; ++k) br.push_back(first * std::pow(kRatio, k));
        }
        std::sort(br.begin(), br.end());
        const PointRule rule = composite(br, gauss);
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
          const double y = rule.x[k];
          const double tau = std::pow(y, 1.0 / alpha_);
          const double x = sigma - tau;
          const double xa = std::pow(x, alpha_);
          const cplx pre =
              pre_common * (rule.w[k] * std::pow(x, alpha_ - 1.0) * std::pow(tau, 1.0 - alpha_));
          accumulate(y, pre, xa);
        }
      }
      // Part B: tau in [sigma/2, sigma], variable y = (sigma - tau)^alpha.
      {
        const double cy = lam_max * std::abs(omega_) * Y;
        int layers = 2 + sing + level;
        if (cy > 1.0) layers += static_cast<int>(std::ceil(std::log(cy) / std::log(1.0 / kRatio)));
        const PointRule rule = composite(graded_breaks(Y, layers), gauss);
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
          const double y = rule.x[k];
          const double x = std::pow(y, 1.0 / alpha_);
          const double tau = std::max(sigma - x, 0.0);
          const cplx pre = pre_common * rule.w[k];
          accumulate(std::pow(tau, alpha_), pre, y);
        }
      }
    }
  }

  const CauchyProblem& problem_;
  const detail::ModeTable& modes_;
  TimeMesh mesh_;
  double alpha_;
  cplx omega_;
  std::vector<cplx> free_;     // [node][mode]
  std::vector<cplx> weights_;  // [target][source][mode]
  std::vector<std::size_t> last_;
};

}  // namespace

std::pair<Field, PicardReport> picard_solve(const CauchyProblem& problem, const SectorPoint& z,
                                            double tol, const PicardOptions& options) {
  problem.validate();
  z.validate(problem.orders.alpha);
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  const double alpha = problem.orders.alpha;
  const SpectralGrid& grid = *problem.grid;
  const auto modes = detail::build_mode_table(grid);
  std::vector<double> lambda(modes.abs_xi.size());
  for (std::size_t m = 0; m < lambda.size(); ++m) {
    lambda[m] = std::pow(modes.abs_xi[m], problem.orders.beta);
  }

  PicardReport report;
  const double a_norm = l2_norm(problem.a);
  if (a_norm == 0.0) {
    return {Field(problem.grid, Representation::spectral), report};
  }

  const cplx omega = std::exp(alpha * std::log(z.z));
  const MittagLeffler ml_free({alpha, 1.0});
  const MittagLeffler ml_kernel({alpha, alpha});
  const RayKernel kernel(ml_kernel, omega, std::max(lambda.back(), 1e-2), 1e-13);

  std::vector<cplx> previous;
  LevelResult accepted;
  int accepted_level = 0;
  const int max_level = problem.p.is_zero() ? 0 : options.max_level;
  for (int level = 0; level <= max_level; ++level) {
    PicardLevel solver(problem, z.z, level, options, modes, lambda, kernel, ml_free);
    LevelResult result = solver.run(tol, options.max_iterates);
    double change = 0.0;
    if (!previous.empty()) {
      double diff = 0.0;
      double ref = 0.0;
      for (std::size_t k = 0; k < previous.size(); ++k) {
        diff += std::norm(result.u_final[k] - previous[k]);
        ref += std::norm(result.u_final[k]);
      }
      change = (ref > 0.0) ? std::sqrt(diff / ref) : std::sqrt(diff);
    }
    previous = result.u_final;
    accepted = std::move(result);
    accepted_level = level;
    report.refinement_change = change;
    if (level > 0 && change < tol / 10.0) break;
  }

  report.level = accepted_level;
  report.nodes = accepted.nodes;
  report.iterates_used = static_cast<int>(accepted.increments.size());
  report.increment_norms = accepted.increments;
  const double sup_kernel = std::max(kernel.sup_abs(), reciprocal_gamma(alpha));
  report.envelope_rate =
      std::tgamma(alpha) * std::abs(omega) * problem.p.sup_abs() * sup_kernel;
  report.envelope_constant = accepted.increments.front() / a_norm;
  for (std::size_t n = 0; n < accepted.increments.size(); ++n) {
    const double nd = static_cast<double>(n);
    const double log_bound = std::log(report.envelope_constant * a_norm) +
                             nd * std::log(std::max(report.envelope_rate, 1e-300)) -
                             std::lgamma(nd * alpha + 1.0);
    report.envelope.push_back(n == 0 ? report.envelope_constant * a_norm : std::exp(log_bound));
  }
  report.certified_bound = report.envelope.back();
  return {Field(problem.grid, std::move(accepted.u_final), Representation::spectral), report};
}

AnalyticityResult analyticity_probe(const CauchyProblem& problem, double ray_angle,
                                    const std::vector<double>& radii, double gamma, NormKind kind,
                                    double tol, double theta0) {
  const double th = theta0 > 0.0 ? theta0 : default_theta0(problem.orders.alpha);
  if (!(std::fabs(ray_angle) < th)) {
    throw std::invalid_argument("ray angle must lie inside the sector");
  }
  if (radii.size() < 2) throw DegenerateWindow("analyticity probe needs at least two radii");
  AnalyticityResult result;
  result.expected_slope = -(gamma / problem.orders.beta) * problem.orders.alpha;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
    const cplx z = std::polar(r, ray_angle);
    auto [u, report] = picard_solve(problem, SectorPoint(z, th), tol);
    AnalyticitySample s{r, z, sobolev_norm(u, gamma, kind), report.iterates_used};
    result.samples.push_back(s);
    const double x = std::log(r);
    const double y = std::log(s.norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(radii.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw DegenerateWindow("radii must not all coincide");
  result.slope = (n * sxy - sx * sy) / den;
  result.intercept = (sy - result.slope * sx) / n;
  return result;
}

}  // namespace fdlab
