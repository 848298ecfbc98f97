#include "fdlab/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fdlab/errors.hpp"
#include "fdlab/gmres.hpp"
#include "fdlab/mittag_leffler.hpp"
#include "internal.hpp"

namespace fdlab {

namespace detail {

ModeTable build_mode_table(const SpectralGrid& grid) {
  ModeTable table;
  const auto& xi = grid.abs_freq();
  std::vector<std::uint32_t> order(xi.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return xi[a] < xi[b]; });
  table.index.resize(xi.size());
  for (std::uint32_t i : order) {
    if (table.abs_xi.empty() || xi[i] != table.abs_xi.back()) table.abs_xi.push_back(xi[i]);
    table.index[i] = static_cast<std::uint32_t>(table.abs_xi.size() - 1);
  }
  return table;
}

}  // namespace detail

CauchyProblem::CauchyProblem(FractionalOrders o, Field datum, Potential potential)
    : orders(o), grid(datum.grid), a(std::move(datum)), p(std::move(potential)) {
  validate();
}

void CauchyProblem::validate() const {
  orders.validate();
  if (!grid) throw std::invalid_argument("problem has no grid");
  if (!(*a.grid == *grid) || !(*p.grid() == *grid)) {
    throw std::invalid_argument("datum and potential must share the grid");
  }
}

double default_theta0(double alpha) {
  const double upper = std::min(std::numbers::pi, std::numbers::pi / (2.0 * alpha));
  return 0.5 * (0.5 * std::numbers::pi + upper);
}

void SectorPoint::validate(double alpha) const {
  const double th = theta0 > 0.0 ? theta0 : default_theta0(alpha);
  const double upper = std::min(std::numbers::pi, std::numbers::pi / (2.0 * alpha));
  if (!(th > 0.5 * std::numbers::pi && th < upper)) {
    throw std::invalid_argument("sector half-angle must lie in (pi/2, min(pi, pi/(2 alpha)))");
  }
  if (z == cplx(0.0, 0.0)) throw std::invalid_argument("sector point must be nonzero");
  if (!(std::fabs(std::arg(z)) < th)) {
    throw std::invalid_argument("|arg z| = " + std::to_string(std::fabs(std::arg(z))) +
                                " is outside the sector of half-angle " + std::to_string(th));
  }
}

namespace {

cplx principal_power(cplx z, double e) {
  if (z == cplx(0.0, 0.0)) return 0.0;
  return std::exp(e * std::log(z));
}

}  // namespace

Field free_propagate(const Field& a, const FractionalOrders& orders, cplx z, KernelKind kind) {
  if (kind == KernelKind::mittag_leffler) orders.validate();
  Field s = to_spectral(a);
  const SpectralGrid& grid = *a.grid;
  const auto modes = detail::build_mode_table(grid);
  std::vector<cplx> multiplier(modes.abs_xi.size());
  if (kind == KernelKind::exponential) {
    for (std::size_t m = 0; m < multiplier.size(); ++m) {
      multiplier[m] = std::exp(-std::pow(modes.abs_xi[m], orders.beta) * z);
    }
  } else {
    const MittagLeffler ml({orders.alpha, 1.0});
    const cplx za = principal_power(z, orders.alpha);
    for (std::size_t m = 0; m < multiplier.size(); ++m) {
      multiplier[m] = ml.value(-std::pow(modes.abs_xi[m], orders.beta) * za);
    }
  }
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= multiplier[modes.index[i]];
  return s;
}

Field free_propagate(const CauchyProblem& problem, double t, KernelKind kind) {
  if (!(t > 0.0)) throw std::invalid_argument("free_propagate: t must be positive");
  return free_propagate(problem.a, problem.orders, cplx(t, 0.0), kind);
}

Field free_propagate_derivative(const Field& a, const FractionalOrders& orders,
                                const SectorPoint& z) {
  orders.validate();
  z.validate(orders.alpha);
  Field s = to_spectral(a);
  const auto modes = detail::build_mode_table(*a.grid);
  const MittagLeffler ml({orders.alpha, orders.alpha});
  const cplx za = principal_power(z.z, orders.alpha);
  const cplx za1 = principal_power(z.z, orders.alpha - 1.0);
  std::vector<cplx> multiplier(modes.abs_xi.size());
  for (std::size_t m = 0; m < multiplier.size(); ++m) {
    const double lam = std::pow(modes.abs_xi[m], orders.beta);
    multiplier[m] = (lam == 0.0) ? cplx(0.0, 0.0) : -lam * za1 * ml.value(-lam * za);
  }
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= multiplier[modes.index[i]];
  return s;
}

namespace detail {

std::vector<cplx> solve_shifted(const CauchyProblem& problem, cplx shift, std::vector<cplx> rhs,
                                const ResolventOptions& options, ResolventStats* stats) {
  const SpectralGrid& grid = *problem.grid;
  const auto& xi = grid.abs_freq();
  const std::size_t n = grid.size();
  std::vector<cplx> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = std::pow(xi[i], problem.orders.beta) + shift;

  if (problem.p.is_constant()) {
    const double c = problem.p.mean();
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= (diag[i] - c);
    if (stats) *stats = {0, 0.0};
    return rhs;
  }

  const auto& pv = problem.p.values();
  const double pbar = problem.p.mean();
  Field work(problem.grid, Representation::spectral);
  LinearMap apply = [&](const CVec& in, CVec& out) {
    work.values = in;
    Field phys = inverse_transform(work);
    for (std::size_t i = 0; i < n; ++i) phys.values[i] *= pv[i];
    const Field pu = forward_transform(phys);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = diag[i] * in[i] - pu.values[i];
  };
  LinearMap precond = [&](const CVec& in, CVec& out) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / (diag[i] - pbar);
  };
  GmresResult res = gmres(apply, precond, rhs, options.tol, options.max_iter, options.restart);
  if (stats) *stats = {res.iterations, res.relative_residual};
  if (!res.converged) {
    throw IterationStall("residual " + std::to_string(res.relative_residual) + " above " +
                         std::to_string(options.tol) + " after " +
                         std::to_string(res.iterations) + " iterations");
  }
  return std::move(res.x);
}

}  // namespace detail

Field laplace_resolvent_solve(const CauchyProblem& problem, cplx s,
                              const ResolventOptions& options, ResolventStats* stats) {
  if (s == cplx(0.0, 0.0) || !(std::fabs(std::arg(s)) < std::numbers::pi)) {
    throw std::invalid_argument("resolvent parameter must be nonzero and off the negative axis");
  }
  const double alpha = problem.orders.alpha;
  const Field a_hat = to_spectral(problem.a);
  const cplx rhs_factor = principal_power(s, alpha - 1.0);
  std::vector<cplx> b(a_hat.values.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = rhs_factor * a_hat.values[i];
  auto x = detail::solve_shifted(problem, principal_power(s, alpha), std::move(b), options, stats);
  return Field(problem.grid, std::move(x), Representation::spectral);
}

double symbol_bound(const SpectralGrid& grid, const FractionalOrders& orders,
                    const std::vector<cplx>& zs) {
  const auto modes = detail::build_mode_table(grid);
  double best = 0.0;
  for (const cplx& z : zs) {
    const cplx za = principal_power(z, orders.alpha);
    const double zg = std::pow(std::abs(z), orders.gamma * orders.alpha / orders.beta);
    for (double k : modes.abs_xi) {
      const double lam = std::pow(k, orders.beta);
      const double num = (orders.gamma == 0.0) ? 1.0 : std::pow(k, orders.gamma);
      best = std::max(best, num * zg / std::abs(1.0 + lam * za));
    }
  }
  return best;
}

}  // namespace fdlab
