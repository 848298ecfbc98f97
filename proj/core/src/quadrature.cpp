#include "fdlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fdlab {

namespace {

QuadratureRule build_gauss_legendre(std::size_t n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    if (n == 1) {
      slot = std::make_unique<QuadratureRule>(QuadratureRule{{0.0}, {2.0}});
    } else {
      slot = std::make_unique<QuadratureRule>(build_gauss_legendre(n));
    }
  }
  return *slot;
}

std::vector<double> chebyshev_lobatto(std::size_t q) {
  if (q == 0) return {0.0};
  std::vector<double> x(q + 1);
  for (std::size_t j = 0; j <= q; ++j) x[j] = -std::cos(std::numbers::pi * j / q);
  return x;
}

double integrate(const std::function<double(double)>& f, double a, double b, std::size_t panels,
                 std::size_t order) {
  const auto& rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double acc = 0.0;
    for (std::size_t i = 0; i < order; ++i) acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (k != j) w[j] /= (nodes[j] - nodes[k]);
    }
  }
  return w;
}

void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bary, double x,
                    std::vector<double>& out) {
  const std::size_t m = nodes.size();
  out.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (x == nodes[j]) {
      out[j] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = bary[j] / (x - nodes[j]);
    denom += out[j];
  }
  for (auto& v : out) v /= denom;
}

}  // namespace fdlab
