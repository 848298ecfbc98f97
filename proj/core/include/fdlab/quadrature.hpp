#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fdlab {

/// Nodes and weights of an n-point rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule, computed once per n by Newton iteration on P_n and
/// cached for the lifetime of the process.
const QuadratureRule& gauss_legendre(std::size_t n);

/// Chebyshev-Lobatto points cos(j pi / q), j = 0..q, ascending on [-1, 1].
std::vector<double> chebyshev_lobatto(std::size_t q);

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels, std::size_t order = 16);

/// Barycentric weights for interpolation on the given nodes.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

/// Values of the Lagrange basis polynomials at x (sum to one).
void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bary, double x,
                    std::vector<double>& out);

}  // namespace fdlab
