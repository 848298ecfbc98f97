#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fdlab/spectral.hpp"

namespace fdlab {

/// a(x) = amplitude * exp(-|x|^2 / (2 sigma^2)), physical representation.
Field gaussian_datum(const GridPtr& grid, double sigma, double amplitude = 1.0);

struct LatticeMode {
  std::array<int, 3> k{0, 0, 0};  // integer wavenumbers, unused axes ignored
  cplx amplitude{1.0, 0.0};
};

/// Superposition of lattice modes amplitude * exp(2 pi i xi_k . x), physical.
Field mode_datum(const GridPtr& grid, const std::vector<LatticeMode>& modes);

/// Mean-zero datum with spectral coefficients amplitude * |k|^(-exponent),
/// |k| the Euclidean norm of the integer wavenumber; spectral representation.
Field power_law_datum(const GridPtr& grid, double exponent, double amplitude = 1.0);

/// p(x) = c with delta0 = -c.
Potential constant_potential(const GridPtr& grid, double c);

/// p(x) = c0 + c1 cos(pi x_1 / L), periodic on [-L, L); delta0 = -(c0 + |c1|) when positive.
Potential cosine_potential(const GridPtr& grid, double c0, double c1);

/// Samples of f at the lattice points (x_1, ..., x_d).
Potential sampled_potential(const GridPtr& grid,
                            const std::function<double(const std::array<double, 3>&)>& f,
                            double delta0 = 0.0);

}  // namespace fdlab
