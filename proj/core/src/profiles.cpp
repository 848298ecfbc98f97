#include "fdlab/profiles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdlab {

namespace {

std::array<double, 3> point(const SpectralGrid& grid, std::size_t i) {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(i, a);
  return x;
}

}  // namespace

Field gaussian_datum(const GridPtr& grid, double sigma, double amplitude) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  Field f(grid, Representation::physical);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto x = point(*grid, i);
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    f.values[i] = amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
  }
  return f;
}

Field mode_datum(const GridPtr& grid, const std::vector<LatticeMode>& modes) {
  Field f(grid, Representation::physical);
  const double L = grid->half_width();
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto x = point(*grid, i);
    cplx acc = 0.0;
    for (const auto& m : modes) {
      double phase = 0.0;
      for (int a = 0; a < grid->dim(); ++a) phase += m.k[a] / (2.0 * L) * x[a];
      acc += m.amplitude * std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    f.values[i] = acc;
  }
  return f;
}

Field power_law_datum(const GridPtr& grid, double exponent, double amplitude) {
  Field f(grid, Representation::spectral);
  for (std::size_t i = 1; i < grid->size(); ++i) {
    double k2 = 0.0;
    for (int a = 0; a < grid->dim(); ++a) {
      const double k = grid->wavenumber(i, a);
      k2 += k * k;
    }
    f.values[i] = amplitude * std::pow(k2, -0.5 * exponent);
  }
  return f;
}

Potential constant_potential(const GridPtr& grid, double c) {
  return Potential(grid, std::vector<double>(grid->size(), c), c < 0.0 ? -c : 0.0);
}

Potential cosine_potential(const GridPtr& grid, double c0, double c1) {
  std::vector<double> v(grid->size());
  const double L = grid->half_width();
  for (std::size_t i = 0; i < grid->size(); ++i) {
    v[i] = c0 + c1 * std::cos(std::numbers::pi * grid->coordinate(i, 0) / L);
  }
  const double top = c0 + std::fabs(c1);
  return Potential(grid, std::move(v), top < 0.0 ? -top : 0.0);
}

Potential sampled_potential(const GridPtr& grid,
                            const std::function<double(const std::array<double, 3>&)>& f,
                            double delta0) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) v[i] = f(point(*grid, i));
  return Potential(grid, std::move(v), delta0);
}

}  // namespace fdlab
