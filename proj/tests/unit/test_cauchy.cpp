#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fdlab/cauchy.hpp"
#include "fdlab/errors.hpp"
#include "fdlab/mittag_leffler.hpp"
#include "fdlab/profiles.hpp"
#include "test_data.hpp"

namespace fdlab {
namespace {

double rel_l2(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

Field zero_field(const GridPtr& g) { return Field(g, Representation::physical); }

double lambda_of(const GridPtr& g, std::size_t i, double beta) {
  return std::pow(g->abs_freq(i), beta);
}

TEST(FreePropagate, ZeroDatum) {
  const auto g = make_grid(1, 32, 2.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, zero_field(g), constant_potential(g, 0.0));
  for (const auto& v : free_propagate(pr, 1.0).values) EXPECT_EQ(v, cplx(0.0));
}

TEST(FreePropagate, ExponentialPathIsHeatSemigroup) {
  const auto g = make_grid(1, 64, 3.0);
  const Field a = mode_datum(g, {{{4, 0, 0}, 1.0}});
  const CauchyProblem pr({0.5, 2.0, 0.0}, a, constant_potential(g, 0.0));
  const double t = 0.7;
  const Field u = to_physical(free_propagate(pr, t, KernelKind::exponential));
  const double xi = 4.0 / 6.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LT(std::abs(u.values[i] - std::exp(-xi * xi * t) * a.values[i]), 1e-13);
  }
}

TEST(FreePropagate, GaussianMatchesDoubledResolution) {
  const auto g = make_grid(1, 64, 10.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), constant_potential(g, 0.0));
  const Field u = to_physical(free_propagate(pr, 1.0));
  const auto rows = testing::read_csv("free_propagate_gaussian.csv");
  ASSERT_EQ(rows.size(), 64U);
  double worst = 0.0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    EXPECT_NEAR(std::stod(rows[j][0]), g->coordinate(j, 0), 1e-12);
    const cplx ref(std::stod(rows[j][1]), std::stod(rows[j][2]));
    worst = std::max(worst, std::abs(u.values[j] - ref));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(FreePropagate, ZeroModeIsConserved) {
  const auto g = make_grid(2, 16, 2.0);
  const Field a = to_spectral(gaussian_datum(g, 0.4));
  const CauchyProblem pr({0.3, 0.8, 0.0}, a, constant_potential(g, 0.0));
  for (double t : {0.1, 10.0, 1e4}) {
    EXPECT_LT(std::abs(free_propagate(pr, t).values[0] - a.values[0]), 1e-14);
    EXPECT_LT(std::abs(contour_invert(pr, t).values[0] - a.values[0]), 1e-9);
  }
}

TEST(FreePropagateDerivative, ZeroDatumAndSingleMode) {
  const auto g = make_grid(1, 32, 2.0);
  const FractionalOrders o{0.6, 1.2, 0.0};
  for (const auto& v : free_propagate_derivative(zero_field(g), o, SectorPoint(2.0)).values) {
    EXPECT_EQ(v, cplx(0.0));
  }
  const Field a = to_spectral(mode_datum(g, {{{3, 0, 0}, 1.0}}));
  const double t = 1.7;
  const Field d = free_propagate_derivative(a, o, SectorPoint(t));
  const double lam = std::pow(3.0 / 4.0, 1.2);
  const double expect =
      -lam * std::pow(t, o.alpha - 1.0) * ml({o.alpha, o.alpha}, -lam * std::pow(t, o.alpha)).value.real();
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LT(std::abs(d.values[i] - expect * a.values[i]), 1e-12);
  }
}

TEST(FreePropagateDerivative, CentralDifference) {
  const auto g = make_grid(1, 64, 5.0);
  const Field a = gaussian_datum(g, 0.8);
  const FractionalOrders o{0.6, 2.0, 0.0};
  const double h = 1e-4;
  const Field up = free_propagate(a, o, 1.0 + h);
  const Field dn = free_propagate(a, o, 1.0 - h);
  const Field d = free_propagate_derivative(a, o, SectorPoint(1.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LT(std::abs((up.values[i] - dn.values[i]) / (2.0 * h) - d.values[i]), 1e-6);
  }
}

TEST(FreePropagateDerivative, ComplexTimeInsideSector) {
  const auto g = make_grid(1, 32, 2.0);
  const FractionalOrders o{0.5, 1.0, 0.0};
  const Field a = gaussian_datum(g, 0.5);
  EXPECT_NO_THROW(free_propagate_derivative(a, o, SectorPoint(std::polar(1.0, 2.0))));
  EXPECT_THROW(free_propagate_derivative(a, o, SectorPoint(std::polar(1.0, 2.5))),
               std::invalid_argument);
}

TEST(SectorPoint, DefaultHalfAngle) {
  EXPECT_DOUBLE_EQ(default_theta0(0.5), 0.75 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(default_theta0(0.8), 0.5 * (0.5 * std::numbers::pi + std::numbers::pi / 1.6));
  EXPECT_THROW(SectorPoint(0.0).validate(0.5), std::invalid_argument);
  EXPECT_THROW(SectorPoint(1.0, 1.0).validate(0.5), std::invalid_argument);
}

TEST(Picard, ZeroPotentialEqualsFreePropagation) {
  const auto g = make_grid(1, 64, 6.0);
  const CauchyProblem pr({0.4, 1.3, 0.0}, gaussian_datum(g, 1.0), constant_potential(g, 0.0));
  auto [u, rep] = picard_solve(pr, SectorPoint(2.0), 1e-12);
  EXPECT_LT(rel_l2(u, free_propagate(pr, 2.0)), 1e-12);
  EXPECT_LE(rep.iterates_used, 2);
}

TEST(Picard, ConstantPotentialClosedForm) {
  const auto g = make_grid(1, 64, 6.0);
  const double c = -0.8;
  const FractionalOrders o{0.6, 1.5, 0.0};
  const Field a = to_spectral(gaussian_datum(g, 1.0));
  const CauchyProblem pr(o, a, constant_potential(g, c));
  const double t = 1.3;
  auto [u, rep] = picard_solve(pr, SectorPoint(t), 1e-11);
  Field ref = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ref.values[i] *= ml({o.alpha, 1.0}, (c - lambda_of(g, i, o.beta)) * std::pow(t, o.alpha)).value;
  }
  EXPECT_LT(rel_l2(u, ref), 1e-9);
  for (std::size_t n = 1; n < rep.increment_norms.size(); ++n) {
    EXPECT_LE(rep.increment_norms[n], rep.envelope[n]) << "iterate " << n;
  }
}

TEST(Picard, ComplexTimeConstantPotential) {
  const auto g = make_grid(1, 32, 4.0);
  const FractionalOrders o{0.5, 2.0, 0.0};
  const double c = -0.5;
  const Field a = to_spectral(gaussian_datum(g, 1.0));
  const CauchyProblem pr(o, a, constant_potential(g, c));
  const cplx z = std::polar(0.8, 1.6);
  auto [u, rep] = picard_solve(pr, SectorPoint(z), 1e-11);
  Field ref = a;
  const cplx za = std::exp(o.alpha * std::log(z));
  for (std::size_t i = 0; i < a.size(); ++i) {
    ref.values[i] *= ml({o.alpha, 1.0}, (c - lambda_of(g, i, o.beta)) * za).value;
  }
  EXPECT_LT(rel_l2(u, ref), 1e-9);
}

TEST(Picard, ZeroDatum) {
  const auto g = make_grid(1, 16, 2.0);
  const CauchyProblem pr({0.5, 1.0, 0.0}, zero_field(g), cosine_potential(g, -1.0, -0.5));
  auto [u, rep] = picard_solve(pr, SectorPoint(1.0), 1e-10);
  for (const auto& v : u.values) EXPECT_EQ(v, cplx(0.0));
}

TEST(Picard, IterationCap) {
  const auto g = make_grid(1, 32, 4.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  PicardOptions opt;
  opt.max_iterates = 3;
  EXPECT_THROW(picard_solve(pr, SectorPoint(1.0), 1e-10, opt), MaxIterations);
}

TEST(Picard, AgreesWithContourForVariablePotential) {
  const auto g = make_grid(1, 64, 8.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  auto [u, rep] = picard_solve(pr, SectorPoint(1.0), 1e-10);
  ContourReport cr;
  const Field v = contour_invert(pr, 1.0, {}, &cr);
  EXPECT_LT(rel_l2(u, v), 1e-8);
  EXPECT_LT(cr.max_residual, 1e-10);
  EXPECT_LT(cr.tail_change, 1e-8);
  for (std::size_t n = 1; n < rep.increment_norms.size(); ++n) {
    EXPECT_LE(rep.increment_norms[n], rep.envelope[n]) << "iterate " << n;
  }
}

TEST(Resolvent, ZeroPotentialDiagonal) {
  const auto g = make_grid(1, 32, 2.0);
  const FractionalOrders o{0.4, 1.6, 0.0};
  const Field a = to_spectral(gaussian_datum(g, 0.5));
  const CauchyProblem pr(o, a, constant_potential(g, 0.0));
  const cplx s = std::polar(3.0, 1.9);
  const Field U = laplace_resolvent_solve(pr, s);
  const cplx sa = std::pow(s, o.alpha);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx expect = std::pow(s, o.alpha - 1.0) / (sa + lambda_of(g, i, o.beta)) * a.values[i];
    EXPECT_LT(std::abs(U.values[i] - expect), 1e-14);
  }
}

TEST(Resolvent, ConstantPotentialDiagonal) {
  const auto g = make_grid(1, 32, 2.0);
  const FractionalOrders o{0.7, 1.0, 0.0};
  const Field a = to_spectral(gaussian_datum(g, 0.5));
  const CauchyProblem pr(o, a, constant_potential(g, -2.0));
  const cplx s = std::polar(0.5, -1.0);
  const Field U = laplace_resolvent_solve(pr, s);
  const cplx sa = std::pow(s, o.alpha);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx expect =
        std::pow(s, o.alpha - 1.0) / (sa + 2.0 + lambda_of(g, i, o.beta)) * a.values[i];
    EXPECT_LT(std::abs(U.values[i] - expect), 1e-14);
  }
}

TEST(Resolvent, VariablePotentialResidual) {
  const auto g = make_grid(1, 128, 5.0);
  const FractionalOrders o{0.5, 1.5, 0.0};
  const Field a = gaussian_datum(g, 1.0);
  const Potential p = cosine_potential(g, -1.0, -0.7);
  const CauchyProblem pr(o, a, p);
  const cplx s = std::polar(2.0, std::numbers::pi / 3.0);
  ResolventStats st;
  const Field U = laplace_resolvent_solve(pr, s, {}, &st);
  // forward operator applied independently of the solver
  Field pu = to_physical(U);
  for (std::size_t i = 0; i < pu.size(); ++i) pu.values[i] *= p.values()[i];
  pu = to_spectral(pu);
  const Field ah = to_spectral(a);
  double res = 0.0, ref = 0.0;
  const cplx sa = std::pow(s, o.alpha);
  const cplx factor = std::pow(s, o.alpha - 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx lhs = (lambda_of(g, i, o.beta) + sa) * U.values[i] - pu.values[i];
    res += std::norm(lhs - factor * ah.values[i]);
    ref += std::norm(factor * ah.values[i]);
  }
  EXPECT_LT(std::sqrt(res / ref), 1e-10);
  EXPECT_GT(st.iterations, 0);
}

TEST(Resolvent, StallIsReported) {
  const auto g = make_grid(1, 64, 5.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.9));
  ResolventOptions opt;
  opt.max_iter = 1;
  opt.restart = 1;
  EXPECT_THROW(laplace_resolvent_solve(pr, 1.0, opt), IterationStall);
  EXPECT_THROW(laplace_resolvent_solve(pr, -1.0), std::invalid_argument);
}

TEST(Resolvent, SmallArgumentSlope) {
  // d = 1 > beta with coercive p: ||U(s)|| ~ |s|^{alpha - 1}
  const auto g = make_grid(1, 128, 8.0);
  const FractionalOrders o{0.4, 0.5, 0.0};
  const CauchyProblem pr(o, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  const double arg = 0.99 * default_theta0(o.alpha);
  std::vector<double> x, y;
  for (int k = 0; k <= 6; ++k) {
    const double r = std::pow(10.0, -8.0 + 0.5 * k);
    const Field U = laplace_resolvent_solve(pr, std::polar(r, arg));
    x.push_back(std::log(r));
    y.push_back(std::log(sobolev_norm(U, 0.25, NormKind::homogeneous_seminorm)));
  }
  const double slope = (y.back() - y.front()) / (x.back() - x.front());
  EXPECT_NEAR(slope, o.alpha - 1.0, 0.05);
}

TEST(Contour, ZeroPotentialRecoversMittagLeffler) {
  const auto g = make_grid(1, 64, 4.0);
  const FractionalOrders o{0.6, 1.8, 0.0};
  const Field a = to_spectral(gaussian_datum(g, 0.7));
  const CauchyProblem pr(o, a, constant_potential(g, 0.0));
  for (double t : {0.3, 2.0, 50.0}) {
    const Field u = contour_invert(pr, t);
    EXPECT_LT(rel_l2(u, free_propagate(pr, t)), 1e-10) << "t = " << t;
  }
}

TEST(Contour, ZeroDatum) {
  const auto g = make_grid(1, 16, 2.0);
  const CauchyProblem pr({0.5, 1.0, 0.0}, zero_field(g), constant_potential(g, -1.0));
  for (const auto& v : contour_invert(pr, 1.0).values) EXPECT_EQ(v, cplx(0.0));
}

TEST(Contour, ShortTruncationIsDetected) {
  const auto g = make_grid(1, 32, 2.0);
  const CauchyProblem pr({0.5, 1.0, 0.0}, gaussian_datum(g, 0.5), constant_potential(g, -1.0));
  SectorContour c;
  c.R = 2.0;
  EXPECT_THROW(contour_invert(pr, 1.0, c), TailNotConverged);
  c.R = 0.0;
  c.n_ray = 8;
  EXPECT_THROW(contour_invert(pr, 1.0, c), std::invalid_argument);
}

TEST(Contour, ArcAndRayOnlyAgree) {
  const auto g = make_grid(1, 64, 6.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  SectorContour arc;
  arc.eps = 0.5;
  EXPECT_LT(rel_l2(contour_invert(pr, 2.0, arc), contour_invert(pr, 2.0)), 1e-9);
}

TEST(SymbolBound, UniformOverGridsAndSector) {
  const FractionalOrders o{0.5, 1.5, 1.0};
  const double th = default_theta0(o.alpha);
  std::vector<cplx> coarse, fine;
  for (int i = 0; i <= 8; ++i) {
    for (double f : {-0.95, 0.0, 0.95}) coarse.push_back(std::polar(std::pow(10.0, -4 + i), f * th));
  }
  for (int i = 0; i <= 40; ++i) {
    for (double f : {-0.99, -0.5, 0.0, 0.5, 0.99}) {
      fine.push_back(std::polar(std::pow(10.0, -6 + 0.3 * i), f * th));
    }
  }
  const double cap = symbol_bound(*make_grid(1, 64, 4.0), o, coarse);
  EXPECT_TRUE(std::isfinite(cap));
  for (int n : {64, 512, 4096}) {
    EXPECT_LE(symbol_bound(*make_grid(1, n, 4.0), o, fine), 1.5 * cap) << "n = " << n;
  }
}

TEST(Analyticity, BoundedNormHasFlatSlope) {
  const auto g = make_grid(1, 64, 4.0);
  const CauchyProblem pr({0.5, 2.0, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  const auto r = analyticity_probe(pr, 0.0, {1e-6, 1e-5, 1e-4, 1e-3}, 0.0);
  EXPECT_NEAR(r.slope, 0.0, 0.01);
  EXPECT_DOUBLE_EQ(r.expected_slope, 0.0);
}

TEST(Analyticity, SteepRayStaysFinite) {
  const auto g = make_grid(1, 64, 4.0);
  const CauchyProblem pr({0.5, 2.0, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  const double th = default_theta0(0.5);
  const auto on_axis = analyticity_probe(pr, 0.0, {1e-4, 1e-2}, 0.0);
  const auto steep = analyticity_probe(pr, 0.9 * th, {1e-4, 1e-2}, 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(std::isfinite(steep.samples[i].norm));
    EXPECT_LT(steep.samples[i].norm, 10.0 * on_axis.samples[i].norm);
  }
  // both rays continue to the datum as |z| -> 0
  const auto tiny = analyticity_probe(pr, 0.9 * th, {1e-12, 1e-11}, 0.0);
  EXPECT_NEAR(tiny.samples[0].norm / l2_norm(pr.a), 1.0, 1e-3);
  EXPECT_THROW(analyticity_probe(pr, th, {1e-3, 1e-2}, 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace fdlab
