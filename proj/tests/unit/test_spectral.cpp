#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>

#include "fdlab/errors.hpp"
#include "fdlab/profiles.hpp"
#include "fdlab/spectral.hpp"
#include "test_data.hpp"

namespace fdlab {
namespace {

Field random_field(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Field f(g, Representation::physical);
  for (auto& v : f.values) v = cplx(n(rng), n(rng));
  return f;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

TEST(FractionalOrders, Ranges) {
  EXPECT_NO_THROW((FractionalOrders{0.5, 2.0, 0.0}.validate()));
  EXPECT_THROW((FractionalOrders{1.0, 1.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((FractionalOrders{0.5, 2.5, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((FractionalOrders{0.5, 1.0, -1.0}.validate()), std::invalid_argument);
}

TEST(SpectralGrid, FrequencyLattice) {
  const auto g = make_grid(2, 8, 1.5);
  EXPECT_EQ(g->size(), 64U);
  int zeros = 0;
  for (std::size_t i = 0; i < g->size(); ++i) zeros += (g->abs_freq(i) == 0.0);
  EXPECT_EQ(zeros, 1);
  EXPECT_EQ(g->wavenumber(3, 1), 3);
  EXPECT_EQ(g->wavenumber(5, 1), -3);
  EXPECT_DOUBLE_EQ(g->abs_freq(1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(g->coordinate(0, 0), -1.5);
  EXPECT_THROW(make_grid(1, 12, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(1, 4, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(4, 8, 1.0), std::invalid_argument);
}

TEST(Transform, ConstantGoesToZeroFrequency) {
  const auto g = make_grid(1, 32, 2.0);
  const Field one(g, std::vector<cplx>(32, 1.0), Representation::physical);
  const Field s = forward_transform(one);
  EXPECT_NEAR(std::abs(s.values[0]), std::sqrt(32.0), 1e-12);
  for (std::size_t k = 1; k < 32; ++k) EXPECT_LT(std::abs(s.values[k]), 1e-12);
}

TEST(Transform, SingleModeIsSingleCoefficient) {
  const auto g = make_grid(2, 16, 1.0);
  const Field f = mode_datum(g, {{{3, -2, 0}, {0.5, 0.25}}});
  const Field s = forward_transform(f);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const bool hit = g->wavenumber(i, 0) == 3 && g->wavenumber(i, 1) == -2;
    const cplx expect = hit ? cplx(0.5, 0.25) * 16.0 : cplx(0.0);
    EXPECT_LT(std::abs(s.values[i] - expect), 1e-12);
  }
}

TEST(Transform, RoundTrip) {
  for (int d = 1; d <= 3; ++d) {
    const auto g = make_grid(d, d == 3 ? 16 : 64, 3.0);
    const Field f = random_field(g, 7 + d);
    const Field back = inverse_transform(forward_transform(f));
    double ref = 0.0;
    for (const auto& v : f.values) ref = std::max(ref, std::abs(v));
    EXPECT_LT(max_diff(f, back) / ref, 1e-12);
    EXPECT_FALSE(back.spectral());
  }
}

TEST(Transform, RepresentationMismatch) {
  const auto g = make_grid(1, 8, 1.0);
  const Field s(g, Representation::spectral);
  EXPECT_THROW(forward_transform(s), RepresentationMismatch);
  EXPECT_THROW(inverse_transform(Field(g, Representation::physical)), RepresentationMismatch);
}

TEST(Transform, Plancherel) {
  const auto g = make_grid(2, 32, 2.0);
  const Field f = random_field(g, 3);
  const double a = l2_norm(f);
  EXPECT_LT(std::fabs(l2_norm(forward_transform(f)) - a) / a, 1e-12);
  EXPECT_LT(std::fabs(sobolev_norm(f, 0.0, false) - a) / a, 1e-12);
}

TEST(Riesz, ConstantIsAnnihilated) {
  const auto g = make_grid(1, 16, 1.0);
  const Field one(g, std::vector<cplx>(16, 2.0), Representation::physical);
  const Field r = riesz_apply(one, 1.3);
  for (const auto& v : r.values) EXPECT_LT(std::abs(v), 1e-13);
}

TEST(Riesz, SquareSymbolOnSingleMode) {
  const auto g = make_grid(1, 32, 4.0);
  const Field f = mode_datum(g, {{{5, 0, 0}, 1.0}});
  const Field r = riesz_apply(f, 2.0);
  const double xi = 5.0 / 8.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_LT(std::abs(r.values[i] - xi * xi * f.values[i]), 1e-12);
  }
}

TEST(Riesz, TwoModeMultiplierTable) {
  // beta = 1 on [-2, 2): modes k = 3 and k = -7 scale by |k|/4.
  const auto g = make_grid(1, 32, 2.0);
  const Field f = mode_datum(g, {{{3, 0, 0}, {1.0, 0.0}}, {{-7, 0, 0}, {0.0, 2.0}}});
  const Field s = to_spectral(riesz_apply(f, 1.0));
  const Field base = forward_transform(f);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const int k = g->wavenumber(i, 0);
    const double m = (k == 3) ? 0.75 : (k == -7 ? 1.75 : 0.0);
    EXPECT_LT(std::abs(s.values[i] - m * base.values[i]), 1e-11);
  }
}

TEST(Riesz, SelfAdjointPositiveAndInvertible) {
  const auto g = make_grid(2, 16, 1.0);
  Field f = to_spectral(random_field(g, 11));
  f.values[0] = 0.0;
  const Field h = to_spectral(random_field(g, 12));
  const Field rf = riesz_apply(f, 1.4);
  const Field rh = riesz_apply(h, 1.4);
  cplx lhs = 0.0, rhs = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    lhs += rf.values[i] * std::conj(h.values[i]);
    rhs += f.values[i] * std::conj(rh.values[i]);
    quad += rf.values[i] * std::conj(f.values[i]);
  }
  EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
  EXPECT_GT(quad.real(), 0.0);
  EXPECT_LT(std::fabs(quad.imag()), 1e-10 * quad.real());
  const Field back = riesz_apply(rf, -1.4);
  EXPECT_LT(max_diff(back, f), 1e-10);
}

TEST(Sobolev, SingleModeHomogeneous) {
  const auto g = make_grid(1, 64, 3.0);
  const Field f = mode_datum(g, {{{4, 0, 0}, {0.0, -1.5}}});
  const double xi = 4.0 / 6.0;
  const double vol = std::sqrt(6.0);
  EXPECT_NEAR(sobolev_norm(f, 0.7, true), std::pow(xi, 0.7) * 1.5 * vol, 1e-12);
}

TEST(Sobolev, HomogeneousNeedsZeroMean) {
  const auto g = make_grid(1, 32, 1.0);
  const Field f = gaussian_datum(g, 0.2);
  EXPECT_THROW((void)sobolev_norm(f, 1.0, true), NotInHomogeneousSpace);
  EXPECT_GT(sobolev_norm(f, 1.0, NormKind::homogeneous_seminorm), 0.0);
}

TEST(Sobolev, GaussianMatchesContinuousTransform) {
  const auto g = make_grid(1, 64, 10.0);
  const Field f = gaussian_datum(g, 1.0);
  double ref = 0.0;
  for (const auto& r : testing::read_csv("interval_reference.csv")) {
    if (r[0] == "sobolev_gaussian") ref = std::stod(r[3]);
  }
  ASSERT_GT(ref, 0.0);
  EXPECT_LT(std::fabs(sobolev_norm(f, 0.75, false) - ref) / ref, 1e-10);
}

TEST(Sobolev, Homogeneity) {
  const auto g = make_grid(2, 16, 2.0);
  const Field f = random_field(g, 5);
  Field cf = f;
  for (auto& v : cf.values) v *= cplx(-3.0, 4.0);
  for (NormKind k : {NormKind::inhomogeneous, NormKind::homogeneous_seminorm}) {
    const double a = sobolev_norm(f, 1.2, k);
    EXPECT_NEAR(sobolev_norm(cf, 1.2, k), 5.0 * a, 1e-12 * a);
  }
}

TEST(Potential, SignAndCoercivity) {
  const auto g = make_grid(1, 16, 1.0);
  EXPECT_THROW(constant_potential(g, 0.5), std::invalid_argument);
  EXPECT_THROW(Potential(g, std::vector<double>(16, -0.5), 1.0), std::invalid_argument);
  const Potential p = cosine_potential(g, -1.0, -0.5);
  EXPECT_DOUBLE_EQ(p.delta0(), 0.5);
  EXPECT_FALSE(p.is_constant());
  EXPECT_TRUE(constant_potential(g, 0.0).is_zero());
}

TEST(Field, RejectsBadValues) {
  const auto g = make_grid(1, 8, 1.0);
  EXPECT_THROW(Field(g, std::vector<cplx>(7), Representation::physical), std::invalid_argument);
  std::vector<cplx> v(8);
  v[2] = cplx(NAN, 0.0);
  EXPECT_THROW(Field(g, v, Representation::physical), std::invalid_argument);
}

TEST(Snapshot, RoundTripBinaryLayout) {
  const auto g = make_grid(2, 8, 1.25);
  const Field f = forward_transform(random_field(g, 9));
  const auto path = std::filesystem::temp_directory_path() / "fdlab_snapshot_test.bin";
  write_snapshot(path, f);
  EXPECT_EQ(std::filesystem::file_size(path), 4U + 4U + 8U + 4U + 64U * 16U);
  const Field back = read_snapshot(path);
  EXPECT_TRUE(back.spectral());
  EXPECT_EQ(*back.grid, *g);
  EXPECT_EQ(max_diff(back, f), 0.0);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace fdlab
