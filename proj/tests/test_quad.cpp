#include <gtest/gtest.h>

#include <cmath>

#include "selberg/gauss.hpp"
#include "selberg/quad.hpp"
#include "selberg/specfun.hpp"

using namespace selberg;

namespace {

Real beta_fn(Real a, Real b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

}  // namespace

TEST(GaussRules, JacobiMoments) {
  const GaussRule r = gauss_jacobi01(12, 0.3, -0.4);  // weight (1-x)^0.3 x^-0.4
  for (int m = 0; m < 20; ++m) {
    Real s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], m);
    EXPECT_NEAR(s / beta_fn(0.6 + m, 1.3), 1.0, 1e-13) << "moment " << m;
  }
}

TEST(GaussRules, LegendreAndHermite) {
  const GaussRule l = gauss_legendre(10);
  Real s = 0;
  for (std::size_t i = 0; i < l.size(); ++i) s += l.weights[i] * std::pow(l.nodes[i], 18);
  EXPECT_NEAR(s, 2.0 / 19, 1e-14);
  const GaussRule h = gauss_hermite(8);
  Real s0 = 0, s4 = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    s0 += h.weights[i];
    s4 += h.weights[i] * std::pow(h.nodes[i], 4);
  }
  EXPECT_NEAR(s0, std::sqrt(2 * kPi), 1e-13);
  EXPECT_NEAR(s4, 3 * std::sqrt(2 * kPi), 1e-12);
}

TEST(JacobiCube, SeparableProduct) {
  const AxisExponents e[] = {{0.5, -0.3}, {0, 1.2}};
  auto f = [](std::span<const Real> t) -> Complex { return std::exp(t[0] + t[1]); };
  const QuadResult r = quad_jacobi_cube(f, 2, e, 1e-13);
  // each axis: int (1-x)^a x^b e^x
  auto axis = [](Real a, Real b) {
    const GaussRule g = gauss_jacobi01(40, a, b);
    Real s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::exp(g.nodes[i]);
    return s;
  };
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value.real() / (axis(0.5, -0.3) * axis(0, 1.2)), 1.0, 1e-12);
}

TEST(OrderedSimplex, VolumeAndSelbergValue) {
  SimplexWeights w;
  auto one = [](std::span<const Real>) -> Complex { return 1; };
  const QuadResult vol = quad_ordered_simplex(one, 3, 0, 2, w, 1e-13);
  EXPECT_NEAR(vol.value.real(), 8.0 / 6, 1e-13);

  // k=2, alpha=beta=1, gamma=1: 1/12.
  w.pair = 2;
  const QuadResult s = quad_ordered_simplex(one, 2, 0, 1, w, 1e-13);
  EXPECT_NEAR(s.value.real(), 1.0 / 12, 1e-14);
}

TEST(OrderedSimplex, SingularWeightsMatchCubeOverFactorial) {
  SimplexWeights w;
  w.lower = {-0.5};
  w.upper = {0.7};
  w.pair = 2;  // integer gamma keeps the cube integrand smooth
  auto f = [](std::span<const Real> t) -> Complex {
    Real s = 0;
    for (Real x : t) s += x * x;
    return std::exp(-s);
  };
  const QuadResult split = quad_ordered_simplex(f, 3, 0, 1, w, 1e-11);
  const QuadResult cube = quad_ordered_simplex(f, 3, 0, 1, w, 1e-11, Symmetry::symmetric);
  EXPECT_TRUE(split.converged);
  EXPECT_TRUE(cube.converged);
  EXPECT_NEAR(split.value.real() / cube.value.real(), 1.0, 1e-9);
}

TEST(OrderedSimplex, BudgetExhaustionReturnsUnconverged) {
  SimplexWeights w;
  w.pair = 0.3;
  auto f = [](std::span<const Real> t) -> Complex { return std::cos(40 * t[0] * t[1]); };
  const QuadResult r = quad_ordered_simplex(f, 3, 0, 1, w, 1e-15, Symmetry::none, 20000);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.n_evals, 20000);
}

TEST(Torus, CauchyIntegral) {
  // oint exp(t) / t^2 dt = 2 pi i
  auto f = [](std::span<const Complex> t) { return std::exp(t[0]) / (t[0] * t[0]); };
  const QuadResult r = quad_torus(f, 1, 1e-14);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(std::abs(r.value - Complex(0, 2 * kPi)), 0, 1e-13);
  // two dimensions: constant term of (t1 + 1/t1)^2 (t2 + 1/t2)^2 / (t1 t2)
  auto g = [](std::span<const Complex> t) {
    return std::pow(t[0] + Real(1) / t[0], 2) * std::pow(t[1] + Real(1) / t[1], 2) / (t[0] * t[1]);
  };
  const QuadResult r2 = quad_torus(g, 2, 1e-14);
  EXPECT_NEAR(std::abs(r2.value - Real(4) * std::pow(Complex(0, 2 * kPi), 2)), 0, 1e-11);
}

TEST(VerticalLines, BarnesBetaIntegral) {
  // int_{iR} Gamma(a+t) Gamma(b-t) dt = 2 pi i Gamma(a+b) 2^{-(a+b)}
  const Real a = 0.7, b = 1.1;
  auto f = [&](std::span<const Complex> t) { return gamma(a + t[0]) * gamma(b - t[0]); };
  const QuadResult r = quad_vertical(f, 1, 10, 1e-12);
  EXPECT_TRUE(r.converged);
  const Complex want = Complex(0, 2 * kPi) * std::tgamma(a + b) * std::pow(2.0, -(a + b));
  EXPECT_NEAR(std::abs(r.value - want) / std::abs(want), 0, 1e-11);
}

TEST(VerticalLines, NonDecayingIntegrandIsReported) {
  auto f = [](std::span<const Complex>) { return Complex(1); };
  EXPECT_THROW(quad_vertical(f, 1, 4, 1e-10), convergence_error);
}

TEST(GaussianRk, PolynomialMoments) {
  auto f = [](std::span<const Real> t) -> Complex { return t[0] * t[0] * t[1] * t[1]; };
  const QuadResult r = quad_gaussian_rk(f, 2, 4);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value.real(), 2 * kPi, 1e-12);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  const DomainSpec d = DomainSpec::ordered_simplex(3, 0, 1);
  auto f = [](std::span<const Real> t) -> Complex { return t[0] * (1 - t[2]); };
  MCOptions one, many;
  one.threads = 1;
  many.threads = 4;
  one.batch_size = many.batch_size = 1000;
  const QuadResult a = mc_integrate(f, d, Sampler::uniform_simplex(), 10007, 7, one);
  const QuadResult b = mc_integrate(f, d, Sampler::uniform_simplex(), 10007, 7, many);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error_estimate, b.error_estimate);
  const QuadResult c = mc_integrate(f, d, Sampler::uniform_simplex(), 10007, 8, one);
  EXPECT_NE(a.value, c.value);
}

TEST(MonteCarlo, SamplersAreUnbiased) {
  // Ordered simplex with weight t_2^{-1/2}: int_{0<t2<t1<1} t2^{-1/2} = 4/3.
  auto f = [](std::span<const Real> t) -> Complex { return 1 / std::sqrt(t[1]); };
  const DomainSpec d = DomainSpec::ordered_simplex(2, 0, 1);
  const QuadResult g = mc_integrate(f, d, Sampler::dirichlet_gaps({0, 0, -0.5}), 400000, 1);
  EXPECT_LE(std::abs(g.value.real() - 4.0 / 3), 4 * g.error_estimate + 1e-12);
  const QuadResult u = mc_integrate(f, d, Sampler::uniform_simplex(), 400000, 1);
  EXPECT_LE(std::abs(u.value.real() - 4.0 / 3), 4 * u.error_estimate);

  auto h = [](std::span<const Real> t) -> Complex { return t[0] * t[1]; };
  const DomainSpec cube = DomainSpec::cube(2);
  const QuadResult b = mc_integrate(h, cube, Sampler::beta_importance(2, 1.5), 400000, 3);
  EXPECT_LE(std::abs(b.value.real() - 0.25), 4 * b.error_estimate);
  const QuadResult uc = mc_integrate(h, cube, Sampler::uniform_cube(), 400000, 3);
  EXPECT_LE(std::abs(uc.value.real() - 0.25), 4 * uc.error_estimate);

  auto sq = [](std::span<const Real> t) -> Complex { return t[0] * t[0]; };
  const QuadResult gs = mc_integrate(sq, DomainSpec::full_space_gaussian(1), Sampler::gaussian_iso(), 400000, 5);
  EXPECT_LE(std::abs(gs.value.real() - std::sqrt(2 * kPi)), 4 * gs.error_estimate);
}

TEST(MonteCarlo, RejectsMismatchedSampler) {
  auto f = [](std::span<const Real>) -> Complex { return 1; };
  EXPECT_THROW(mc_integrate(f, DomainSpec::cube(2), Sampler::gaussian_iso(), 100, 1), std::invalid_argument);
  EXPECT_THROW(mc_integrate(f, DomainSpec::ordered_simplex(2, 0, 1), Sampler::dirichlet_gaps({0, 0}), 100, 1),
               std::invalid_argument);
}
