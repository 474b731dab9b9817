#include <gtest/gtest.h>

#include "selberg/identities.hpp"

using namespace selberg;

namespace {

Real rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Rhs, ClosedFormsAtSimplePoints) {
  EXPECT_LT(rel(rhs_selberg(2, 1, 1, 1), Complex(1.0 / 12)), 1e-14);
  EXPECT_LT(rel(rhs_euler_beta(2, 3), Complex(1.0 / 12)), 1e-14);
  EXPECT_LT(rel(rhs_exp_selberg(2, 1, 1), Complex(1)), 1e-14);
  // Barnes first lemma at 1/2: 2 pi i Gamma(1)^4 / Gamma(2)
  EXPECT_LT(rel(rhs_barnes1(0.5, 0.5, 0.5, 0.5), Complex(0, 2 * kPi)), 1e-13);
  EXPECT_LT(rel(rhs_barnes2(0.5, 1), Complex(0, kPi)), 1e-14);
}

TEST(Rhs, FrozenValues) {
  EXPECT_LT(rel(rhs_mb_gamma(2, 0.5, 0.5, 0.5, 0.5, 0.5), Complex(-10.335425560099933)), 1e-13);
  EXPECT_LT(rel(rhs_mb_u(2, 0.5, 0.5, 1), Complex(-4.934802200544679)), 1e-13);
  const std::vector<Complex> u = {0.7, 0.65, 0.6, 0.55, 0.5};
  EXPECT_LT(rel(rhs_elliptic_beta(u, PQContext(0.15, 0.2)), Complex(1136.8885334633424)), 1e-12);
  EXPECT_LT(rel(rhs_elliptic_selberg(1, 0.3, Complex(0, 1)), Complex(2.3082343291217756706905197893)), 1e-13);
  EXPECT_LT(rel(rhs_q_selberg_gd(1, 0.3, 0.25, 0.4, 0.35, QContext(0.2), GdVariant::reconciled),
                Complex(0, 4.971086383815438)),
            1e-13);
  EXPECT_LT(rel(rhs_q_selberg_gd(2, 0.3, 0.25, 0.4, 0.35, QContext(0.2), GdVariant::reconciled),
                Complex(-40.325766451433665)),
            1e-13);
}

TEST(Rhs, MacdonaldMehtaRankOne) {
  for (Real g : {0.3, 1.0, 2.5}) {
    const Real closed = std::pow(2.0, g + 0.5) * std::tgamma(g + 0.5);
    EXPECT_LT(rel(rhs_macdonald_mehta(parse_group("A1"), g), Complex(closed)), 1e-13);
  }
}

TEST(Rhs, EllipticSelbergRatioIsConstant) {
  const Complex tau(0, 1.2);
  const Complex ref = rhs_elliptic_selberg(2, 0.3, tau) / std::pow(theta1(0.3, tau), 3);
  for (Real lam : {0.1, 0.55, 0.8})
    EXPECT_LT(rel(rhs_elliptic_selberg(2, lam, tau) / std::pow(theta1(lam, tau), 3), ref), 1e-12);
}

TEST(Rhs, EllipticBetaConstraints) {
  const std::vector<Complex> bad = {0.7, 0.65, 0.6, 0.55, 1.2};
  EXPECT_THROW(rhs_elliptic_beta(bad, PQContext(0.15, 0.2)), domain_error);
  const std::vector<Complex> tiny = {0.1, 0.1, 0.1, 0.1, 0.1};
  EXPECT_THROW(rhs_elliptic_beta(tiny, PQContext(0.5, 0.5)), domain_error);
}

TEST(Chain, MapsAndOrders) {
  EXPECT_EQ(enumerate_chain_maps(1, 1).size(), 1u);
  EXPECT_EQ(enumerate_chain_maps(2, 1).size(), 2u);
  EXPECT_EQ(enumerate_chain_maps(2, 2).size(), 2u);  // M = (1,1), (1,2)
  EXPECT_EQ(enumerate_chain_maps(3, 0).size(), 1u);
  for (const auto& m : enumerate_chain_maps(3, 2)) {
    const auto order = chain_order(m);
    EXPECT_EQ(order.size(), 5u);
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 5; ++i) EXPECT_EQ(sorted[i], i);
  }
}

TEST(Chain, SineNormalisationAtResonantGamma) {
  // (2,1) at gamma = 1/2: sin(2 pi gamma) = 0 in the denominators.
  EXPECT_LT(std::abs(chain_denominator(2, 1, 0.5)), 1e-12);
  EXPECT_THROW(chain_coefficient(enumerate_chain_maps(2, 1).front(), 0.5), pole_error);
  const Complex n = rhs_sl3_normalized(2, 1, 1, 1, 1, 0.5);
  EXPECT_TRUE(is_finite(n));
  // Away from resonance the normalised RHS is the plain RHS times the denominator.
  const Real g = 0.3;
  EXPECT_LT(rel(rhs_sl3_normalized(2, 1, 1, 1, 1, g), rhs_sl3(2, 1, 1, 1, 1, g) * chain_denominator(2, 1, g)), 1e-12);
}

TEST(Chain, GapExponentsFollowNeighbours) {
  // order: s (variable 1) on top of t (variable 0)
  const auto e = sl3_gap_exponents({1, 0}, 1, 1.5, 2.0, 3.0, 0.3);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_DOUBLE_EQ(e[0], 2.0);   // beta2 - 1
  EXPECT_DOUBLE_EQ(e[1], -0.3);  // -gamma between t and s
  EXPECT_DOUBLE_EQ(e[2], 0.5);   // alpha - 1
}

TEST(Registry, SeventeenIdentitiesWithValidSamples) {
  const auto& reg = registry();
  EXPECT_EQ(reg.size(), 17u);
  for (const auto& d : reg) {
    EXPECT_TRUE(d.validate(d.sample).empty()) << d.id;
    EXPECT_FALSE(d.engines.empty()) << d.id;
    EXPECT_NE(std::find(d.engines.begin(), d.engines.end(), d.default_engine), d.engines.end()) << d.id;
    EXPECT_TRUE(is_finite(d.rhs(d.sample, d.variants.empty() ? "" : d.variants.front()))) << d.id;
  }
  EXPECT_THROW(find_identity("nope"), domain_error);
}

TEST(Registry, Reductions) {
  EXPECT_LT(rel(rhs_selberg(1, 1.3, 2.2, 0.7), rhs_euler_beta(1.3, 2.2)), 1e-14);
  EXPECT_LT(rel(rhs_mb_gamma(1, 0.4, 0.6, 0.7, 1.1, 0.9), rhs_barnes1(0.4, 0.6, 0.7, 1.1)), 1e-14);
  const QSelbergParams p{0.2, 0.3, 0.25, 0.15, 0.45, 0.35};
  EXPECT_LT(rel(rhs_q_selberg_abgd(1, p, QContext(0.1)), rhs_q_contour_abgd(p, QContext(0.1))), 1e-13);
}

TEST(Lhs, PlansMatchIdentityShapes) {
  const auto& sel = find_identity("selberg");
  const LhsPlan p = build_lhs("selberg", sel.sample);
  EXPECT_EQ(p.domain.kind, DomainKind::OrderedSimplex);
  EXPECT_EQ(p.domain.k, 2);
  const Real t[] = {0.8, 0.3};
  EXPECT_NEAR(p.integrand(t).real(), 0.25, 1e-15);  // (0.8 - 0.3)^2

  const LhsPlan chain = build_lhs("sl3_selberg", find_identity("sl3_selberg").sample);
  EXPECT_EQ(chain.domain.kind, DomainKind::ConstrainedBoxChain);
  EXPECT_EQ(chain.chain_gaps.size(), chain.domain.chain.size());
  EXPECT_THROW(build_lhs("unknown", sel.sample), domain_error);
}

TEST(Lhs, EllipticSelbergFinitePart) {
  const QuadResult r = elliptic_selberg_lhs_k1(0.3, Complex(0, 1), 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(rel(r.value, rhs_elliptic_selberg(1, 0.3, Complex(0, 1))), 1e-10);
}

TEST(Params, ComplexParsing) {
  EXPECT_EQ(*parse_complex("1.5"), Complex(1.5, 0));
  EXPECT_EQ(*parse_complex("0.5+0.25i"), Complex(0.5, 0.25));
  EXPECT_EQ(*parse_complex("2i"), Complex(0, 2));
  EXPECT_EQ(*parse_complex("-i"), Complex(0, -1));
  EXPECT_EQ(*parse_complex("1e-3-2e-2i"), Complex(1e-3, -2e-2));
  EXPECT_FALSE(parse_complex("abc"));
  EXPECT_FALSE(parse_complex(""));
}

TEST(ExpSelberg, CutoffBoundsTail) {
  const Real R = exp_selberg_cutoff(3, 2, 1, 1e-15);
  const Real p = 3 * 1 + 3 * 2 * 1 + 3;
  EXPECT_LT(std::exp(-R) * std::pow(R, p), 1e-15);
}
