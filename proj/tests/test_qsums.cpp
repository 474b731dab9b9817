#include <gtest/gtest.h>

#include "selberg/qsums.hpp"

using namespace selberg;

namespace {

const JacksonAParams kA{0.2, 0.3, 0.25, 0.15, 0.35};

Real rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(JacksonA, FrozenValues) {
  const QContext ctx(0.1);
  const JacksonTruncation tr{400, 1e-15};
  EXPECT_LT(rel(jackson_sum_A(1, kA, ctx, tr).value, Complex(-0.08516913785284133)), 1e-12);
  EXPECT_LT(rel(jackson_sum_A(2, kA, ctx, tr).value, Complex(-0.0028165930995646)), 1e-12);
}

TEST(JacksonA, MatchesProductForDeltaVariantOnly) {
  const QContext ctx(0.1);
  const JacksonTruncation tr{400, 1e-15};
  for (int k : {1, 2}) {
    const Complex rhs = rhs_jackson_A(k, kA, ctx);
    EXPECT_LT(rel(jackson_sum_A(k, kA, ctx, tr, JacksonAVariant::delta).value, rhs), 1e-11) << k;
    EXPECT_GT(rel(jackson_sum_A(k, kA, ctx, tr, JacksonAVariant::printed).value, rhs), 1e-3) << k;
  }
}

TEST(JacksonA, SecondPoint) {
  const JacksonAParams p{0.4, 0.1, 0.3, 0.45, 0.6};
  const QContext ctx(0.3);
  for (int k : {1, 2, 3}) {
    const JacksonResult r = jackson_sum_A(k, p, ctx, {400, 1e-15});
    EXPECT_TRUE(r.converged);
    EXPECT_LT(rel(r.value, rhs_jackson_A(k, p, ctx)), 1e-10) << k;
  }
}

TEST(JacksonB, FrozenValues) {
  const JacksonBParams p{0.3, 0.2, 0.5};
  const QContext ctx(0.1);
  const JacksonTruncation tr{400, 1e-15};
  EXPECT_LT(rel(jackson_sum_B(1, p, ctx, tr).value, Complex(1.5698180962122614)), 1e-12);
  EXPECT_LT(rel(jackson_sum_B(2, p, ctx, tr).value, Complex(1.8254250149932991)), 1e-12);
  const JacksonBParams p3{0.3, 0.1, 0.6};
  EXPECT_LT(rel(jackson_sum_B(3, p3, QContext(0.2), tr).value, Complex(0.5290832199523222)), 1e-12);
}

TEST(JacksonB, MatchesProduct) {
  const JacksonBParams p{0.3, 0.2, 0.5};
  const QContext ctx(0.1);
  for (int k : {1, 2}) EXPECT_LT(rel(jackson_sum_B(k, p, ctx, {400, 1e-15}).value, rhs_jackson_B(k, p, ctx)), 1e-11);
  // k = 1 is the q-binomial theorem: (q)_inf / (alpha)_inf sum_r (alpha)_r / (q)_r v^r.
  Complex s = 0, term = 1;
  for (int r = 0; r < 200; ++r) {
    s += term;
    term *= (Real(1) - p.alpha * std::pow(0.1, r)) / (Real(1) - std::pow(0.1, r + 1)) * p.v;
  }
  EXPECT_LT(rel(rhs_jackson_B(1, p, ctx), s * qpoch_q(ctx) / qpoch_inf(p.alpha, ctx)), 1e-14);
}

TEST(JacksonSums, DomainChecks) {
  const QContext ctx(0.1);
  EXPECT_THROW(jackson_sum_B(3, JacksonBParams{0.3, 0.5, 0.6}, ctx), domain_error);
  EXPECT_THROW(jackson_sum_A(2, JacksonAParams{0.2, 0.3, 0.25, 0.15, 20}, ctx), domain_error);
  EXPECT_THROW(jackson_sum_A(0, kA, ctx), domain_error);
  EXPECT_THROW(jackson_sum_B(1, JacksonBParams{0.3, 0.2, 0.5}, ctx, {-1, 1e-10}), domain_error);
}

TEST(JacksonSums, TruncationReportsUnconverged) {
  const JacksonResult r = jackson_sum_B(2, JacksonBParams{0.3, 0.45, 0.5}, QContext(0.9), {3, 1e-15});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.shells, 4);
  EXPECT_GT(r.tail_estimate, 0);
}
