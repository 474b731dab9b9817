#include <gtest/gtest.h>

#include <numeric>

#include "selberg/coxeter.hpp"

using namespace selberg;

TEST(Coxeter, HyperplaneCountEqualsSumOfDegreesMinusOne) {
  for (const char* label : {"A2", "A3", "A5", "B2", "B3", "D4", "I2(5)", "I2_7", "A1"}) {
    const CoxeterGroup g = parse_group(label);
    int n = 0;
    for (int d : g.degrees) n += d - 1;
    EXPECT_EQ(g.hyperplanes(), n) << label;
    EXPECT_EQ(static_cast<int>(g.degrees.size()), g.dim) << label;
  }
}

TEST(Coxeter, KnownSizes) {
  EXPECT_EQ(parse_group("A3").hyperplanes(), 3);
  EXPECT_EQ(parse_group("B3").hyperplanes(), 9);
  EXPECT_EQ(parse_group("D4").hyperplanes(), 12);
  EXPECT_EQ(parse_group("I2(5)").hyperplanes(), 5);
  EXPECT_EQ(parse_group("A1").dim, 1);
  EXPECT_EQ(parse_group("I2(5)").label(), "I2(5)");
}

TEST(Coxeter, NormalsAreUnit) {
  for (const char* label : {"A4", "B3", "D4", "I2(6)"}) {
    for (const auto& n : parse_group(label).normals) {
      const Real s = std::inner_product(n.begin(), n.end(), n.begin(), Real(0));
      EXPECT_NEAR(s, 1.0, 1e-15);
    }
  }
}

TEST(Coxeter, DistanceProductInvariantUnderReflections) {
  for (const char* label : {"A3", "B2", "D4", "I2(5)"}) {
    const CoxeterGroup g = parse_group(label);
    std::vector<Real> t(g.dim);
    for (int i = 0; i < g.dim; ++i) t[i] = 0.3 + 0.17 * i * i - 0.05 * i;
    const Real p = distance_product(g, t);
    for (const auto& n : g.normals) EXPECT_NEAR(distance_product(g, reflect(t, n)), p, 1e-13 * p) << label;
  }
}

TEST(Coxeter, DistanceProductOfTypeA) {
  const CoxeterGroup g = parse_group("A3");
  const std::vector<Real> t = {1.0, 2.5, -0.5};
  // prod |t_i - t_j| / sqrt(2)^3
  EXPECT_NEAR(distance_product(g, t), 1.5 * 1.5 * 3.0 / std::pow(std::sqrt(2.0), 3), 1e-14);
  EXPECT_THROW(distance_product(g, std::vector<Real>{1, 2}), domain_error);
}

TEST(Coxeter, BadLabels) {
  for (const char* label : {"", "A", "E6", "A0", "B0", "I2(1)", "I2(x)", "A2x", "D1"})
    EXPECT_THROW(parse_group(label), domain_error) << label;
}
