#include <gtest/gtest.h>

#include <random>

#include "capelli/polynomial.hpp"
#include "support.hpp"

namespace capelli {
namespace {

Polynomial x(int i, int j) { return Polynomial::variable(VarId::x(i, j)); }

TEST(VarId, SymmetricIndicesAreCanonical) {
  EXPECT_EQ(VarId::xs(2, 1), VarId::xs(1, 2));
  EXPECT_EQ(VarId::xs(3, 1).row, 1);
  EXPECT_NE(VarId::x(2, 1), VarId::x(1, 2));
  EXPECT_LT(VarId::x(1, 1), VarId::x(1, 2));
  EXPECT_LT(VarId::x(2, 2), VarId::y(1, 1));
}

TEST(Polynomial, AdditiveIdentityAndCancellation) {
  const Polynomial p = parse_polynomial("2*x[1,1]^2*x[1,2] - 3*y[2,2] + 5");
  EXPECT_EQ(p + Polynomial(), p);
  EXPECT_TRUE((x(1, 1) + (-x(1, 1))).is_zero());
  EXPECT_TRUE((x(1, 1) - x(1, 1)).terms().empty());
}

TEST(Polynomial, DisjointSupportsAddTermwise) {
  const Polynomial sum = x(1, 1) * Polynomial(2) + x(1, 1) * x(1, 2) * Polynomial(3);
  ASSERT_EQ(sum.size(), 2U);
  EXPECT_EQ(sum.coefficient(Exponents::single(VarId::x(1, 1))), 2);
  EXPECT_EQ(sum.coefficient(Exponents::single(VarId::x(1, 1)) + Exponents::single(VarId::x(1, 2))), 3);
}

TEST(Polynomial, Products) {
  const Polynomial p = parse_polynomial("x[1,1] - 4*x[2,1]*y[1,2]");
  EXPECT_EQ(p * Polynomial(1), p);
  EXPECT_EQ((x(1, 1) + x(1, 2)) * (x(1, 1) - x(1, 2)), parse_polynomial("x[1,1]^2 - x[1,2]^2"));
}

TEST(Polynomial, SquaredTwoByTwoDeterminant) {
  // Distribute (a - b)(a - b) product by product and combine by hand.
  const Polynomial a = x(1, 1) * x(2, 2);
  const Polynomial b = x(1, 2) * x(2, 1);
  Polynomial oracle;
  for (const auto& u : {a, -b})
    for (const auto& v : {a, -b}) oracle += u * v;
  const Polynomial d = det(variable_matrix(Family::X, Grid::standard, 2, 2));
  const Polynomial squared = d * d;
  EXPECT_EQ(squared, oracle);
  EXPECT_EQ(squared.size(), 3U);
  EXPECT_EQ(squared, parse_polynomial("x[1,1]^2*x[2,2]^2 - 2*x[1,1]*x[1,2]*x[2,1]*x[2,2] + x[1,2]^2*x[2,1]^2"));
}

TEST(Polynomial, MixingGridsIsRejected) {
  const Polynomial s = Polynomial::variable(VarId::xs(1, 2));
  EXPECT_THROW(x(1, 1) + s, std::invalid_argument);
  EXPECT_THROW(x(1, 1) * s, std::invalid_argument);
  EXPECT_NO_THROW(s * Polynomial::variable(VarId::ys(2, 1)));
}

TEST(Polynomial, Differentiation) {
  EXPECT_EQ(diff(pow(x(1, 1), 3), VarId::x(1, 1)), x(1, 1) * x(1, 1) * Polynomial(3));
  EXPECT_TRUE(diff(x(2, 2), VarId::x(1, 1)).is_zero());
  const Polynomial d2 = det(variable_matrix(Family::X, Grid::standard, 2, 2));
  EXPECT_EQ(diff(d2, VarId::x(1, 1)), x(2, 2));
  // Symmetric grid: derivative with respect to the single stored variable, no weights.
  const Polynomial s = Polynomial::variable(VarId::xs(1, 2));
  EXPECT_EQ(diff(s * s, VarId::xs(2, 1)), s * Polynomial(2));
}

TEST(Polynomial, DeterminantSmallCases) {
  EXPECT_EQ(det({{x(1, 2) + Polynomial(7)}}), x(1, 2) + Polynomial(7));
  EXPECT_EQ(det(variable_matrix(Family::X, Grid::standard, 2, 2)), x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1));
  const auto m3 = variable_matrix(Family::X, Grid::standard, 3, 3);
  const Polynomial d3 = det(m3);
  EXPECT_EQ(d3, testing::cofactor_det(m3));
  EXPECT_EQ(d3.size(), 6U);
  for (const auto& [e, c] : d3.terms()) EXPECT_EQ(e.total_degree(), 3U);
  EXPECT_THROW(det({{x(1, 1), x(1, 2)}}), std::invalid_argument);
}

TEST(Polynomial, DeterminantWithRepeatedColumnVanishes) {
  std::mt19937 rng(11);
  const auto vars = testing::standard_vars(2);
  for (int trial = 0; trial < 20; ++trial) {
    PolynomialMatrix m(3);
    for (auto& row : m) {
      Polynomial shared = testing::random_polynomial(rng, vars, 2);
      row = {shared, testing::random_polynomial(rng, vars, 2), shared};
    }
    EXPECT_TRUE(det(m).is_zero());
  }
}

TEST(Polynomial, RingAxiomsOnRandomInputs) {
  std::mt19937 rng(2024);
  const auto vars = testing::standard_vars(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testing::random_polynomial(rng, vars, 3);
    const auto q = testing::random_polynomial(rng, vars, 3);
    const auto r = testing::random_polynomial(rng, vars, 3);
    ASSERT_EQ((p + q) + r, p + (q + r));
    ASSERT_EQ((p * q) * r, p * (q * r));
    ASSERT_EQ(p + q, q + p);
    ASSERT_EQ(p * q, q * p);
    ASSERT_EQ(p * (q + r), p * q + p * r);
  }
}

TEST(Polynomial, DifferentiationIsADerivation) {
  std::mt19937 rng(7);
  const auto vars = testing::standard_vars(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testing::random_polynomial(rng, vars, 3);
    const auto q = testing::random_polynomial(rng, vars, 3);
    const auto& v = vars[static_cast<std::size_t>(trial) % vars.size()];
    ASSERT_EQ(diff(p * q, v), diff(p, v) * q + p * diff(q, v));
  }
}

TEST(Polynomial, TextFormRoundTrips) {
  EXPECT_EQ(parse_polynomial("2*x[1,1]^2*x[1,2] - 3*y[2,2]").to_string(), "2*x[1,1]^2*x[1,2] - 3*y[2,2]");
  EXPECT_EQ(parse_polynomial("xs[2,1]*ys[1,1]").to_string(), "xs[1,2]*ys[1,1]");
  EXPECT_EQ(Polynomial().to_string(), "0");
  EXPECT_EQ(parse_polynomial("x[1,1]*x[1,1] + 0*x[2,2]").to_string(), "x[1,1]^2");
  EXPECT_EQ(parse_polynomial("-1").to_string(), "-1");

  std::mt19937 rng(99);
  const auto vars = testing::standard_vars(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = testing::random_polynomial(rng, vars, 4) + Polynomial(trial - 50);
    ASSERT_EQ(parse_polynomial(p.to_string()), p) << p;
  }
}

TEST(Polynomial, ParseErrors) {
  EXPECT_THROW(parse_polynomial(""), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("x[1,1] +"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("z[1,1]"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("d[1,1]"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("x[1 1]"), std::invalid_argument);
}

TEST(Polynomial, ArbitraryPrecisionCoefficients) {
  const Polynomial big = pow(Polynomial(10), 40) * x(1, 1);
  EXPECT_EQ(big.coefficient(Exponents::single(VarId::x(1, 1))), Integer("10000000000000000000000000000000000000000"));
  EXPECT_EQ(parse_polynomial(big.to_string()), big);
}

}  // namespace
}  // namespace capelli
