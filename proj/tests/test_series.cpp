#include <gtest/gtest.h>

#include <random>

#include "csd/series.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace csd {
namespace {

using test::a2_data;
using test::g2_data;

WallFunction x_series(std::vector<Rat> c, long K = kExact) { return WallFunction(LatticePoint{-2, 2}, 2, std::move(c), K); }

std::vector<Rat> ints(std::initializer_list<long> xs) {
  std::vector<Rat> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

TEST(WallFunctionArithmetic, BinomialSquare) {
  WallFunction f = WallFunction::binomial(LatticePoint{0, 1}, 1);
  EXPECT_EQ(wf_mul(f, f, 2).coeffs, ints({2, 1}));
  EXPECT_EQ(wf_mul(f, WallFunction(LatticePoint{0, 1}, 1, {}), kExact), f);
  EXPECT_EQ(wf_pow(wf_truncate(f, 3), 3, 3).coeffs, ints({3, 3, 1}));
  EXPECT_TRUE(wf_pow(f, 0, 5).is_one());
}

TEST(WallFunctionArithmetic, InverseSquareOfOneMinusX) {
  WallFunction g = wf_pow(x_series(ints({-1})), -2, 6);
  EXPECT_EQ(g.coeffs, ints({2, 3, 4}));
  EXPECT_EQ(g.order, 6);
}

TEST(WallFunctionArithmetic, ProductMatchesLongMultiplication) {
  WallFunction central = wf_pow(x_series(ints({-1})), -2, 6);
  WallFunction prod = wf_mul(x_series(ints({1})), central, 6);
  EXPECT_EQ(prod.coeffs, ints({3, 5, 7}));
  auto oracle = oracle::series_product(ints({1, 1}), ints({1, 2, 3, 4}), 3);
  EXPECT_EQ(oracle[1], prod.coeffs[0]);
  EXPECT_EQ(oracle[2], prod.coeffs[1]);
  EXPECT_EQ(oracle[3], prod.coeffs[2]);
}

TEST(WallFunctionArithmetic, DirectionMismatchIsRejected) {
  EXPECT_THROW(wf_mul(WallFunction::binomial(LatticePoint{0, 1}, 1), WallFunction::binomial(LatticePoint{1, 0}, 1), 3),
               InputError);
}

TEST(WallFunctionArithmetic, PowersAddAndMatchOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rat> c;
    for (int k = 0; k < 3; ++k) c.emplace_back(static_cast<long>(rng() % 7) - 3);
    WallFunction f = x_series(c, 12);
    long a = static_cast<long>(rng() % 7) - 3, b = static_cast<long>(rng() % 7) - 3;
    WallFunction lhs = wf_mul(wf_pow(f, a, 12), wf_pow(f, b, 12), 12);
    WallFunction rhs = wf_pow(f, a + b, 12);
    for (long k = 1; k <= 6; ++k) EXPECT_EQ(lhs.coeff(k), rhs.coeff(k)) << "a=" << a << " b=" << b;
    auto oracle = oracle::series_power(c, a, 6);
    WallFunction pa = wf_pow(f, a, 12);
    for (long k = 1; k <= 6; ++k) EXPECT_EQ(pa.coeff(k), oracle[k]);
  }
}

TEST(WallFunctionArithmetic, TruncatedCoefficientsAreGuarded) {
  WallFunction g = wf_pow(x_series(ints({-1})), -2, 6);
  EXPECT_THROW(g.coeff(4), TruncationError);
  EXPECT_EQ(g.coeff(0), 1);
}

TEST(LaurentPolynomial, PrintsHighestExponentFirst) {
  LaurentPoly p = LaurentPoly::monomial(LatticePoint{-1, 0}, 5);
  p.add_term(LatticePoint{-1, 1}, 1, 1);
  EXPECT_EQ(p.str(), "z^(-1,1) + z^(-1,0)");
  LaurentPoly q = LaurentPoly::monomial(LatticePoint{0, 0}, 5, rat(-3, 2));
  EXPECT_EQ(q.str(), "-3/2");
}

TEST(WallCrossing, A2BendAtVerticalAxis) {
  FixedData fd = a2_data();
  WallFunction f = WallFunction::binomial(LatticePoint{0, 1}, 1);
  LaurentPoly p = LaurentPoly::monomial(LatticePoint{-1, 0}, 5);
  LaurentPoly r = wall_cross(fd, p, f, LatticePoint{1, 0}, 1, 5);
  EXPECT_EQ(r.str(), "z^(-1,1) + z^(-1,0)");
}

TEST(WallCrossing, ExponentOnTheWallIsFixed) {
  FixedData fd = a2_data();
  WallFunction f = WallFunction::binomial(LatticePoint{0, 1}, 1);
  LaurentPoly p = LaurentPoly::monomial(LatticePoint{0, 1}, 5);
  EXPECT_EQ(wall_cross(fd, p, f, LatticePoint{1, 0}, 1, 5), p);
  EXPECT_EQ(wall_cross(fd, p, f, LatticePoint{1, 0}, -1, 5), p);
}

TEST(WallCrossing, OppositeCrossingsCancel) {
  std::mt19937_64 rng(17);
  FixedData fd = g2_data();
  const long K = 8;
  WallFunction f(LatticePoint{-1, 3}, 2, ints({2, 1}), K);
  for (int trial = 0; trial < 30; ++trial) {
    LatticePoint m{static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 9) - 4};
    int sign = rng() % 2 ? 1 : -1;
    LaurentPoly p = LaurentPoly::monomial(m, K);
    LaurentPoly back = wall_cross(fd, wall_cross(fd, p, f, LatticePoint{1, 1}, sign, K), f, LatticePoint{1, 1}, -sign, K);
    EXPECT_EQ(back, p) << to_string(m);
  }
}

TEST(WallCrossing, IsMultiplicative) {
  FixedData fd = a2_data();
  const long K = 6;
  WallFunction f = WallFunction::binomial(LatticePoint{-1, 1}, 2);
  LaurentPoly p = LaurentPoly::monomial(LatticePoint{2, -1}, K);
  LaurentPoly q = LaurentPoly::monomial(LatticePoint{1, 3}, K);
  LatticePoint n{1, 1};
  EXPECT_EQ(wall_cross(fd, p * q, f, n, 1, K), truncate(wall_cross(fd, p, f, n, 1, K) * wall_cross(fd, q, f, n, 1, K), K));
}

TEST(WallCrossing, SameHyperplaneCrossingsCommute) {
  FixedData fd = a2_data();
  const long K = 6;
  WallFunction f = WallFunction::binomial(LatticePoint{0, 1}, 1);
  WallFunction g(LatticePoint{0, 1}, 1, ints({3, 1}));
  LaurentPoly p = LaurentPoly::monomial(LatticePoint{-2, 1}, K);
  LatticePoint n{1, 0};
  EXPECT_EQ(wall_cross(fd, wall_cross(fd, p, f, n, 1, K), g, n, 1, K),
            wall_cross(fd, wall_cross(fd, p, g, n, 1, K), f, n, 1, K));
}

}  // namespace
}  // namespace csd
