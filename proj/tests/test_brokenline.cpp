#include <gtest/gtest.h>

#include <random>

#include "csd/brokenline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace csd {
namespace {

// The A2 segment from (1,-5) to (2,4) used by the reverse construction example.
Segment a2_example_segment() {
  Segment s;
  s.start = RatPoint{1, -5};
  s.end = RatPoint{2, 4};
  s.total_time = 5;
  s.pieces = {{LatticePoint{1, -3}, 1, 1}, {LatticePoint{1, -2}, 1, 1}, {LatticePoint{-1, -2}, 1, 1}, {LatticePoint{-1, -1}, 1, 2}};
  return s;
}

// Sum of the bounded piece durations of g.
Rat bounded_time(const BrokenLine& g) {
  Rat t = 0;
  for (std::size_t i = 1; i < g.pieces.size(); ++i) {
    RatPoint from = *g.pieces[i - 1].bend_point;
    RatPoint to = i + 1 < g.pieces.size() ? *g.pieces[i].bend_point : g.endpoint;
    t += *ratio(to - from, -RatPoint(g.pieces[i].exponent));
  }
  return t;
}

oracle::Exp exp_of(const LatticePoint& m) { return {m[0].get_si(), m[1].get_si()}; }

TEST(AllowedBends, A2VerticalAxis) {
  auto bends = allowed_bends(test::a2(5), RatPoint{0, 1}, LatticePoint{-1, 0}, 5);
  ASSERT_EQ(bends.size(), 2u);
  EXPECT_EQ(bends[0].exponent, (LatticePoint{-1, 0}));
  EXPECT_EQ(bends[0].coeff, 1);
  EXPECT_EQ(bends[1].exponent, (LatticePoint{-1, 1}));
  EXPECT_EQ(bends[1].coeff, 1);
}

TEST(AllowedBends, ParallelExponentOnlyStraight) {
  auto bends = allowed_bends(test::a2(5), RatPoint{0, 1}, LatticePoint{0, 2}, 5);
  ASSERT_EQ(bends.size(), 1u);
  EXPECT_EQ(bends[0].exponent, (LatticePoint{0, 2}));
}

TEST(AllowedBends, KroneckerCentralRayCoefficients) {
  auto bends = allowed_bends(test::kronecker(6), RatPoint{1, -1}, LatticePoint{-1, 0}, 6);
  auto closed_form = oracle::series_power({Rat(-1)}, -2, 3);
  ASSERT_GE(bends.size(), 3u);
  for (long k = 0; k < 3; ++k) {
    EXPECT_EQ(bends[k].exponent, (LatticePoint{-1, 0} + Int(k) * LatticePoint{-2, 2}));
    EXPECT_EQ(bends[k].coeff, closed_form[k]);
  }
  EXPECT_EQ(bends[2].coeff, 3);
}

TEST(AllowedBends, PointOffTheWallsIsRejected) {
  EXPECT_THROW(allowed_bends(test::a2(5), RatPoint{1, 2}, LatticePoint{-1, 0}, 5), InputError);
}

TEST(Enumerate, A2TwoLinesForTheBentTheta) {
  auto lines = enumerate(test::a2(5), LatticePoint{-1, 0}, RatPoint{2, 1}, 5);
  ASSERT_EQ(lines.size(), 2u);
  std::vector<LatticePoint> finals{lines[0].final_exponent(), lines[1].final_exponent()};
  std::sort(finals.begin(), finals.end());
  EXPECT_EQ(finals, (std::vector<LatticePoint>{{-1, 0}, {-1, 1}}));
  for (const auto& g : lines) {
    EXPECT_EQ(g.pieces.front().exponent, (LatticePoint{-1, 0}));
    EXPECT_EQ(g.pieces.front().coeff, 1);
  }
}

TEST(Enumerate, StraightLineInOneChamber) {
  auto lines = enumerate(test::a2(5), LatticePoint{1, 1}, RatPoint{2, 3}, 5);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].pieces.size(), 1u);
  EXPECT_EQ(theta(test::a2(5), LatticePoint{1, 1}, RatPoint{2, 3}, 5).str(), "z^(1,1)");
}

TEST(Enumerate, EndpointOnAWallIsRejected) {
  EXPECT_THROW(enumerate(test::a2(5), LatticePoint{-1, 0}, RatPoint{0, 1}, 5), NonGenericError);
}

TEST(Enumerate, BoundedRestrictionsValidate) {
  std::uint64_t state = 19;
  for (const Diagram* d : {&test::a2(5), &test::g2(8), &test::kronecker(5)}) {
    for (int trial = 0; trial < 6; ++trial) {
      RatPoint z = test::random_generic_point(*d, state);
      LatticePoint m{static_cast<long>(state % 5) - 2, static_cast<long>((state >> 8) % 5) - 2};
      if (m.is_zero()) continue;
      for (const auto& g : enumerate(*d, m, z, 4)) {
        Rat t = bounded_time(g);
        for (const Rat& t0 : {t, Rat(t + 1)}) {
          if (t0 == 0) continue;
          SegmentCheck c = validate_segment(*d, line_segment(g, -t0));
          EXPECT_TRUE(c.ok) << c.violation;
        }
      }
    }
  }
}

TEST(Theta, A2BentThetaFunction) {
  EXPECT_EQ(theta(test::a2(5), LatticePoint{-1, 0}, RatPoint{2, 1}, 5).str(), "z^(-1,1) + z^(-1,0)");
}

TEST(Theta, ZeroExponentIsOne) {
  EXPECT_EQ(theta(test::g2(8), LatticePoint{0, 0}, RatPoint{rat(1, 3), rat(5, 7)}, 8).str(), "1");
}

TEST(Theta, MatchesOracleTransport) {
  const long K = 6;
  std::uint64_t state = 23;
  for (const auto& [d, g] : {std::pair{&test::a2(5), oracle::a2()}, std::pair{&test::g2(8), oracle::g2()},
                             std::pair{&test::kronecker(6), oracle::kronecker()}}) {
    auto walls = oracle::walls_of(*d);
    for (int trial = 0; trial < 8; ++trial) {
      RatPoint z = test::random_generic_point(*d, state);
      LatticePoint m{static_cast<long>(state % 7) - 3, static_cast<long>((state >> 8) % 7) - 3};
      // Near the Kronecker limit ray broken lines bend back, so theta there is not z^m.
      if (d == &test::kronecker(6) && m[0] == -m[1]) continue;
      LaurentPoly mine = theta(*d, m, z, K);
      auto theirs = oracle::theta(g, walls, exp_of(m), {z[0], z[1]}, K);
      EXPECT_EQ(oracle::from_library(mine), theirs) << "m=" << to_string(m) << " z=" << to_string(z);
    }
  }
}

TEST(Theta, G2ChamberExpansionMatchesOracle) {
  const Diagram& d = test::g2(8);
  RatPoint z{1, rat(1, 50)};
  auto lines = enumerate(d, LatticePoint{0, 3}, z, 6);
  Rat total = 0;
  for (const auto& g : lines) total += g.coeff();
  auto theirs = oracle::theta(oracle::g2(), oracle::walls_of(d), {0, 3}, {z[0], z[1]}, 6);
  Rat expect = 0;
  for (const auto& [e, c] : theirs) expect += c;
  EXPECT_EQ(total, expect);
  EXPECT_EQ(oracle::from_library(theta(d, LatticePoint{0, 3}, z, 6)), theirs);
}

TEST(Theta, CoefficientsAreNonnegativeIntegers) {
  std::uint64_t state = 29;
  for (const Diagram* d : {&test::a2(5), &test::g2(8), &test::kronecker(6)}) {
    for (int trial = 0; trial < 6; ++trial) {
      RatPoint z = test::random_generic_point(*d, state);
      LatticePoint m{static_cast<long>(state % 7) - 3, static_cast<long>((state >> 8) % 7) - 3};
      for (const auto& [e, t] : theta(*d, m, z, 6).terms) {
        EXPECT_EQ(t.coeff.get_den(), 1);
        EXPECT_GT(t.coeff, 0);
      }
    }
  }
}

TEST(Theta, StableOnSaturatedDiagrams) {
  std::uint64_t state = 31;
  // Once saturated, a larger diagram order changes nothing.
  ASSERT_TRUE(test::g2(10).saturated);
  for (int trial = 0; trial < 5; ++trial) {
    RatPoint z = test::random_generic_point(test::g2(10), state);
    LatticePoint m{static_cast<long>(state % 5) - 2, static_cast<long>((state >> 8) % 5) - 2};
    EXPECT_EQ(theta(test::g2(10), m, z, 10), theta(test::g2(12), m, z, 10)) << to_string(m) << " " << to_string(z);
  }
  for (int trial = 0; trial < 5; ++trial) {
    RatPoint z = test::random_generic_point(test::a2(5), state);
    LatticePoint m{static_cast<long>(state % 5) - 2, static_cast<long>((state >> 8) % 5) - 2};
    EXPECT_EQ(theta(test::a2(5), m, z, 5), theta(test::a2(7), m, z, 5)) << to_string(m) << " " << to_string(z);
  }
  // A finite theta function already complete at K gains nothing at K+2.
  EXPECT_EQ(theta(test::a2(5), LatticePoint{-1, 0}, RatPoint{2, 1}, 5), theta(test::a2(7), LatticePoint{-1, 0}, RatPoint{2, 1}, 7));
}

TEST(Theta, EndpointTransport) {
  for (const Diagram* d : {&test::a2(5), &test::g2(8), &test::kronecker(6)}) {
    test::Outcome o = test::endpoint_transport(*d, 5, 10, 37);
    EXPECT_TRUE(o.ok) << o.detail;
    EXPECT_EQ(o.checked, 10u);
  }
}

TEST(Segments, ExampleSegmentValidatesBothWays) {
  const Diagram& d = test::a2(5);
  Segment s = a2_example_segment();
  SegmentCheck c = validate_segment(d, s);
  EXPECT_TRUE(c.ok) << c.violation;
  Segment r = reverse(s);
  EXPECT_EQ(r.start, s.end);
  EXPECT_EQ(r.pieces.front().exponent, (LatticePoint{1, 1}));
  EXPECT_TRUE(validate_segment(d, r).ok);
  EXPECT_EQ(reverse(r), s);
}

TEST(Segments, DisallowedExponentIsReported) {
  Segment s = a2_example_segment();
  s.pieces[1].exponent = LatticePoint{2, -2};
  SegmentCheck c = validate_segment(test::a2(5), s);
  EXPECT_FALSE(c.ok);
  ASSERT_TRUE(c.bend.has_value());
  EXPECT_LE(*c.bend, 1u);
}

TEST(Segments, BendCoefficientIsABinomialAtHighOrder) {
  // Crossing x = 0 with <n0',m> = n bends by k with coefficient C(n, k).
  for (const auto& [n, k] : {std::pair{3L, 2L}, std::pair{60L, 30L}, std::pair{400L, 7L}}) {
    Segment s;
    s.start = RatPoint{n, 0};
    s.pieces = {{LatticePoint{n, -1}, 1, 1}, {LatticePoint{n, k - 1}, 1, rat(1, 4 * n)}};
    s.total_time = 1 + rat(1, 4 * n);
    s.end = RatPoint{0, 1} - rat(1, 4 * n) * RatPoint{n, k - 1};
    SegmentCheck c = validate_segment(test::a2(5), s);
    ASSERT_TRUE(c.ok) << c.violation;
    Int expect = 1;
    for (long i = 0; i < k; ++i) expect = expect * (n - i) / (i + 1);
    EXPECT_EQ(c.ratios.at(0), Rat(expect)) << n << " choose " << k;
  }
}

TEST(Segments, StraightSegmentInOneChamber) {
  Segment s;
  s.start = RatPoint{1, 1};
  s.end = RatPoint{3, 2};
  s.total_time = 1;
  s.pieces = {{LatticePoint{-2, -1}, 1, 1}};
  EXPECT_TRUE(validate_segment(test::a2(5), s).ok);
  Segment r = reverse(s);
  EXPECT_EQ(r.pieces[0].exponent, (LatticePoint{2, 1}));
}

TEST(Perturbation, DegenerateDomainAtTheOrigin) {
  const Diagram& d = test::a2(5);
  BrokenLine g;
  g.initial = LatticePoint{0, -1};
  g.endpoint = RatPoint{1, 0};
  g.pieces = {{LatticePoint{0, -1}, 1, RatPoint{0, 0}}, {LatticePoint{-1, -1}, 1, RatPoint{0, 0}}, {LatticePoint{-1, 0}, 1, std::nullopt}};
  PerturbedLine fam = perturbed_family(d, g, RatPoint{1, 3});
  ASSERT_TRUE(fam.valid) << fam.reason;
  EXPECT_EQ(fam.bend_slope[0], (RatPoint{-3, 0}));
  EXPECT_EQ(fam.bend_slope[1], (RatPoint{0, 3}));
  for (const Rat& eps : {Rat(fam.threshold / 89), Rat(fam.threshold / 97)}) {
    BrokenLine gen = fam.at(eps);
    ASSERT_EQ(gen.pieces.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(gen.pieces[i].exponent, g.pieces[i].exponent);
      EXPECT_EQ(gen.pieces[i].coeff, g.pieces[i].coeff);
    }
    auto lines = enumerate(d, g.initial, gen.endpoint, 5);
    bool found = false;
    for (const auto& h : lines) found = found || h == gen;
    EXPECT_TRUE(found) << "eps=" << to_string(eps);
  }
}

TEST(Perturbation, GenericLineGivesConstantCombinatorics) {
  const Diagram& d = test::a2(5);
  auto lines = enumerate(d, LatticePoint{-1, 0}, RatPoint{2, 1}, 5);
  for (const auto& g : lines) {
    PerturbedLine fam = perturbed_family(d, g, RatPoint{1, 2});
    ASSERT_TRUE(fam.valid) << fam.reason;
    BrokenLine near = fam.at(fam.threshold / 2);
    ASSERT_EQ(near.pieces.size(), g.pieces.size());
    for (std::size_t i = 0; i < g.pieces.size(); ++i) EXPECT_EQ(near.pieces[i].exponent, g.pieces[i].exponent);
  }
}

TEST(Perturbation, DirectionAlongAWallIsRejected) {
  const Diagram& d = test::a2(5);
  BrokenLine g;
  g.initial = LatticePoint{-1, 0};
  g.endpoint = RatPoint{0, 1};
  g.pieces = {{LatticePoint{-1, 0}, 1, std::nullopt}};
  EXPECT_THROW(perturbed_family(d, g, RatPoint{0, 1}), NonGenericError);
}

TEST(SpiralOrder, StartsWithTheUnitRing) {
  auto dirs = spiral_directions(9);
  EXPECT_EQ(dirs.size(), 9u);
  EXPECT_EQ(dirs[0], (LatticePoint{1, 0}));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_LE(abs(dirs[i][0]) + abs(dirs[i][1]), 2);
}

}  // namespace
}  // namespace csd
