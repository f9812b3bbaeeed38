#pragma once

#include "csd/scattering.hpp"

namespace csd::test {

FixedData a2_data();
FixedData g2_data();
FixedData kronecker_data();

// Completed diagrams, cached per order.
const Diagram& a2(long K);
const Diagram& g2(long K);
const Diagram& kronecker(long K);

// The eight g-vectors of the G2 cluster algebra.
std::vector<RatPoint> g2_g_vectors();
// Broken line convex hull of the G2 g-vectors, counterclockwise from (1,-3).
std::vector<RatPoint> g2_hull();
// The A2 g-vector pentagon, counterclockwise from (0,-1).
std::vector<RatPoint> a2_pentagon();

}  // namespace csd::test
