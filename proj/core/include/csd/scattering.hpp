#pragma once

#include <optional>
#include <vector>

#include "csd/lattice.hpp"
#include "csd/series.hpp"

namespace csd {

enum class WallClass { Incoming, Outgoing };

// A wall lies in normal-perp. Rank-2 walls are full lines or rays from the origin; in
// higher rank only full hyperplanes are represented.
struct Wall {
  LatticePoint normal;  // primitive in N+
  bool line = true;
  LatticePoint ray;  // primitive direction of a ray support
  WallFunction func;

  // Exact support membership; the apex of a ray counts as inside.
  bool contains(const FixedData& fd, const RatPoint& x) const;
};

bool operator==(const Wall& a, const Wall& b);

WallClass classify(const FixedData& fd, const Wall& w);

struct Diagram {
  FixedData fd;
  Seed seed;
  std::vector<Wall> walls;
  long order = 0;
  bool saturated = false;

  // Appends w, multiplying into an existing wall with the same support and normal.
  void add_wall(Wall w);
};

bool operator==(const Diagram& a, const Diagram& b);

// Primitive direction spanning normal-perp in rank 2.
LatticePoint perp_direction(const FixedData& fd, const LatticePoint& n);

// One full-line wall 1 + z^{p1*(e_i)} per unfrozen index.
Diagram initial_diagram(const FixedData& fd, const Seed& s, long K);

// Composition of wall crossings along a polyline in rank 2.
LaurentPoly path_ordered_product(const Diagram& d, const std::vector<RatPoint>& path,
                                 const LaurentPoly& p, long K);

// Rank-2 geometry helpers shared with later modules.
bool angle_less(const RatPoint& a, const RatPoint& b);  // counterclockwise from the +x axis
RatPoint rot90(const RatPoint& x);
// Distinct support rays of all walls, sorted counterclockwise.
std::vector<LatticePoint> support_rays(const Diagram& d);
// A counterclockwise loop around the origin visiting every chamber, closed (first == last).
std::vector<RatPoint> loop_path(const Diagram& d);

struct ConsistencyReport {
  bool consistent = true;
  std::vector<LaurentPoly> discrepancy;  // loop(z^{f_i}) - z^{f_i} for each basis vector
};

ConsistencyReport check_consistent(const Diagram& d, long K);

// Order-by-order rank-2 completion; the result contains d_in and is consistent mod J^{K+1}.
Diagram complete_rank2(const Diagram& d_in, long K);

}  // namespace csd
