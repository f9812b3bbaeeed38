#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csd/brokenline.hpp"
#include "csd/lattice.hpp"
#include "csd/scattering.hpp"

namespace csd {

enum class SetKind { Polygon, Finite };

// A closed polygon (counterclockwise vertices, no repeats) or a finite point set.
struct RationalPointSet {
  SetKind kind = SetKind::Polygon;
  std::vector<RatPoint> points;
};

bool operator==(const RationalPointSet& a, const RationalPointSet& b);

// Ordinary convex hull, counterclockwise from the lowest-leftmost vertex, collinear points dropped.
std::vector<RatPoint> convex_hull(std::vector<RatPoint> pts);
// Boundary-inclusive membership for a simple polygon (a point or segment when degenerate).
bool polygon_contains(const std::vector<RatPoint>& poly, const RatPoint& x);
// Integral points of scale * poly.
std::vector<LatticePoint> lattice_points(const std::vector<RatPoint>& poly, const Int& scale);
bool is_convex_polygon(const std::vector<RatPoint>& poly);
bool contains_set(const RationalPointSet& s, const RatPoint& x);

// y -> y + max(0, nu.y) * shift; nu is an integral covector with nu.shift = 0.
struct Shear {
  RatPoint nu;
  RatPoint shift;
  RatPoint apply(const RatPoint& y) const;
  RatPoint unapply(const RatPoint& y) const;
};

struct ChartWall {
  LatticePoint origin_ray;  // the ray in the initial chart
  RatPoint ray;             // its image
  RatPoint dir;             // wall exponent in chart coordinates
  long degree = 1;          // highest power of z^dir in the wall function, 0 when unknown
  bool initial = false;     // image of an initial (full-line) wall
  bool incoming() const;
};

// A seed chart: the piecewise-linear identification reached by a sequence of mutations.
struct Chart {
  std::vector<Shear> maps;  // applied in order
  std::vector<ChartWall> walls;
  std::vector<std::size_t> path;  // incoming-wall indices mutated at, for reporting

  RatPoint to_chart(const RatPoint& x) const;
  RatPoint from_chart(const RatPoint& y) const;
  // Images of a closed polygon boundary, subdivided at the breaks of the map.
  std::vector<RatPoint> polygon_to_chart(const std::vector<RatPoint>& poly) const;
  std::vector<RatPoint> polygon_from_chart(const std::vector<RatPoint>& poly) const;
  // Preimage of the straight chart segment [to_chart(a), to_chart(b)] as a polyline.
  std::vector<RatPoint> straight_preimage(const RatPoint& a, const RatPoint& b) const;
};

struct ChartSet {
  std::vector<Chart> charts;
  bool closed = false;  // false when the depth bound stopped the search
  std::size_t depth_bound = 16;
};

// Depth bound from CSD_DEPTH_BOUND, default 16.
std::size_t default_depth_bound();

// Charts reachable by mutating at incoming walls; with incoming_only, only at images of the
// initial walls.
ChartSet seed_charts(const Diagram& d, std::size_t depth_bound, bool incoming_only = false);

// The broken line segment whose image in the chart is the straight segment from a to b.
std::optional<Segment> chart_segment(const Diagram& d, const Chart& c, const RatPoint& a, const RatPoint& b);

enum class Verdict { False, True, Unknown };
std::string to_string(Verdict v);

struct PositivityWitness {
  LatticePoint p, q, r;
  long a = 0, b = 0;
  Rat alpha;
};

struct CheckReport {
  Verdict verdict = Verdict::True;
  std::vector<PositivityWitness> positivity_witnesses;
  std::vector<Segment> segment_witnesses;
  long degree_checked = 0;
  long order_checked = 0;
  std::size_t charts_checked = 0;
  bool bounded = false;  // verdict true only up to the checked degree and order
  std::vector<std::string> notes;
};

struct BlcOptions {
  bool incoming_only = false;
  std::size_t depth_bound = 0;  // 0 means default_depth_bound()
  std::size_t spot_pairs = 8;
  std::uint64_t seed = 1;
};

CheckReport is_blc_2d(const Diagram& d, const RationalPointSet& S, long K, const BlcOptions& opt = {});

struct HullResult {
  RationalPointSet hull;
  bool exact = true;  // false when charts did not close or the fixpoint was not reached
  std::size_t rounds = 0;
};

HullResult blc_hull_2d(const Diagram& d, const std::vector<RatPoint>& pts, std::size_t depth_bound = 0);

CheckReport check_positive(const Diagram& d, const RationalPointSet& S, long max_degree, long K);

struct HarnessTrial {
  RationalPointSet polygon;
  std::string origin;  // how the polygon was generated
  Verdict positive = Verdict::Unknown;
  Verdict convex = Verdict::Unknown;
  CheckReport positivity, convexity;
};

struct HarnessReport {
  std::vector<HarnessTrial> trials;
  std::size_t agreements = 0, disagreements = 0, undecided = 0;
};

HarnessReport main_theorem_harness(const Diagram& d, std::size_t trials, long max_degree, long K,
                                   std::uint64_t seed = 1);

}  // namespace csd
