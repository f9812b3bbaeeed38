#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csd/lattice.hpp"
#include "csd/scattering.hpp"
#include "csd/series.hpp"

namespace csd {

// A domain of linearity with its monomial; bend_point is where the piece ends and the
// next one begins (none for the piece ending at the endpoint).
struct Piece {
  LatticePoint exponent;
  Rat coeff = 1;
  std::optional<RatPoint> bend_point;
};

struct BrokenLine {
  LatticePoint initial;
  RatPoint endpoint;
  std::vector<Piece> pieces;  // unbounded piece first
  std::optional<RatPoint> perturbation;  // direction v for a limit of generic lines

  const LatticePoint& final_exponent() const { return pieces.back().exponent; }
  const Rat& coeff() const { return pieces.back().coeff; }
};

bool operator==(const BrokenLine& a, const BrokenLine& b);

struct SegmentPiece {
  LatticePoint exponent;
  Rat coeff = 1;
  Rat duration;  // zero for a degenerate domain of linearity
};

// Segment of a broken line parametrized by [0, total_time]; velocity is -exponent.
struct Segment {
  RatPoint start;
  RatPoint end;
  std::vector<SegmentPiece> pieces;
  Rat total_time;

  RatPoint point_at(const Rat& t) const;
  // start, every piece boundary, end
  std::vector<RatPoint> vertices() const;
};

bool operator==(const Segment& a, const Segment& b);

struct Bend {
  LatticePoint exponent;
  Rat coeff;
};

// Terms of F^{|<n0',m_in>|} at a point on the walls, with shift order <= K; the trivial
// term comes first.
std::vector<Bend> allowed_bends(const Diagram& d, const RatPoint& point, const LatticePoint& m_in, long K);

// All generic broken lines with the given initial exponent and endpoint whose final exponent
// is within J-adic order K of the initial one, in a deterministic order.
std::vector<BrokenLine> enumerate(const Diagram& d, const LatticePoint& initial, const RatPoint& endpoint, long K);

LaurentPoly theta(const Diagram& d, const LatticePoint& m, const RatPoint& endpoint, long K);

Segment reverse(const Segment& s);

struct SegmentCheck {
  bool ok = true;
  std::string violation;
  std::optional<std::size_t> bend;  // index of the offending piece boundary
  std::vector<Rat> ratios;  // coefficient ratio at each piece boundary
};

SegmentCheck validate_segment(const Diagram& d, const Segment& s);

// Same segment with coefficients recomputed from the walls (first coefficient kept).
Segment decorate(const Diagram& d, const Segment& s);

// Segment [t0, 0] of a broken line, where t0 <= 0 is measured from the endpoint; t0 may reach
// into the unbounded piece.
Segment line_segment(const BrokenLine& g, const Rat& t0);

// Generic lines near a non-generic one: the endpoint (or segment start) moves by eps*v and the
// bends keep their walls, exponents and coefficients for all 0 < eps < threshold.
struct PerturbedLine {
  bool valid = false;
  std::string reason;
  Rat threshold;
  RatPoint direction;
  BrokenLine base;
  std::vector<RatPoint> bend_const, bend_slope;  // bend points as const + eps*slope

  BrokenLine at(const Rat& eps) const;
};

struct PerturbedSegment {
  bool valid = false;
  std::string reason;
  Rat threshold;
  RatPoint direction;
  Segment base;
  std::vector<Rat> dur_const, dur_slope;  // piece durations as const + eps*slope
  std::vector<Rat> ratios;

  Segment at(const Rat& eps) const;
};

PerturbedLine perturbed_family(const Diagram& d, const BrokenLine& g, const RatPoint& v);
PerturbedSegment perturbed_family(const Diagram& d, const Segment& s, const RatPoint& v);

// Primitive lattice directions in a fixed spiral order (growing square rings, counterclockwise).
std::vector<LatticePoint> spiral_directions(std::size_t count);

// Normal n in N+ and multiplicity k with diff = k * p1*(n), when diff is a bend shift.
std::optional<std::pair<LatticePoint, long>> bend_shift(const FixedData& fd, const LatticePoint& diff);

}  // namespace csd
