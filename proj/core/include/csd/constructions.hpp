#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csd/brokenline.hpp"
#include "csd/lattice.hpp"
#include "csd/scattering.hpp"

namespace csd {

// Two broken lines with a common endpoint `base` whose final exponents sum to it. Lines
// balanced only in the limit carry their perturbation direction.
struct BalancedPair {
  BrokenLine line1, line2;
  RatPoint base;
  friend bool operator==(const BalancedPair&, const BalancedPair&) = default;
};

// Bookkeeping of the forward construction for one broken line. Index i counts bends from
// the endpoint: i = 0 is the final piece, i = s the initial one.
struct ConstructionTrace {
  std::vector<Int> rho;      // rho_i, i = 0..s
  std::vector<Int> C;        // velocity scales C_i
  std::vector<RatPoint> xt;  // support vertices x~_0..x~_s
  std::vector<LatticePoint> mt;  // segment exponents
  std::vector<Rat> times;    // t_i, with t_0 = 0
  Rat tau;                   // time at the start point m_s/a
  Int beta = 1;              // dilation used when the endpoint is not integral
};

// Bookkeeping of the reverse construction. Side 1 runs from the split piece back to the
// segment start, side 2 from the split piece to the segment end.
struct ReverseTrace {
  std::size_t split_index = 0;  // merged piece containing r~ (or ending there)
  Rat delta;                    // offset used when r~ sits on a bend
  std::vector<LatticePoint> mt1, mt2;  // segment exponents outward from r~
  std::vector<LatticePoint> m1, m2;    // broken line exponents outward from the base
  std::vector<Int> rho1, rho2;
  std::vector<Rat> t1, t2;      // bend times, index 0 holds the split piece's far end
  Rat T, tau;
  Int a, b;
  bool hypotheses_hold = true;  // the divisibility conditions on a and b
};

// Intersection of the segment [lam1*x, lam2*m] with the ray R>=0 * ray.
RatPoint ray_segment_intersection(const RatPoint& x, const Rat& lam1, const RatPoint& m, const Rat& lam2,
                                  const RatPoint& ray);

// Directions of the rays through each bend of g, endpoint side first; bends at the origin use
// the direction in which a perturbation moves them.
std::vector<RatPoint> bend_rays(const Diagram& d, const BrokenLine& g);

// Support vertices x~_0..x~_s followed by m_s/a.
std::vector<RatPoint> segment_support(const Diagram& d, const BrokenLine& g, const Int& a, const Int& b);

struct AttachResult {
  Segment segment;  // from m_s/a to x~_0
  ConstructionTrace trace;
};

AttachResult attach_monomials(const Diagram& d, const BrokenLine& g, const Int& a, const Int& b, const Int& lambda);

struct GlueResult {
  Segment segment;
  ConstructionTrace side1, side2;
  Rat split_time;  // time at which the segment passes base/(a+b)
};

GlueResult glue_balanced(const Diagram& d, const BalancedPair& pair, const Int& a, const Int& b);

struct ReverseResult {
  BalancedPair pair;
  ReverseTrace trace;
};

// a = b = 0 selects the minimal admissible pair.
ReverseResult pair_from_segment(const Diagram& d, const Segment& s, const Rat& tau, const Int& a = 0,
                                const Int& b = 0);

// Theta functions with a common endpoint, cached by initial exponent.
class ChamberThetas {
 public:
  ChamberThetas(const Diagram& d, RatPoint z, long K) : d_(d), z_(std::move(z)), K_(K) {}
  const LaurentPoly& get(const LatticePoint& m);
  const RatPoint& point() const { return z_; }

 private:
  const Diagram& d_;
  RatPoint z_;
  long K_;
  std::map<LatticePoint, LaurentPoly> cache_;
};

// Generic representative of each chamber in counterclockwise order, and the chamber whose
// closure contains x (the first one for the origin).
std::vector<RatPoint> chamber_points(const Diagram& d);
std::size_t chamber_of(const Diagram& d, const RatPoint& x);

struct StructureConstant {
  Rat value;
  bool certified = true;  // false when K is too small to see every contributing pair
};

StructureConstant structure_constant(const Diagram& d, const LatticePoint& p, const LatticePoint& q,
                                     const LatticePoint& r, long K);
// The same count with an explicit generic endpoint z near r.
StructureConstant structure_constant_at(const Diagram& d, const LatticePoint& p, const LatticePoint& q,
                                        const LatticePoint& r, const RatPoint& z, long K);

struct ProductTerm {
  LatticePoint r;
  Rat coeff;
  bool certified = true;
};

// All r with a nonzero structure constant visible at order K, sorted by r.
std::vector<ProductTerm> multiply(const Diagram& d, const LatticePoint& p, const LatticePoint& q, long K);

// multiply with theta functions cached per chamber across calls.
class ThetaProducts {
 public:
  ThetaProducts(const Diagram& d, long K);
  std::vector<ProductTerm> multiply(const LatticePoint& p, const LatticePoint& q);

 private:
  const LaurentPoly& theta_in(std::size_t chamber, const LatticePoint& m);

  const Diagram& d_;
  long K_;
  std::vector<LatticePoint> rays_;
  std::vector<int> attempt_;  // chamber point attempt in use per chamber
  std::vector<std::map<LatticePoint, LaurentPoly>> cache_;
};

// All balanced pairs with the given initial exponents, counted at a generic z near r.
std::vector<BalancedPair> balanced_pairs(const Diagram& d, const LatticePoint& p, const LatticePoint& q,
                                         const LatticePoint& r, long K);

}  // namespace csd
