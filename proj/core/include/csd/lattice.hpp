#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csd {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed or inconsistent user input.
struct InputError : Error {
  using Error::Error;
};
// An endpoint or trajectory meets Sing or a wall where genericity is required.
struct NonGenericError : Error {
  using Error::Error;
};
// A coefficient beyond the stored truncation order was needed.
struct TruncationError : Error {
  using Error::Error;
};

std::string to_string(const Int& x);
std::string to_string(const Rat& x);  // "num/den", or "num" when den = 1
Rat parse_rat(const std::string& s);
Rat rat(long num, long den = 1);
int sgn(const Rat& x);
int sgn(const Int& x);
Rat abs_rat(const Rat& x);
Int floor_rat(const Rat& x);
Int ceil_rat(const Rat& x);
Int lcm_int(const Int& a, const Int& b);
Int gcd_int(const Int& a, const Int& b);

struct LatticePoint {
  std::vector<Int> c;

  LatticePoint() = default;
  explicit LatticePoint(std::size_t rank) : c(rank) {}
  LatticePoint(std::initializer_list<long> xs);
  explicit LatticePoint(std::vector<Int> xs) : c(std::move(xs)) {}

  std::size_t rank() const { return c.size(); }
  const Int& operator[](std::size_t i) const { return c[i]; }
  Int& operator[](std::size_t i) { return c[i]; }
  bool is_zero() const;
  static LatticePoint unit(std::size_t rank, std::size_t i);
};

struct RatPoint {
  std::vector<Rat> c;

  RatPoint() = default;
  explicit RatPoint(std::size_t rank) : c(rank) {}
  RatPoint(std::initializer_list<Rat> xs) : c(xs) {}
  explicit RatPoint(std::vector<Rat> xs) : c(std::move(xs)) {}
  explicit RatPoint(const LatticePoint& m);

  std::size_t rank() const { return c.size(); }
  const Rat& operator[](std::size_t i) const { return c[i]; }
  Rat& operator[](std::size_t i) { return c[i]; }
  bool is_zero() const;
  bool is_integral() const;
  LatticePoint to_lattice() const;  // throws unless integral
};

bool operator==(const LatticePoint& a, const LatticePoint& b);
bool operator!=(const LatticePoint& a, const LatticePoint& b);
bool operator<(const LatticePoint& a, const LatticePoint& b);
LatticePoint operator+(const LatticePoint& a, const LatticePoint& b);
LatticePoint operator-(const LatticePoint& a, const LatticePoint& b);
LatticePoint operator-(const LatticePoint& a);
LatticePoint operator*(const Int& k, const LatticePoint& a);

bool operator==(const RatPoint& a, const RatPoint& b);
bool operator!=(const RatPoint& a, const RatPoint& b);
bool operator<(const RatPoint& a, const RatPoint& b);
RatPoint operator+(const RatPoint& a, const RatPoint& b);
RatPoint operator-(const RatPoint& a, const RatPoint& b);
RatPoint operator-(const RatPoint& a);
RatPoint operator*(const Rat& k, const RatPoint& a);

Int content(const LatticePoint& m);  // gcd of coordinates, 0 for the zero vector
LatticePoint primitive(const LatticePoint& m);
// Smallest positive integer multiple of a rational vector that is integral and primitive.
LatticePoint primitive(const RatPoint& x);
// Least common multiple of the coordinate denominators.
Int denominator_lcm(const RatPoint& x);

// Plain coordinate products, used only for rank-2 planar geometry in f-coordinates.
Rat dot(const RatPoint& a, const RatPoint& b);
Rat cross(const RatPoint& a, const RatPoint& b);
// If a = k*b for a scalar k, returns k; b must be nonzero.
std::optional<Rat> ratio(const RatPoint& a, const RatPoint& b);

std::string to_string(const LatticePoint& m);  // "(a,b)"
std::string to_string(const RatPoint& x);      // "(1/2,0)"
LatticePoint parse_lattice_point(const std::string& s);  // "1,-2" or "(1,-2)"
RatPoint parse_rat_point(const std::string& s);

struct Seed {
  std::vector<LatticePoint> basis;
  static Seed standard(std::size_t rank);
};

// Fixed data: lattice N with basis e_i, skew form {e_i,e_j}, multipliers d_i.
// M° carries the basis f_i = e_i^* / d_i; all M° coordinates refer to it.
class FixedData {
 public:
  FixedData() = default;
  FixedData(std::vector<std::vector<Rat>> skew, std::vector<Int> d, std::vector<int> unfrozen,
            std::vector<LatticePoint> monoid_gens = {});
  // Exchange matrix convention eps_ij = {e_i, e_j} * d_j.
  static FixedData from_exchange(const std::vector<std::vector<Int>>& eps, std::vector<Int> d,
                                 std::vector<int> unfrozen);

  std::size_t rank() const { return d_.size(); }
  const std::vector<int>& unfrozen() const { return unfrozen_; }
  const Rat& skew(std::size_t i, std::size_t j) const { return skew_[i][j]; }
  const std::vector<std::vector<Rat>>& skew_matrix() const { return skew_; }
  const Int& d(std::size_t i) const { return d_[i]; }
  const std::vector<Int>& d() const { return d_; }
  const std::vector<LatticePoint>& monoid_gens() const { return gens_; }
  std::vector<std::vector<Int>> exchange() const;
  bool is_unfrozen(std::size_t i) const;

  // Coordinates of m in the monoid generators, when m lies in their rational span.
  std::optional<std::vector<Rat>> span_coords(const LatticePoint& m) const;

 private:
  std::vector<std::vector<Rat>> skew_;
  std::vector<Int> d_;
  std::vector<int> unfrozen_;
  std::vector<LatticePoint> gens_;
  std::vector<std::size_t> pivot_rows_;
  std::vector<std::vector<Rat>> pivot_inverse_;
};

bool operator==(const FixedData& a, const FixedData& b);

Rat pairing(const FixedData& fd, const LatticePoint& n, const RatPoint& m);
Rat pairing(const FixedData& fd, const LatticePoint& n, const LatticePoint& m);
Rat skew_form(const FixedData& fd, const LatticePoint& n1, const LatticePoint& n2);
// {n, .} in f-coordinates. n must have no frozen components.
LatticePoint p1_star(const FixedData& fd, const LatticePoint& n);
// Primitive generator of R_{>=0} n intersected with N°.
LatticePoint n0_prime(const FixedData& fd, const LatticePoint& n);
// Rank doubles: N~ = N + M° with basis (e_i, 0), (0, f_i).
std::pair<FixedData, Seed> with_principal_coefficients(const FixedData& fd, const Seed& s);
// Sum of the monoid coordinates of m, or nullopt when m is not in P.
std::optional<long> j_order(const FixedData& fd, const LatticePoint& m);
// All p in P with j_order(p) <= K.
std::vector<LatticePoint> monoid_elements(const FixedData& fd, long K);
// Primitive n in N+ with p1*(n) a positive multiple of u; nullopt if none exists.
std::optional<LatticePoint> normal_for_exponent(const FixedData& fd, const LatticePoint& u);

// Exact solve of a square system; throws on singular input.
std::vector<Rat> solve_square(std::vector<std::vector<Rat>> a, std::vector<Rat> b);

}  // namespace csd
