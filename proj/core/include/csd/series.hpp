#pragma once

#include <map>
#include <string>
#include <vector>

#include "csd/lattice.hpp"

namespace csd {

// Truncation level meaning "known exactly" (finite polynomial data).
constexpr long kExact = 1L << 40;

// f = 1 + sum_{k>=1} c_k z^{k*dir}; a term z^{k*dir} has J-adic order k*unit.
struct WallFunction {
  LatticePoint dir;
  long unit = 1;
  std::vector<Rat> coeffs;  // coeffs[k-1] = c_k
  long order = kExact;

  WallFunction() = default;
  WallFunction(LatticePoint d, long u, std::vector<Rat> c, long K = kExact);
  // 1 + z^{dir}
  static WallFunction binomial(LatticePoint d, long u);

  bool exact() const { return order >= kExact; }
  long kmax() const;  // largest k whose coefficient is known
  Rat coeff(long k) const;  // k = 0 gives 1; throws past kmax
  bool is_one() const;
  void trim();  // drop trailing zero coefficients of exact functions
};

bool operator==(const WallFunction& a, const WallFunction& b);

WallFunction wf_truncate(const WallFunction& f, long K);
WallFunction wf_mul(const WallFunction& a, const WallFunction& b, long K);
// Any rational exponent e (integral in practice); negative e needs a finite K.
WallFunction wf_pow(const WallFunction& f, const Rat& e, long K);

// Finite Laurent polynomial over M°. Every term remembers its J-adic order relative
// to the lowest-order reference exponent; terms above `order` are dropped.
struct LaurentPoly {
  struct Term {
    Rat coeff;
    long ord = 0;
  };
  std::map<LatticePoint, Term> terms;
  long order = kExact;

  static LaurentPoly monomial(const LatticePoint& m, long K, const Rat& c = 1);
  void add_term(const LatticePoint& e, const Rat& c, long ord);
  Rat coeff(const LatticePoint& e) const;
  bool empty() const { return terms.empty(); }
  std::string str() const;  // "z^(-1,1) + z^(-1,0)", highest exponent first
};

// Coefficient-wise equality (orders of truncation ignored).
bool operator==(const LaurentPoly& a, const LaurentPoly& b);
bool operator!=(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly truncate(const LaurentPoly& p, long K);

// z^m -> z^m f^{eps <n0', m>} with eps = -sign, where sign = sgn<n0, gamma'> is the
// direction in which the path crosses n0-perp.
LaurentPoly wall_cross(const FixedData& fd, const LaurentPoly& p, const WallFunction& f,
                       const LatticePoint& n0, int sign, long K);

}  // namespace csd
