#include "csd/series.hpp"

#include <algorithm>

namespace csd {

WallFunction::WallFunction(LatticePoint d, long u, std::vector<Rat> c, long K)
    : dir(std::move(d)), unit(u), coeffs(std::move(c)), order(K) {
  if (unit <= 0) throw InputError("wall function unit order must be positive");
  if (!exact() && static_cast<long>(coeffs.size()) > order / unit) coeffs.resize(order / unit);
  if (!exact() && static_cast<long>(coeffs.size()) < order / unit) coeffs.resize(order / unit);
  if (exact()) trim();
}

WallFunction WallFunction::binomial(LatticePoint d, long u) {
  return WallFunction(std::move(d), u, {Rat(1)}, kExact);
}

long WallFunction::kmax() const {
  if (exact()) return kExact;
  return order / unit;
}

Rat WallFunction::coeff(long k) const {
  if (k == 0) return 1;
  if (k < 0) return 0;
  if (k > kmax()) throw TruncationError("wall function coefficient beyond truncation order");
  if (k > static_cast<long>(coeffs.size())) return 0;
  return coeffs[k - 1];
}

bool WallFunction::is_one() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rat& c) { return c == 0; });
}

void WallFunction::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

bool operator==(const WallFunction& a, const WallFunction& b) {
  if (a.dir != b.dir || a.unit != b.unit || a.exact() != b.exact()) return false;
  if (!a.exact() && a.order != b.order) return false;
  std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  for (std::size_t k = 1; k <= n; ++k) {
    Rat x = k <= a.coeffs.size() ? a.coeffs[k - 1] : Rat(0);
    Rat y = k <= b.coeffs.size() ? b.coeffs[k - 1] : Rat(0);
    if (x != y) return false;
  }
  return true;
}

WallFunction wf_truncate(const WallFunction& f, long K) {
  if (K >= kExact) return f;
  long order = std::min(K, f.order);
  WallFunction g = f;
  g.order = order;
  g.coeffs.resize(order / f.unit);
  return g;
}

WallFunction wf_mul(const WallFunction& a, const WallFunction& b, long K) {
  if (a.dir != b.dir || a.unit != b.unit) throw InputError("wf_mul: direction mismatch");
  long order = std::min({K, a.order, b.order});
  long len;
  if (order >= kExact) {
    len = static_cast<long>(a.coeffs.size() + b.coeffs.size());
  } else {
    len = order / a.unit;
  }
  std::vector<Rat> c(len);
  for (long k = 1; k <= len; ++k) {
    Rat s = 0;
    for (long i = 0; i <= k; ++i) {
      long j = k - i;
      Rat ai = i == 0 ? Rat(1) : (i <= static_cast<long>(a.coeffs.size()) ? a.coeffs[i - 1] : Rat(0));
      if (ai == 0) continue;
      Rat bj = j == 0 ? Rat(1) : (j <= static_cast<long>(b.coeffs.size()) ? b.coeffs[j - 1] : Rat(0));
      s += ai * bj;
    }
    c[k - 1] = s;
  }
  return WallFunction(a.dir, a.unit, std::move(c), order);
}

WallFunction wf_pow(const WallFunction& f, const Rat& e, long K) {
  long order = std::min(K, f.order);
  bool nonneg_int = e.get_den() == 1 && e >= 0;
  long len;
  if (order >= kExact) {
    if (!nonneg_int) throw TruncationError("wf_pow: negative or fractional power needs a finite order");
    len = static_cast<long>(f.coeffs.size()) * e.get_num().get_si();
  } else {
    len = order / f.unit;
  }
  // g = f^e with g_0 = 1 and n g_n = sum_{k=1}^{n} ((e+1)k - n) f_k g_{n-k}.
  std::vector<Rat> g(len + 1);
  g[0] = 1;
  long flen = static_cast<long>(f.coeffs.size());
  for (long n = 1; n <= len; ++n) {
    Rat s = 0;
    for (long k = 1; k <= std::min(n, flen); ++k) {
      const Rat& fk = f.coeffs[k - 1];
      if (fk == 0) continue;
      s += ((e + 1) * k - n) * fk * g[n - k];
    }
    g[n] = s / n;
  }
  g.erase(g.begin());
  return WallFunction(f.dir, f.unit, std::move(g), order);
}

LaurentPoly LaurentPoly::monomial(const LatticePoint& m, long K, const Rat& c) {
  LaurentPoly p;
  p.order = K;
  p.add_term(m, c, 0);
  return p;
}

void LaurentPoly::add_term(const LatticePoint& e, const Rat& c, long ord) {
  if (ord > order || c == 0) return;
  auto it = terms.find(e);
  if (it == terms.end()) {
    terms.emplace(e, Term{c, ord});
    return;
  }
  if (it->second.ord != ord) throw Error("inconsistent term orders in Laurent polynomial");
  it->second.coeff += c;
  if (it->second.coeff == 0) terms.erase(it);
}

Rat LaurentPoly::coeff(const LatticePoint& e) const {
  auto it = terms.find(e);
  return it == terms.end() ? Rat(0) : it->second.coeff;
}

std::string LaurentPoly::str() const {
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const Rat& c = it->second.coeff;
    std::string mono = it->first.is_zero() ? "" : "z^" + to_string(it->first);
    Rat mag = abs_rat(c);
    std::string cs;
    if (mono.empty()) {
      cs = to_string(mag);
    } else if (mag != 1) {
      cs = to_string(mag) + "*";
    }
    if (first) {
      s += (c < 0 ? "-" : "") + cs + mono;
    } else {
      s += (c < 0 ? " - " : " + ") + cs + mono;
    }
    first = false;
  }
  return s;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.terms.size() != b.terms.size()) return false;
  auto i = a.terms.begin();
  auto j = b.terms.begin();
  for (; i != a.terms.end(); ++i, ++j)
    if (i->first != j->first || i->second.coeff != j->second.coeff) return false;
  return true;
}

bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  r.order = std::min(a.order, b.order);
  for (const auto& [e, t] : a.terms) r.add_term(e, t.coeff, t.ord);
  for (const auto& [e, t] : b.terms) r.add_term(e, t.coeff, t.ord);
  return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  r.order = std::min(a.order, b.order);
  for (const auto& [e, t] : a.terms) r.add_term(e, t.coeff, t.ord);
  for (const auto& [e, t] : b.terms) r.add_term(e, -t.coeff, t.ord);
  return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  r.order = std::min(a.order, b.order);
  for (const auto& [ea, ta] : a.terms)
    for (const auto& [eb, tb] : b.terms) r.add_term(ea + eb, ta.coeff * tb.coeff, ta.ord + tb.ord);
  return r;
}

LaurentPoly truncate(const LaurentPoly& p, long K) {
  LaurentPoly r;
  r.order = std::min(p.order, K);
  for (const auto& [e, t] : p.terms) r.add_term(e, t.coeff, t.ord);
  return r;
}

LaurentPoly wall_cross(const FixedData& fd, const LaurentPoly& p, const WallFunction& f,
                       const LatticePoint& n0, int sign, long K) {
  if (n0.is_zero()) throw InputError("wall_cross: zero normal");
  if (sign != 1 && sign != -1) throw InputError("wall_cross: sign must be +1 or -1");
  LatticePoint np = n0_prime(fd, n0);
  LaurentPoly r;
  r.order = std::min(p.order, K);
  std::map<Rat, WallFunction> powers;
  for (const auto& [e, t] : p.terms) {
    Rat pw = -sign * pairing(fd, np, e);
    if (pw == 0) {
      r.add_term(e, t.coeff, t.ord);
      continue;
    }
    long budget = r.order - t.ord;
    if (budget < 0) continue;
    auto it = powers.find(pw);
    if (it == powers.end()) it = powers.emplace(pw, wf_pow(f, pw, r.order)).first;
    const WallFunction& g = it->second;
    r.add_term(e, t.coeff, t.ord);
    long kmax = std::min<long>(static_cast<long>(g.coeffs.size()), budget / f.unit);
    if (!g.exact() && budget / f.unit > g.kmax())
      throw TruncationError("wall_cross: wall function truncated below requested order");
    for (long k = 1; k <= kmax; ++k) {
      const Rat& c = g.coeffs[k - 1];
      if (c == 0) continue;
      r.add_term(e + Int(k) * f.dir, t.coeff * c, t.ord + k * f.unit);
    }
  }
  return r;
}

}  // namespace csd
