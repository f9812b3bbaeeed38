#include "csd/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace csd {

namespace {

std::vector<std::string> split_coords(const std::string& s) {
  std::string body;
  for (char ch : s) {
    if (ch == '(' || ch == ')' || ch == '[' || ch == ']' || std::isspace(static_cast<unsigned char>(ch)))
      continue;
    body.push_back(ch);
  }
  std::vector<std::string> out;
  std::string cur;
  for (char ch : body) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

// Gaussian elimination on columns; returns coordinates of target when it is in the span.
std::optional<std::vector<Rat>> solve_in_span(const std::vector<LatticePoint>& cols,
                                              const LatticePoint& target) {
  std::size_t rows = target.rank();
  std::size_t k = cols.size();
  std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(k + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < k; ++j) a[r][j] = cols[j][r];
    a[r][k] = target[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t j = 0; j < k && row < rows; ++j) {
    std::size_t p = row;
    while (p < rows && a[p][j] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][j] == 0) continue;
      Rat f = a[r][j] / a[row][j];
      for (std::size_t c = j; c <= k; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_col.push_back(j);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r)
    if (a[r][k] != 0) return std::nullopt;
  std::vector<Rat> x(k);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = a[r][k] / a[r][pivot_col[r]];
  return x;
}

std::size_t matrix_rank(std::vector<std::vector<Rat>> a) {
  if (a.empty()) return 0;
  std::size_t rows = a.size(), cols = a[0].size(), rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      Rat f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rat parse_rat(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t.empty()) throw InputError("empty rational");
  auto valid_int = [](const std::string& u) {
    std::size_t i = (u.size() > 0 && (u[0] == '-' || u[0] == '+')) ? 1 : 0;
    if (i >= u.size()) return false;
    for (; i < u.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(u[i]))) return false;
    return true;
  };
  auto slash = t.find('/');
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den)) throw InputError("malformed rational: " + s);
  Int n(num), d(den);
  if (d == 0) throw InputError("zero denominator: " + s);
  Rat r(n, d);
  r.canonicalize();
  return r;
}

Rat rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

int sgn(const Rat& x) { return ::sgn(x); }
int sgn(const Int& x) { return ::sgn(x); }
Rat abs_rat(const Rat& x) { return sgn(x) < 0 ? Rat(-x) : x; }

Int floor_rat(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int ceil_rat(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int lcm_int(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int gcd_int(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

LatticePoint::LatticePoint(std::initializer_list<long> xs) {
  for (long x : xs) c.emplace_back(x);
}

bool LatticePoint::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Int& x) { return x == 0; });
}

LatticePoint LatticePoint::unit(std::size_t rank, std::size_t i) {
  LatticePoint e(rank);
  e[i] = 1;
  return e;
}

RatPoint::RatPoint(const LatticePoint& m) {
  c.reserve(m.rank());
  for (const auto& x : m.c) c.emplace_back(x);
}

bool RatPoint::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x == 0; });
}

bool RatPoint::is_integral() const {
  return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x.get_den() == 1; });
}

LatticePoint RatPoint::to_lattice() const {
  if (!is_integral()) throw Error("point is not integral: " + to_string(*this));
  LatticePoint m(rank());
  for (std::size_t i = 0; i < rank(); ++i) m[i] = c[i].get_num();
  return m;
}

namespace {
void check_rank(std::size_t a, std::size_t b) {
  if (a != b) throw InputError("dimension mismatch");
}
}  // namespace

bool operator==(const LatticePoint& a, const LatticePoint& b) { return a.c == b.c; }
bool operator!=(const LatticePoint& a, const LatticePoint& b) { return !(a == b); }
bool operator<(const LatticePoint& a, const LatticePoint& b) {
  if (a.rank() != b.rank()) return a.rank() < b.rank();
  for (std::size_t i = 0; i < a.rank(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
  check_rank(a.rank(), b.rank());
  LatticePoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = a[i] + b[i];
  return r;
}

LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
  check_rank(a.rank(), b.rank());
  LatticePoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = a[i] - b[i];
  return r;
}

LatticePoint operator-(const LatticePoint& a) {
  LatticePoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = -a[i];
  return r;
}

LatticePoint operator*(const Int& k, const LatticePoint& a) {
  LatticePoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = k * a[i];
  return r;
}

bool operator==(const RatPoint& a, const RatPoint& b) { return a.c == b.c; }
bool operator!=(const RatPoint& a, const RatPoint& b) { return !(a == b); }
bool operator<(const RatPoint& a, const RatPoint& b) {
  if (a.rank() != b.rank()) return a.rank() < b.rank();
  for (std::size_t i = 0; i < a.rank(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

RatPoint operator+(const RatPoint& a, const RatPoint& b) {
  check_rank(a.rank(), b.rank());
  RatPoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatPoint operator-(const RatPoint& a, const RatPoint& b) {
  check_rank(a.rank(), b.rank());
  RatPoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatPoint operator-(const RatPoint& a) {
  RatPoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = -a[i];
  return r;
}

RatPoint operator*(const Rat& k, const RatPoint& a) {
  RatPoint r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = k * a[i];
  return r;
}

Int content(const LatticePoint& m) {
  Int g = 0;
  for (const auto& x : m.c) g = gcd_int(g, x);
  return g;
}

LatticePoint primitive(const LatticePoint& m) {
  Int g = content(m);
  if (g == 0) throw Error("primitive of zero vector");
  LatticePoint r(m.rank());
  for (std::size_t i = 0; i < m.rank(); ++i) r[i] = m[i] / g;
  return r;
}

Int denominator_lcm(const RatPoint& x) {
  Int l = 1;
  for (const auto& v : x.c) l = lcm_int(l, v.get_den());
  return l;
}

LatticePoint primitive(const RatPoint& x) {
  Rat l(denominator_lcm(x));
  return primitive((l * x).to_lattice());
}

Rat dot(const RatPoint& a, const RatPoint& b) {
  check_rank(a.rank(), b.rank());
  Rat s = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) s += a[i] * b[i];
  return s;
}

Rat cross(const RatPoint& a, const RatPoint& b) {
  if (a.rank() != 2 || b.rank() != 2) throw InputError("cross product needs rank 2");
  return a[0] * b[1] - a[1] * b[0];
}

std::optional<Rat> ratio(const RatPoint& a, const RatPoint& b) {
  check_rank(a.rank(), b.rank());
  std::optional<Rat> k;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (b[i] == 0) {
      if (a[i] != 0) return std::nullopt;
      continue;
    }
    Rat q = a[i] / b[i];
    if (k && *k != q) return std::nullopt;
    k = q;
  }
  if (!k) return a.is_zero() ? std::optional<Rat>(Rat(0)) : std::nullopt;
  return k;
}

std::string to_string(const LatticePoint& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.rank(); ++i) {
    if (i) s += ",";
    s += m[i].get_str();
  }
  return s + ")";
}

std::string to_string(const RatPoint& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.rank(); ++i) {
    if (i) s += ",";
    s += to_string(x[i]);
  }
  return s + ")";
}

LatticePoint parse_lattice_point(const std::string& s) {
  auto parts = split_coords(s);
  if (parts.empty()) throw InputError("empty lattice point");
  LatticePoint m(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Rat r = parse_rat(parts[i]);
    if (r.get_den() != 1) throw InputError("non-integral lattice coordinate: " + s);
    m[i] = r.get_num();
  }
  return m;
}

RatPoint parse_rat_point(const std::string& s) {
  auto parts = split_coords(s);
  if (parts.empty()) throw InputError("empty point");
  RatPoint x(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) x[i] = parse_rat(parts[i]);
  return x;
}

Seed Seed::standard(std::size_t rank) {
  Seed s;
  for (std::size_t i = 0; i < rank; ++i) s.basis.push_back(LatticePoint::unit(rank, i));
  return s;
}

FixedData::FixedData(std::vector<std::vector<Rat>> skew, std::vector<Int> d, std::vector<int> unfrozen,
                     std::vector<LatticePoint> monoid_gens)
    : skew_(std::move(skew)), d_(std::move(d)), unfrozen_(std::move(unfrozen)) {
  std::size_t n = d_.size();
  if (n == 0) throw InputError("rank must be positive");
  if (skew_.size() != n) throw InputError("skew form has wrong size");
  for (const auto& row : skew_)
    if (row.size() != n) throw InputError("skew form has wrong size");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (skew_[i][j] != -skew_[j][i]) throw InputError("skew form is not antisymmetric");
  Int g = 0;
  for (const auto& x : d_) {
    if (x <= 0) throw InputError("multipliers d_i must be positive");
    g = gcd_int(g, x);
  }
  if (g != 1) throw InputError("gcd of multipliers must be 1");
  std::sort(unfrozen_.begin(), unfrozen_.end());
  unfrozen_.erase(std::unique(unfrozen_.begin(), unfrozen_.end()), unfrozen_.end());
  for (int i : unfrozen_)
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw InputError("unfrozen index out of range");
  // {N_uf, N°} and {N, N_uf ∩ N°} must be integral.
  for (int i : unfrozen_)
    for (std::size_t j = 0; j < n; ++j) {
      Rat a = skew_[i][j] * d_[j];
      Rat b = skew_[j][i] * d_[i];
      if (a.get_den() != 1 || b.get_den() != 1) throw InputError("skew form fails integrality");
    }
  if (monoid_gens.empty()) {
    for (int i : unfrozen_) gens_.push_back(p1_star(*this, LatticePoint::unit(n, i)));
  } else {
    gens_ = std::move(monoid_gens);
  }
  // Precompute a left inverse on a set of pivot coordinates.
  std::size_t k = gens_.size();
  for (const auto& g2 : gens_)
    if (g2.rank() != n) throw InputError("monoid generator has wrong rank");
  std::vector<std::size_t> rows;
  std::vector<std::vector<Rat>> chosen;
  for (std::size_t r = 0; r < n && rows.size() < k; ++r) {
    std::vector<Rat> v(k);
    for (std::size_t j = 0; j < k; ++j) v[j] = gens_[j][r];
    chosen.push_back(v);
    if (matrix_rank(chosen) == chosen.size()) {
      rows.push_back(r);
    } else {
      chosen.pop_back();
    }
  }
  if (rows.size() == k) {
    pivot_rows_ = rows;
    std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a[i][j] = gens_[j][rows[i]];
    // invert by solving against unit vectors
    pivot_inverse_.assign(k, std::vector<Rat>(k));
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<Rat> e(k);
      e[c] = 1;
      auto col = solve_square(a, e);
      for (std::size_t i = 0; i < k; ++i) pivot_inverse_[i][c] = col[i];
    }
  }
}

FixedData FixedData::from_exchange(const std::vector<std::vector<Int>>& eps, std::vector<Int> d,
                                   std::vector<int> unfrozen) {
  std::size_t n = d.size();
  if (eps.size() != n) throw InputError("exchange matrix has wrong size");
  std::vector<std::vector<Rat>> skew(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (eps[i].size() != n) throw InputError("exchange matrix has wrong size");
    for (std::size_t j = 0; j < n; ++j) {
      if (d[j] <= 0) throw InputError("multipliers d_i must be positive");
      skew[i][j] = Rat(eps[i][j], d[j]);
      skew[i][j].canonicalize();
    }
  }
  return FixedData(std::move(skew), std::move(d), std::move(unfrozen));
}

std::vector<std::vector<Int>> FixedData::exchange() const {
  std::size_t n = rank();
  std::vector<std::vector<Int>> e(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat v = skew_[i][j] * d_[j];
      e[i][j] = v.get_num() / v.get_den();
    }
  return e;
}

bool FixedData::is_unfrozen(std::size_t i) const {
  return std::binary_search(unfrozen_.begin(), unfrozen_.end(), static_cast<int>(i));
}

std::optional<std::vector<Rat>> FixedData::span_coords(const LatticePoint& m) const {
  if (m.rank() != rank()) throw InputError("dimension mismatch");
  std::size_t k = gens_.size();
  if (pivot_rows_.size() != k) throw InputError("monoid generators are not linearly independent");
  std::vector<Rat> a(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i] += pivot_inverse_[i][j] * m[pivot_rows_[j]];
  for (std::size_t r = 0; r < rank(); ++r) {
    Rat s = 0;
    for (std::size_t j = 0; j < k; ++j) s += a[j] * gens_[j][r];
    if (s != m[r]) return std::nullopt;
  }
  return a;
}

bool operator==(const FixedData& a, const FixedData& b) {
  return a.skew_matrix() == b.skew_matrix() && a.d() == b.d() && a.unfrozen() == b.unfrozen() &&
         a.monoid_gens() == b.monoid_gens();
}

Rat pairing(const FixedData& fd, const LatticePoint& n, const RatPoint& m) {
  if (n.rank() != fd.rank() || m.rank() != fd.rank()) throw InputError("dimension mismatch in pairing");
  Rat s = 0;
  for (std::size_t i = 0; i < fd.rank(); ++i) s += Rat(n[i]) * m[i] / fd.d(i);
  return s;
}

Rat pairing(const FixedData& fd, const LatticePoint& n, const LatticePoint& m) {
  if (n.rank() != fd.rank() || m.rank() != fd.rank()) throw InputError("dimension mismatch in pairing");
  Rat s = 0;
  for (std::size_t i = 0; i < fd.rank(); ++i) s += Rat(n[i] * m[i], fd.d(i));
  s.canonicalize();
  return s;
}

Rat skew_form(const FixedData& fd, const LatticePoint& n1, const LatticePoint& n2) {
  Rat s = 0;
  for (std::size_t i = 0; i < fd.rank(); ++i)
    for (std::size_t j = 0; j < fd.rank(); ++j)
      if (n1[i] != 0 && n2[j] != 0) s += Rat(n1[i] * n2[j]) * fd.skew(i, j);
  return s;
}

LatticePoint p1_star(const FixedData& fd, const LatticePoint& n) {
  if (n.rank() != fd.rank()) throw InputError("dimension mismatch in p1_star");
  for (std::size_t i = 0; i < n.rank(); ++i)
    if (n[i] != 0 && !fd.is_unfrozen(i)) throw InputError("p1_star: vector has frozen components");
  LatticePoint out(fd.rank());
  for (std::size_t i = 0; i < fd.rank(); ++i) {
    // coordinate i = {n, d_i e_i}
    Rat s = 0;
    for (std::size_t j = 0; j < fd.rank(); ++j)
      if (n[j] != 0) s += Rat(n[j]) * fd.skew(j, i);
    s *= fd.d(i);
    if (s.get_den() != 1) throw Error("p1_star produced a non-integral vector");
    out[i] = s.get_num();
  }
  return out;
}

LatticePoint n0_prime(const FixedData& fd, const LatticePoint& n) {
  LatticePoint p = primitive(n);
  Int k = 1;
  for (std::size_t i = 0; i < fd.rank(); ++i) {
    Int g = gcd_int(fd.d(i), p[i]);
    k = lcm_int(k, fd.d(i) / g);
  }
  return k * p;
}

std::pair<FixedData, Seed> with_principal_coefficients(const FixedData& fd, const Seed& s) {
  (void)s;
  std::size_t n = fd.rank();
  std::size_t N = 2 * n;
  std::vector<std::vector<Rat>> skew(N, std::vector<Rat>(N));
  // {(n1,m1),(n2,m2)} = {n1,n2} + <n1,m2> - <n2,m1>; second copy basis is f_i.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) skew[i][j] = fd.skew(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    skew[i][n + i] = Rat(1) / fd.d(i);
    skew[n + i][i] = -Rat(1) / fd.d(i);
  }
  std::vector<Int> d(N);
  for (std::size_t i = 0; i < n; ++i) d[i] = d[n + i] = fd.d(i);
  FixedData out(std::move(skew), std::move(d), fd.unfrozen());
  return {out, Seed::standard(N)};
}

std::optional<long> j_order(const FixedData& fd, const LatticePoint& m) {
  auto a = fd.span_coords(m);
  if (!a) return std::nullopt;
  Int total = 0;
  for (const auto& x : *a) {
    if (x.get_den() != 1 || x < 0) return std::nullopt;
    total += x.get_num();
  }
  return total.get_si();
}

std::vector<LatticePoint> monoid_elements(const FixedData& fd, long K) {
  const auto& gens = fd.monoid_gens();
  std::vector<LatticePoint> out;
  LatticePoint zero(fd.rank());
  std::function<void(std::size_t, long, const LatticePoint&)> rec;
  rec = [&](std::size_t i, long left, const LatticePoint& cur) {
    if (i == gens.size()) {
      out.push_back(cur);
      return;
    }
    LatticePoint p = cur;
    for (long k = 0; k <= left; ++k) {
      rec(i + 1, left - k, p);
      p = p + gens[i];
    }
  };
  if (K >= 0) rec(0, K, zero);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<LatticePoint> normal_for_exponent(const FixedData& fd, const LatticePoint& u) {
  std::vector<LatticePoint> cols;
  for (int i : fd.unfrozen()) cols.push_back(p1_star(fd, LatticePoint::unit(fd.rank(), i)));
  auto a = solve_in_span(cols, u);
  if (!a) return std::nullopt;
  RatPoint n(fd.rank());
  for (std::size_t j = 0; j < cols.size(); ++j) n[fd.unfrozen()[j]] = (*a)[j];
  if (n.is_zero()) return std::nullopt;
  for (const auto& x : n.c)
    if (x < 0) return std::nullopt;
  return primitive(n);
}

std::vector<Rat> solve_square(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw Error("singular linear system");
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rat f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rat> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace csd
