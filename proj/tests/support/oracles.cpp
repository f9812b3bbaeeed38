#include "oracles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace csd::oracle {

namespace {

using P2 = std::array<Rat, 2>;

P2 to_p2(const Exp& e) { return {Rat(e[0]), Rat(e[1])}; }

Rat raw_pairing(const Data& g, const Exp& n, const P2& m) {
  return Rat(n[0]) * m[0] / Rat(g.d[0]) + Rat(n[1]) * m[1] / Rat(g.d[1]);
}

Rat cross2(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }

bool on_wall(const WallData& w, const Data& g, const P2& x) {
  if (raw_pairing(g, w.normal, x) != 0) return false;
  if (w.line) return true;
  return x[0] * w.ray[0] + x[1] * w.ray[1] >= 0;
}

bool off_walls(const Data& g, const std::vector<WallData>& walls, const P2& x) {
  for (const auto& w : walls)
    if (on_wall(w, g, x)) return false;
  return true;
}

// A point near x in a chamber whose closure contains x.
P2 nudge(const Data& g, const std::vector<WallData>& walls, const P2& x) {
  if ((x[0] != 0 || x[1] != 0) && off_walls(g, walls, x)) return x;
  Rat scale = std::max<Rat>(abs(x[0]) + abs(x[1]), Rat(1));
  for (long k = 1; k < 50; ++k) {
    P2 y{x[0] + scale * Rat(7) / Rat(1000 * k), x[1] + scale * Rat(3) / Rat(1000 * k)};
    if (off_walls(g, walls, y)) return y;
  }
  throw std::runtime_error("oracle: no generic point found");
}

void add_term(Poly& p, const Exp& e, const Rat& c) {
  Rat& slot = p[e];
  slot += c;
  if (slot == 0) p.erase(e);
}

}  // namespace

Data a2() { return {{{{0, 1}, {-1, 0}}}, {1, 1}}; }
Data g2() { return {{{{0, 3}, {-1, 0}}}, {1, 3}}; }
Data kronecker() { return {{{{0, 2}, {-2, 0}}}, {1, 1}}; }

Rat pairing(const Data& g, const Exp& n, const P2& m) { return raw_pairing(g, n, m); }

Exp wall_exponent(const Data& g, const Exp& n) {
  return {n[0] * g.exchange[0][0] + n[1] * g.exchange[1][0], n[0] * g.exchange[0][1] + n[1] * g.exchange[1][1]};
}

Exp integral_normal(const Data& g, const Exp& n) {
  long c = std::gcd(std::labs(n[0]), std::labs(n[1]));
  Exp prim{n[0] / c, n[1] / c};
  for (long k = 1;; ++k)
    if ((k * prim[0]) % g.d[0] == 0 && (k * prim[1]) % g.d[1] == 0) return {k * prim[0], k * prim[1]};
}

std::optional<long> j_order(const Data& g, const Exp& m) {
  Exp u = wall_exponent(g, {1, 0}), v = wall_exponent(g, {0, 1});
  long det = u[0] * v[1] - u[1] * v[0];
  long a_num = m[0] * v[1] - m[1] * v[0];
  long b_num = u[0] * m[1] - u[1] * m[0];
  if (a_num % det != 0 || b_num % det != 0) return std::nullopt;
  long a = a_num / det, b = b_num / det;
  if (a < 0 || b < 0) return std::nullopt;
  return a + b;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) add_term(out, {ea[0] + eb[0], ea[1] + eb[1]}, ca * cb);
  return out;
}

std::vector<Rat> series_product(const std::vector<Rat>& a, const std::vector<Rat>& b, std::size_t n) {
  std::vector<Rat> out(n + 1, Rat(0));
  for (std::size_t i = 0; i < a.size() && i <= n; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= n; ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Rat> series_power(const std::vector<Rat>& c, long e, long n) {
  std::vector<Rat> f(n + 1, Rat(0));
  f[0] = 1;
  for (std::size_t k = 0; k < c.size() && static_cast<long>(k) + 1 <= n; ++k) f[k + 1] = c[k];
  std::vector<Rat> base = f;
  if (e < 0) {
    // Inverse by the recursion g_0 = 1, g_k = -sum_{i>=1} f_i g_{k-i}.
    std::vector<Rat> g(n + 1, Rat(0));
    g[0] = 1;
    for (long k = 1; k <= n; ++k)
      for (long i = 1; i <= k; ++i) g[k] -= f[i] * g[k - i];
    base = g;
    e = -e;
  }
  std::vector<Rat> out(n + 1, Rat(0));
  out[0] = 1;
  for (long i = 0; i < e; ++i) out = series_product(out, base, n);
  return out;
}

std::vector<WallData> walls_of(const Diagram& d) {
  std::vector<WallData> out;
  for (const auto& w : d.walls) {
    WallData o;
    o.normal = {w.normal[0].get_si(), w.normal[1].get_si()};
    o.dir = {w.func.dir[0].get_si(), w.func.dir[1].get_si()};
    o.coeffs = w.func.coeffs;
    o.line = w.line;
    if (!w.line) o.ray = {w.ray[0].get_si(), w.ray[1].get_si()};
    out.push_back(o);
  }
  return out;
}

Poly transport(const Data& g, const std::vector<WallData>& walls, const Poly& p, const P2& a, const P2& b,
               const Exp& reference, long K) {
  struct Event {
    Rat t;
    std::size_t wall;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const auto& w = walls[i];
    Rat sa = raw_pairing(g, w.normal, a), sb = raw_pairing(g, w.normal, b);
    if (!((sa < 0 && sb > 0) || (sa > 0 && sb < 0))) continue;
    Rat t = sa / (sa - sb);
    P2 x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    if (x[0] == 0 && x[1] == 0) throw std::runtime_error("oracle: path through the origin");
    if (!w.line && x[0] * w.ray[0] + x[1] * w.ray[1] < 0) continue;
    events.push_back({t, i});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.t < y.t; });
  P2 vel{b[0] - a[0], b[1] - a[1]};
  Poly cur = p;
  for (const auto& ev : events) {
    const auto& w = walls[ev.wall];
    int s = raw_pairing(g, w.normal, vel) < 0 ? 1 : -1;
    Exp np = integral_normal(g, w.normal);
    Poly next;
    for (const auto& [e, c] : cur) {
      Rat k = raw_pairing(g, np, to_p2(e));
      if (k.get_den() != 1) throw std::runtime_error("oracle: non-integral pairing");
      long pw = s * k.get_num().get_si();
      auto f = series_power(w.coeffs, pw, K);
      for (long j = 0; j <= K; ++j) {
        if (f[j] == 0) continue;
        Exp ne{e[0] + j * w.dir[0], e[1] + j * w.dir[1]};
        auto o = j_order(g, {ne[0] - reference[0], ne[1] - reference[1]});
        if (!o || *o > K) continue;
        add_term(next, ne, c * f[j]);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Poly theta(const Data& g, const std::vector<WallData>& walls, const Exp& m, const P2& q, long K) {
  if (m[0] == 0 && m[1] == 0) return {{Exp{0, 0}, Rat(1)}};
  P2 start = nudge(g, walls, to_p2(m));
  Poly p{{m, Rat(1)}};
  // Go around the origin when start and q are opposite.
  if (cross2(start, q) == 0 && start[0] * q[0] + start[1] * q[1] < 0) {
    P2 mid = nudge(g, walls, {-start[1], start[0]});
    p = transport(g, walls, p, start, mid, m, K);
    start = mid;
  }
  return transport(g, walls, p, start, q, m, K);
}

Rat structure_constant(const Data& g, const std::vector<WallData>& walls, const Exp& p, const Exp& q, const Exp& r,
                       long K) {
  P2 z = nudge(g, walls, to_p2(r));
  Poly prod = multiply(theta(g, walls, p, z, K), theta(g, walls, q, z, K));
  auto it = prod.find(r);
  return it == prod.end() ? Rat(0) : it->second;
}

P2 line_meet(const P2& a, const P2& b, const P2& dir) {
  // a + s (b - a) = l dir
  P2 ba{b[0] - a[0], b[1] - a[1]};
  Rat s = -cross2(a, dir) / cross2(ba, dir);
  return {a[0] + s * ba[0], a[1] + s * ba[1]};
}

Poly from_library(const LaurentPoly& p) {
  Poly out;
  for (const auto& [e, t] : p.terms)
    if (t.coeff != 0) out[{e[0].get_si(), e[1].get_si()}] = t.coeff;
  return out;
}

}  // namespace csd::oracle
