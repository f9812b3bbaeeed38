#include "csd/convexity.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <set>

#include "csd/constructions.hpp"

namespace csd {

namespace {

void require_rank2(const Diagram& d, const char* what) {
  if (d.fd.rank() != 2) throw InputError(std::string(what) + ": rank 2 only");
}

Rat orient(const RatPoint& a, const RatPoint& b, const RatPoint& c) { return cross(b - a, c - a); }

bool on_segment(const RatPoint& a, const RatPoint& b, const RatPoint& x) {
  if (orient(a, b, x) != 0) return false;
  return dot(x - a, x - b) <= 0;
}

Rat signed_area2(const std::vector<RatPoint>& poly) {
  Rat s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
  return s;
}

// Inserts the points where the closed boundary (or open path) crosses nu.y = 0.
struct Vertex {
  RatPoint x;
  Rat t;  // parameter along an open path, unused for closed boundaries
};

std::vector<Vertex> split_at(const std::vector<Vertex>& path, const RatPoint& nu, bool closed) {
  std::vector<Vertex> out;
  std::size_t n = path.size();
  std::size_t edges = closed ? n : (n == 0 ? 0 : n - 1);
  if (!closed && n > 0) out.push_back(path[0]);
  for (std::size_t i = 0; i < edges; ++i) {
    const Vertex& a = path[i];
    const Vertex& b = path[(i + 1) % n];
    if (closed) out.push_back(a);
    Rat sa = dot(nu, a.x), sb = dot(nu, b.x);
    if ((sa < 0 && sb > 0) || (sa > 0 && sb < 0)) {
      Rat u = sa / (sa - sb);
      out.push_back({a.x + u * (b.x - a.x), a.t + u * (b.t - a.t)});
    }
    if (!closed) out.push_back(b);
  }
  if (closed && edges == 0 && n == 1) out.push_back(path[0]);
  return out;
}

std::vector<Vertex> as_vertices(const std::vector<RatPoint>& pts) {
  std::vector<Vertex> out;
  for (const auto& p : pts) out.push_back({p, 0});
  return out;
}

std::vector<RatPoint> points_of(const std::vector<Vertex>& vs) {
  std::vector<RatPoint> out;
  for (const auto& v : vs) out.push_back(v.x);
  return out;
}

RatPoint primitive_dir(const RatPoint& x) { return RatPoint(primitive(x)); }

// Highest power with a nonzero stored coefficient; for truncated functions this is the degree
// visible at the stored order.
long wall_degree(const WallFunction& f) {
  for (long k = static_cast<long>(f.coeffs.size()); k > 0; --k)
    if (f.coeffs[k - 1] != 0) return k;
  return 0;
}

Chart initial_chart(const Diagram& d) {
  Chart c;
  for (const auto& w : d.walls) {
    RatPoint dir(w.func.dir);
    long deg = wall_degree(w.func);
    if (w.line) {
      LatticePoint u = perp_direction(d.fd, w.normal);
      c.walls.push_back({u, RatPoint(u), dir, deg, true});
      c.walls.push_back({-u, RatPoint(-u), dir, deg, true});
    } else {
      c.walls.push_back({w.ray, RatPoint(w.ray), dir, deg, false});
    }
  }
  return c;
}

Chart mutate(const Chart& c, std::size_t at) {
  const ChartWall& w = c.walls[at];
  Shear sh;
  sh.nu = RatPoint{-w.ray[1], w.ray[0]};
  sh.nu = RatPoint(primitive(sh.nu));
  sh.shift = Rat(w.degree) * w.dir;
  Chart out;
  out.maps = c.maps;
  out.maps.push_back(sh);
  out.path = c.path;
  out.path.push_back(at);
  for (const auto& v : c.walls) {
    ChartWall nv = v;
    Rat s = dot(sh.nu, v.ray);
    if (s == 0 && cross(v.dir, sh.shift) == 0) {
      nv.dir = -v.dir;
    } else if (s > 0) {
      nv.ray = primitive_dir(v.ray + s * sh.shift);
      nv.dir = v.dir + dot(sh.nu, v.dir) * sh.shift;
    }
    out.walls.push_back(nv);
  }
  return out;
}

bool has_opposite_half(const Chart& c, const ChartWall& w) {
  for (const auto& v : c.walls)
    if (v.ray == -w.ray && v.dir == w.dir) return true;
  return false;
}

std::vector<LatticePoint> chart_key(const Chart& c) {
  std::vector<LatticePoint> key;
  for (const auto& w : c.walls)
    if (w.incoming()) key.push_back(w.origin_ray);
  std::sort(key.begin(), key.end());
  return key;
}

std::vector<RatPoint> canonical_polygon(std::vector<RatPoint> pts) {
  // Drop repeated consecutive points.
  std::vector<RatPoint> out;
  for (const auto& p : pts)
    if (out.empty() || out.back() != p) out.push_back(p);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

}  // namespace

bool operator==(const RationalPointSet& a, const RationalPointSet& b) {
  return a.kind == b.kind && a.points == b.points;
}

std::vector<RatPoint> convex_hull(std::vector<RatPoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return pts;
  // Andrew's monotone chain, counterclockwise.
  std::vector<RatPoint> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() <= 2) return {pts.front(), pts.back()};
  auto lowest = std::min_element(h.begin(), h.end(), [](const RatPoint& a, const RatPoint& b) {
    return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
  });
  std::rotate(h.begin(), lowest, h.end());
  return h;
}

bool polygon_contains(const std::vector<RatPoint>& poly, const RatPoint& x) {
  std::size_t n = poly.size();
  if (n == 0) return false;
  if (n == 1) return poly[0] == x;
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(poly[i], poly[(i + 1) % n], x)) return true;
  if (n == 2) return false;
  // Winding number with exact half-open crossing rules.
  int wn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const RatPoint& a = poly[i];
    const RatPoint& b = poly[(i + 1) % n];
    if (a[1] <= x[1]) {
      if (b[1] > x[1] && orient(a, b, x) > 0) ++wn;
    } else if (b[1] <= x[1] && orient(a, b, x) < 0) {
      --wn;
    }
  }
  return wn != 0;
}

std::vector<LatticePoint> lattice_points(const std::vector<RatPoint>& poly, const Int& scale) {
  std::vector<LatticePoint> out;
  if (poly.empty()) return out;
  std::vector<RatPoint> sp;
  for (const auto& p : poly) sp.push_back(Rat(scale) * p);
  Rat lo0 = sp[0][0], hi0 = sp[0][0], lo1 = sp[0][1], hi1 = sp[0][1];
  for (const auto& p : sp) {
    lo0 = std::min<Rat>(lo0, p[0]);
    hi0 = std::max<Rat>(hi0, p[0]);
    lo1 = std::min<Rat>(lo1, p[1]);
    hi1 = std::max<Rat>(hi1, p[1]);
  }
  for (Int x = ceil_rat(lo0); x <= floor_rat(hi0); ++x)
    for (Int y = ceil_rat(lo1); y <= floor_rat(hi1); ++y) {
      RatPoint pt{Rat(x), Rat(y)};
      if (polygon_contains(sp, pt)) out.push_back(LatticePoint(std::vector<Int>{x, y}));
    }
  return out;
}

bool is_convex_polygon(const std::vector<RatPoint>& poly) {
  std::size_t n = poly.size();
  if (n < 3) return true;
  for (std::size_t i = 0; i < n; ++i) {
    const RatPoint& a = poly[(i + n - 1) % n];
    const RatPoint& b = poly[i];
    const RatPoint& c = poly[(i + 1) % n];
    if (orient(a, b, c) < 0) return false;
  }
  return true;
}

bool contains_set(const RationalPointSet& s, const RatPoint& x) {
  if (s.kind == SetKind::Finite) return std::find(s.points.begin(), s.points.end(), x) != s.points.end();
  return polygon_contains(s.points, x);
}

RatPoint Shear::apply(const RatPoint& y) const {
  Rat s = dot(nu, y);
  return s > 0 ? y + s * shift : y;
}

RatPoint Shear::unapply(const RatPoint& y) const {
  Rat s = dot(nu, y);
  return s > 0 ? y - s * shift : y;
}

bool ChartWall::incoming() const {
  auto r = ratio(dir, ray);
  return r && *r > 0;
}

RatPoint Chart::to_chart(const RatPoint& x) const {
  RatPoint y = x;
  for (const auto& m : maps) y = m.apply(y);
  return y;
}

RatPoint Chart::from_chart(const RatPoint& y) const {
  RatPoint x = y;
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) x = it->unapply(x);
  return x;
}

std::vector<RatPoint> Chart::polygon_to_chart(const std::vector<RatPoint>& poly) const {
  auto vs = as_vertices(poly);
  for (const auto& m : maps) {
    vs = split_at(vs, m.nu, true);
    for (auto& v : vs) v.x = m.apply(v.x);
  }
  return points_of(vs);
}

std::vector<RatPoint> Chart::polygon_from_chart(const std::vector<RatPoint>& poly) const {
  auto vs = as_vertices(poly);
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    vs = split_at(vs, it->nu, true);
    for (auto& v : vs) v.x = it->unapply(v.x);
  }
  return points_of(vs);
}

std::vector<RatPoint> Chart::straight_preimage(const RatPoint& a, const RatPoint& b) const {
  std::vector<Vertex> vs{{to_chart(a), 0}, {to_chart(b), 1}};
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    vs = split_at(vs, it->nu, false);
    for (auto& v : vs) v.x = it->unapply(v.x);
  }
  return points_of(vs);
}

std::size_t default_depth_bound() {
  if (const char* env = std::getenv("CSD_DEPTH_BOUND")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 16;
}

ChartSet seed_charts(const Diagram& d, std::size_t depth_bound, bool incoming_only) {
  require_rank2(d, "seed_charts");
  ChartSet out;
  out.depth_bound = depth_bound;
  out.closed = true;
  std::set<std::vector<LatticePoint>> seen;
  std::vector<std::pair<Chart, std::size_t>> queue;
  Chart c0 = initial_chart(d);
  seen.insert(chart_key(c0));
  queue.emplace_back(c0, 0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Chart c = queue[head].first;
    std::size_t depth = queue[head].second;
    out.charts.push_back(c);
    // A seed chart has one full incoming line per index; fewer means the truncated diagram
    // does not show the next seed.
    std::size_t lines = 0;
    for (std::size_t i = 0; i < c.walls.size(); ++i) {
      const ChartWall& w = c.walls[i];
      if (!w.incoming() || w.degree <= 0 || !has_opposite_half(c, w)) continue;
      ++lines;
      if (incoming_only && !w.initial) continue;
      Chart next = mutate(c, i);
      auto key = chart_key(next);
      if (seen.count(key)) continue;
      if (depth + 1 > depth_bound) {
        out.closed = false;
        continue;
      }
      seen.insert(key);
      queue.emplace_back(std::move(next), depth + 1);
    }
    if (lines < d.fd.rank()) out.closed = false;
  }
  return out;
}

std::optional<Segment> chart_segment(const Diagram& d, const Chart& c, const RatPoint& a, const RatPoint& b) {
  if (a == b) return std::nullopt;
  std::vector<Vertex> vs{{c.to_chart(a), 0}, {c.to_chart(b), 1}};
  for (auto it = c.maps.rbegin(); it != c.maps.rend(); ++it) {
    vs = split_at(vs, it->nu, false);
    for (auto& v : vs) v.x = it->unapply(v.x);
  }
  std::vector<RatPoint> vel;
  std::vector<Rat> dt;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    Rat step = vs[i + 1].t - vs[i].t;
    if (step == 0) continue;
    vel.push_back(Rat(1) / step * (vs[i + 1].x - vs[i].x));
    dt.push_back(step);
  }
  Int lam = 1;
  for (const auto& v : vel) lam = lcm_int(lam, denominator_lcm(v));
  Segment s;
  s.start = a;
  s.end = b;
  s.total_time = Rat(1) / Rat(lam);
  for (std::size_t i = 0; i < vel.size(); ++i) {
    LatticePoint m = (-(Rat(lam) * vel[i])).to_lattice();
    if (!s.pieces.empty() && s.pieces.back().exponent == m) {
      s.pieces.back().duration += dt[i] / Rat(lam);
      continue;
    }
    s.pieces.push_back({m, 1, dt[i] / Rat(lam)});
  }
  auto rep = validate_segment(d, s);
  if (!rep.ok) return std::nullopt;
  return decorate(d, s);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::False:
      return "false";
    case Verdict::True:
      return "true";
    default:
      return "unknown";
  }
}

namespace {

// A broken line segment with endpoints in S that leaves S, found near a reflex vertex of the
// chart image.
std::optional<Segment> reflex_witness(const Diagram& d, const Chart& c, const RationalPointSet& S,
                                      const std::vector<RatPoint>& img, std::size_t i) {
  std::size_t n = img.size();
  RatPoint v = img[i], pre = img[(i + n - 1) % n], post = img[(i + 1) % n];
  for (int round = 0; round < 24; ++round) {
    RatPoint mid = Rat(1, 2) * (pre + post);
    if (!contains_set(S, c.from_chart(mid))) {
      auto seg = chart_segment(d, c, c.from_chart(pre), c.from_chart(post));
      if (seg) return seg;
    }
    pre = Rat(1, 2) * (pre + v);
    post = Rat(1, 2) * (post + v);
  }
  return std::nullopt;
}

bool leaves(const RationalPointSet& S, const Segment& s) {
  auto verts = s.vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (!contains_set(S, verts[i])) return true;
    if (i + 1 < verts.size() && !contains_set(S, Rat(1, 2) * (verts[i] + verts[i + 1]))) return true;
  }
  return false;
}

std::vector<RatPoint> oriented(std::vector<RatPoint> poly) {
  poly = canonical_polygon(std::move(poly));
  if (poly.size() >= 3 && signed_area2(poly) < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

}  // namespace

CheckReport is_blc_2d(const Diagram& d, const RationalPointSet& S, long K, const BlcOptions& opt) {
  require_rank2(d, "is_blc_2d");
  CheckReport rep;
  rep.order_checked = K;
  if (S.points.empty()) throw InputError("is_blc_2d: empty point set");
  ChartSet charts = seed_charts(d, opt.depth_bound ? opt.depth_bound : default_depth_bound(), opt.incoming_only);
  rep.charts_checked = charts.charts.size();
  if (S.kind == SetKind::Finite) {
    std::set<RatPoint> distinct(S.points.begin(), S.points.end());
    if (distinct.size() <= 1) return rep;
    rep.verdict = Verdict::False;
    auto it = distinct.begin();
    RatPoint a = *it++;
    if (auto seg = chart_segment(d, charts.charts.front(), a, *it)) rep.segment_witnesses.push_back(*seg);
    return rep;
  }
  std::vector<RatPoint> poly = oriented(S.points);
  RationalPointSet So{SetKind::Polygon, poly};
  for (const auto& c : charts.charts) {
    auto img = c.polygon_to_chart(poly);
    std::size_t n = img.size();
    if (n < 3) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (orient(img[(i + n - 1) % n], img[i], img[(i + 1) % n]) >= 0) continue;
      rep.verdict = Verdict::False;
      if (auto seg = reflex_witness(d, c, So, img, i)) {
        rep.segment_witnesses.push_back(*seg);
      } else {
        rep.notes.push_back("reflex chart vertex without a validated witness segment");
      }
      break;
    }
    if (rep.verdict == Verdict::False) return rep;
  }
  // Spot checks: pull back chart-straight segments between random boundary points.
  std::mt19937_64 rng(opt.seed);
  auto boundary_point = [&]() {
    std::size_t n = poly.size();
    std::size_t i = rng() % n;
    Rat u(static_cast<long>(rng() % 7), 7);
    return poly[i] + u * (poly[(i + 1) % n] - poly[i]);
  };
  for (std::size_t k = 0; k < opt.spot_pairs && poly.size() >= 2; ++k) {
    RatPoint a = boundary_point(), b = boundary_point();
    if (a == b) continue;
    for (const auto& c : charts.charts) {
      std::optional<Segment> seg;
      try {
        seg = chart_segment(d, c, a, b);
      } catch (const Error&) {
        continue;
      }
      if (!seg) continue;
      if (leaves(So, *seg)) {
        rep.verdict = Verdict::False;
        rep.segment_witnesses.push_back(*seg);
        rep.notes.push_back("spot check found a segment leaving the set");
        return rep;
      }
    }
  }
  if (!charts.closed) {
    rep.verdict = Verdict::Unknown;
    rep.notes.push_back("seed charts did not close within the depth bound");
  }
  return rep;
}

HullResult blc_hull_2d(const Diagram& d, const std::vector<RatPoint>& pts, std::size_t depth_bound) {
  require_rank2(d, "blc_hull_2d");
  if (pts.empty()) throw InputError("blc_hull_2d: empty point set");
  ChartSet charts = seed_charts(d, depth_bound ? depth_bound : default_depth_bound());
  HullResult out;
  out.exact = charts.closed;
  std::vector<RatPoint> cur = convex_hull(pts);
  constexpr std::size_t kMaxRounds = 64;
  bool stable = false;
  while (out.rounds < kMaxRounds) {
    ++out.rounds;
    std::vector<RatPoint> all = cur;
    for (const auto& c : charts.charts) {
      auto img = convex_hull(c.polygon_to_chart(cur));
      for (const auto& p : c.polygon_from_chart(img)) all.push_back(p);
    }
    auto next = convex_hull(all);
    if (next == cur) {
      stable = true;
      break;
    }
    cur = std::move(next);
  }
  if (!stable) out.exact = false;
  out.hull = {SetKind::Polygon, cur};
  return out;
}

CheckReport check_positive(const Diagram& d, const RationalPointSet& S, long max_degree, long K) {
  require_rank2(d, "check_positive");
  if (S.points.empty()) throw InputError("check_positive: empty point set");
  if (max_degree < 2) throw InputError("check_positive: max_degree must be at least 2");
  CheckReport rep;
  rep.bounded = true;
  rep.order_checked = K;
  std::vector<RatPoint> poly = S.kind == SetKind::Polygon ? oriented(S.points) : S.points;
  RationalPointSet So{S.kind, poly};
  auto points_at = [&](long a) {
    if (S.kind == SetKind::Polygon) return lattice_points(poly, a);
    std::set<LatticePoint> pts;
    for (const auto& p : poly) {
      RatPoint x = Rat(a) * p;
      if (x.is_integral()) pts.insert(x.to_lattice());
    }
    return std::vector<LatticePoint>(pts.begin(), pts.end());
  };
  ThetaProducts prods(d, K);
  std::map<long, std::vector<LatticePoint>> dil;
  for (long total = 2; total <= max_degree; ++total) {
    for (long a = 1; a <= total / 2; ++a) {
      long b = total - a;
      if (!dil.count(a)) dil[a] = points_at(a);
      if (!dil.count(b)) dil[b] = points_at(b);
      for (const auto& p : dil[a])
        for (const auto& q : dil[b]) {
          if (a == b && q < p) continue;
          for (const auto& t : prods.multiply(p, q)) {
            RatPoint rs = Rat(1, total) * RatPoint(t.r);
            if (contains_set(So, rs)) continue;
            rep.verdict = Verdict::False;
            rep.positivity_witnesses.push_back({p, q, t.r, a, b, t.coeff});
          }
        }
    }
    rep.degree_checked = total;
    if (rep.verdict == Verdict::False) {
      rep.bounded = false;
      break;
    }
  }
  return rep;
}

HarnessReport main_theorem_harness(const Diagram& d, std::size_t trials, long max_degree, long K,
                                   std::uint64_t seed) {
  require_rank2(d, "main_theorem_harness");
  HarnessReport rep;
  std::mt19937_64 rng(seed);
  auto coord = [&]() { return Rat(static_cast<long>(rng() % 5) - 2); };
  for (std::size_t k = 0; k < trials; ++k) {
    std::vector<RatPoint> pts;
    std::vector<RatPoint> hull;
    while (hull.size() < 3) {
      pts.clear();
      std::size_t count = 3 + rng() % 2;
      for (std::size_t i = 0; i < count; ++i) pts.push_back(RatPoint{coord(), coord()});
      hull = convex_hull(pts);
    }
    HarnessTrial tr;
    switch (k % 3) {
      case 0:
        tr.origin = "convex hull";
        tr.polygon = {SetKind::Polygon, hull};
        break;
      case 1:
        tr.origin = "broken line convex hull";
        tr.polygon = blc_hull_2d(d, pts).hull;
        break;
      default: {
        tr.origin = "dilated broken line convex hull";
        auto h = blc_hull_2d(d, pts).hull;
        for (auto& p : h.points) p = Rat(3, 2) * p;
        tr.polygon = h;
        break;
      }
    }
    tr.convexity = is_blc_2d(d, tr.polygon, K);
    tr.positivity = check_positive(d, tr.polygon, max_degree, K);
    tr.convex = tr.convexity.verdict;
    tr.positive = tr.positivity.verdict;
    if (tr.convex == Verdict::Unknown) {
      ++rep.undecided;
    } else if (tr.convex == tr.positive) {
      ++rep.agreements;
    } else {
      ++rep.disagreements;
    }
    rep.trials.push_back(std::move(tr));
  }
  return rep;
}

}  // namespace csd
