#include "csd/brokenline.hpp"

#include <algorithm>
#include <map>

namespace csd {

namespace {

struct HitGroup {
  Rat s;
  RatPoint y;
  LatticePoint normal;
  std::vector<const Wall*> walls;
};

// Smallest J-adic order at which a wall can bend a line, or nullopt if it is trivial.
std::optional<long> first_bend_order(const Wall& w) {
  for (std::size_t k = 0; k < w.func.coeffs.size(); ++k)
    if (w.func.coeffs[k] != 0) return static_cast<long>(k + 1) * w.func.unit;
  return std::nullopt;
}

bool ray_hits_origin(const RatPoint& x, const RatPoint& dir) {
  return cross(x, dir) == 0 && dot(x, dir) < 0;
}

// Nearest wall hit along x + s*dir, s > 0, among walls able to bend within the budget.
std::optional<HitGroup> next_hit(const Diagram& d, const RatPoint& x, const LatticePoint& m, long budget) {
  RatPoint dir(m);
  std::optional<HitGroup> best;
  for (const auto& w : d.walls) {
    auto o = first_bend_order(w);
    if (!o || *o > budget) continue;
    Rat nm = pairing(d.fd, w.normal, m);
    if (nm == 0) continue;
    Rat s = -pairing(d.fd, w.normal, x) / nm;
    if (s <= 0) continue;
    if (best && s > best->s) continue;
    RatPoint y = x + s * dir;
    if (!w.contains(d.fd, y)) continue;
    if (!best || s < best->s) best = HitGroup{s, y, w.normal, {}};
    best->walls.push_back(&w);
  }
  return best;
}

WallFunction product_of(const std::vector<const Wall*>& walls, long K) {
  WallFunction f = wf_truncate(walls.front()->func, K);
  for (std::size_t i = 1; i < walls.size(); ++i) f = wf_mul(f, walls[i]->func, K);
  return f;
}

std::vector<const Wall*> walls_through(const Diagram& d, const RatPoint& y, const LatticePoint& n) {
  std::vector<const Wall*> out;
  for (const auto& w : d.walls)
    if (w.normal == n && w.contains(d.fd, y)) out.push_back(&w);
  return out;
}

// Coefficient of z^{k*dir} in F^{|<n0',m_before>|}.
Rat bend_coefficient(const FixedData& fd, const std::vector<const Wall*>& walls, const LatticePoint& normal,
                     const LatticePoint& m_before, long k) {
  if (k == 0) return 1;
  long unit = walls.front()->func.unit;
  long K = k * unit;
  Rat e = abs_rat(pairing(fd, n0_prime(fd, normal), m_before));
  if (e == 0) return 0;
  // (1 + c x^j)^e has a closed form; dilated segments bend at orders far too high to expand.
  bool exact = std::all_of(walls.begin(), walls.end(), [](const Wall* w) { return w->func.order >= kExact; });
  if (exact && e.get_den() == 1) {
    WallFunction F = product_of(walls, kExact);
    F.trim();
    long j = 0;
    Rat c;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
      if (F.coeffs[i] == 0) continue;
      if (j != 0) {
        j = -1;
        break;
      }
      j = static_cast<long>(i) + 1;
      c = F.coeffs[i];
    }
    if (j == 0) return 0;
    if (j > 0) {
      if (k % j != 0) return 0;
      unsigned long q = static_cast<unsigned long>(k / j);
      Int binom;
      mpz_bin_ui(binom.get_mpz_t(), e.get_num().get_mpz_t(), q);
      Rat cq;
      mpz_pow_ui(mpq_numref(cq.get_mpq_t()), c.get_num().get_mpz_t(), q);
      mpz_pow_ui(mpq_denref(cq.get_mpq_t()), c.get_den().get_mpz_t(), q);
      cq.canonicalize();
      return Rat(binom) * cq;
    }
  }
  WallFunction g = wf_pow(product_of(walls, K), e, K);
  return g.coeff(k);
}

struct Trail {
  RatPoint point;
  LatticePoint m_before;
  Rat g;
};

struct EnumContext {
  const Diagram& d;
  LatticePoint initial;
  RatPoint endpoint;
  LatticePoint final_exp;
  std::vector<BrokenLine>* out;
};

void dfs(EnumContext& ctx, const RatPoint& x, const LatticePoint& m, long budget, std::vector<Trail>& trail) {
  if (ray_hits_origin(x, RatPoint(m))) throw NonGenericError("a broken line through " + to_string(ctx.endpoint) + " meets the origin");
  if (m == ctx.initial) {
    BrokenLine g;
    g.initial = ctx.initial;
    g.endpoint = ctx.endpoint;
    Rat c = 1;
    g.pieces.push_back({ctx.initial, c, trail.empty() ? std::nullopt : std::optional<RatPoint>(trail.back().point)});
    for (std::size_t i = trail.size(); i-- > 0;) {
      c *= trail[i].g;
      LatticePoint after = i == 0 ? ctx.final_exp : trail[i - 1].m_before;
      std::optional<RatPoint> bp;
      if (i > 0) bp = trail[i - 1].point;
      g.pieces.push_back({after, c, bp});
    }
    ctx.out->push_back(std::move(g));
    return;
  }
  if (budget <= 0) return;
  auto hit = next_hit(ctx.d, x, m, budget);
  if (!hit) return;
  if (hit->y.is_zero()) throw NonGenericError("a broken line through " + to_string(ctx.endpoint) + " meets the origin");
  const FixedData& fd = ctx.d.fd;
  const Wall& w0 = *hit->walls.front();
  long unit = w0.func.unit;
  WallFunction F = product_of(hit->walls, budget);
  Rat e = abs_rat(pairing(fd, n0_prime(fd, hit->normal), m));
  WallFunction G = wf_pow(F, e, budget);
  for (long k = 0; k * unit <= budget; ++k) {
    Rat gk = G.coeff(k);
    if (gk == 0) continue;
    LatticePoint before = m - Int(k) * w0.func.dir;
    long left = budget - k * unit;
    if (k > 0) {
      auto o = j_order(fd, before - ctx.initial);
      if (!o || *o != left) continue;
      trail.push_back({hit->y, before, gk});
      dfs(ctx, hit->y, before, left, trail);
      trail.pop_back();
    } else {
      dfs(ctx, hit->y, before, left, trail);
    }
  }
}

bool line_less(const BrokenLine& a, const BrokenLine& b) {
  if (a.final_exponent() != b.final_exponent()) return a.final_exponent() < b.final_exponent();
  if (a.pieces.size() != b.pieces.size()) return a.pieces.size() < b.pieces.size();
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    if (a.pieces[i].exponent != b.pieces[i].exponent) return a.pieces[i].exponent < b.pieces[i].exponent;
    const auto& pa = a.pieces[i].bend_point;
    const auto& pb = b.pieces[i].bend_point;
    if (pa.has_value() != pb.has_value()) return !pa.has_value();
    if (pa && *pa != *pb) return *pa < *pb;
  }
  return false;
}

// Merges neighbouring pieces with equal exponents; map[i] is the merged boundary index of
// original boundary i, or -1 when that boundary disappears.
Segment merge_equal(const Segment& s, std::vector<long>* map) {
  Segment out = s;
  out.pieces.clear();
  if (map) map->clear();
  for (std::size_t i = 0; i < s.pieces.size(); ++i) {
    if (i > 0) {
      if (s.pieces[i].exponent == out.pieces.back().exponent) {
        out.pieces.back().duration += s.pieces[i].duration;
        if (map) map->push_back(-1);
        continue;
      }
      if (map) map->push_back(static_cast<long>(out.pieces.size()) - 1);
    }
    out.pieces.push_back(s.pieces[i]);
  }
  return out;
}

// Collects a + eps*b > 0 requirements; tracks the stability threshold.
struct Constraints {
  Rat bound = 1;
  bool feasible = true;
  std::string reason;

  void positive(const Rat& a, const Rat& b, const char* what) {
    if (a > 0) {
      if (b < 0) bound = std::min<Rat>(bound, a / -b);
    } else if (a == 0) {
      if (b <= 0) fail(what);
    } else {
      fail(what);
    }
  }
  void fail(const char* what) {
    if (feasible) reason = what;
    feasible = false;
  }
};

// Scalar mu with y = mu * p for y on the line through p.
Rat along(const RatPoint& y, const RatPoint& p) { return *ratio(y, p); }

}  // namespace

bool operator==(const BrokenLine& a, const BrokenLine& b) {
  if (a.initial != b.initial || a.endpoint != b.endpoint || a.pieces.size() != b.pieces.size()) return false;
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    const auto& p = a.pieces[i];
    const auto& q = b.pieces[i];
    if (p.exponent != q.exponent || p.coeff != q.coeff || p.bend_point != q.bend_point) return false;
  }
  return a.perturbation == b.perturbation;
}

RatPoint Segment::point_at(const Rat& t) const {
  RatPoint x = start;
  Rat left = t;
  for (const auto& p : pieces) {
    Rat step = std::min(left, p.duration);
    x = x - step * RatPoint(p.exponent);
    left -= step;
    if (left <= 0) break;
  }
  return x;
}

std::vector<RatPoint> Segment::vertices() const {
  std::vector<RatPoint> v{start};
  RatPoint x = start;
  for (const auto& p : pieces) {
    x = x - p.duration * RatPoint(p.exponent);
    v.push_back(x);
  }
  return v;
}

bool operator==(const Segment& a, const Segment& b) {
  if (a.start != b.start || a.end != b.end || a.total_time != b.total_time || a.pieces.size() != b.pieces.size())
    return false;
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    const auto& p = a.pieces[i];
    const auto& q = b.pieces[i];
    if (p.exponent != q.exponent || p.coeff != q.coeff || p.duration != q.duration) return false;
  }
  return true;
}

std::optional<std::pair<LatticePoint, long>> bend_shift(const FixedData& fd, const LatticePoint& diff) {
  if (diff.is_zero()) return std::nullopt;
  auto n = normal_for_exponent(fd, diff);
  if (!n) return std::nullopt;
  auto k = ratio(RatPoint(diff), RatPoint(p1_star(fd, *n)));
  if (!k || k->get_den() != 1 || *k <= 0) return std::nullopt;
  return std::make_pair(*n, k->get_num().get_si());
}

std::vector<Bend> allowed_bends(const Diagram& d, const RatPoint& point, const LatticePoint& m_in, long K) {
  if (point.is_zero()) throw NonGenericError("allowed_bends: the origin is singular");
  std::vector<const Wall*> walls;
  for (const auto& w : d.walls)
    if (w.contains(d.fd, point)) walls.push_back(&w);
  if (walls.empty()) throw InputError("allowed_bends: point " + to_string(point) + " lies on no wall");
  std::vector<Bend> out{{m_in, Rat(1)}};
  const Wall& w0 = *walls.front();
  Rat e = abs_rat(pairing(d.fd, n0_prime(d.fd, w0.normal), m_in));
  if (e == 0) return out;
  WallFunction G = wf_pow(product_of(walls, K), e, K);
  for (long k = 1; k * w0.func.unit <= K; ++k) {
    Rat c = G.coeff(k);
    if (c != 0) out.push_back({m_in + Int(k) * w0.func.dir, c});
  }
  return out;
}

std::vector<BrokenLine> enumerate(const Diagram& d, const LatticePoint& initial, const RatPoint& endpoint, long K) {
  if (d.fd.rank() != 2) throw InputError("enumerate requires rank 2");
  if (initial.is_zero()) throw InputError("enumerate: initial exponent must be nonzero");
  if (endpoint.rank() != 2 || initial.rank() != 2) throw InputError("enumerate: dimension mismatch");
  for (const auto& w : d.walls)
    if (w.contains(d.fd, endpoint)) throw NonGenericError("endpoint " + to_string(endpoint) + " lies on a wall");
  for (const auto& w : d.walls)
    if (!w.func.exact() && w.func.order < K)
      throw TruncationError("enumerate: order exceeds the diagram's truncation order");
  std::vector<BrokenLine> out;
  for (const auto& p : monoid_elements(d.fd, K)) {
    EnumContext ctx{d, initial, endpoint, initial + p, &out};
    std::vector<Trail> trail;
    long budget = *j_order(d.fd, p);
    dfs(ctx, endpoint, ctx.final_exp, budget, trail);
  }
  std::sort(out.begin(), out.end(), line_less);
  return out;
}

LaurentPoly theta(const Diagram& d, const LatticePoint& m, const RatPoint& endpoint, long K) {
  LaurentPoly out;
  out.order = K;
  if (m.is_zero()) {
    out.add_term(m, 1, 0);
    return out;
  }
  for (const auto& g : enumerate(d, m, endpoint, K))
    out.add_term(g.final_exponent(), g.coeff(), *j_order(d.fd, g.final_exponent() - m));
  return out;
}

Segment reverse(const Segment& s) {
  Segment r;
  r.start = s.end;
  r.end = s.start;
  r.total_time = s.total_time;
  std::size_t n = s.pieces.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& p = s.pieces[n - 1 - j];
    Rat c = s.pieces.front().coeff * s.pieces.back().coeff / p.coeff;
    r.pieces.push_back({-p.exponent, c, p.duration});
  }
  return r;
}

SegmentCheck validate_segment(const Diagram& d, const Segment& s) {
  SegmentCheck rep;
  auto fail = [&](std::string why, std::optional<std::size_t> at = std::nullopt) {
    rep.ok = false;
    rep.violation = std::move(why);
    rep.bend = at;
    return rep;
  };
  if (d.fd.rank() != 2) return fail("validation requires rank 2");
  if (s.pieces.empty()) return fail("segment has no pieces");
  Rat total = 0;
  for (const auto& p : s.pieces) {
    if (p.duration < 0) return fail("negative piece duration");
    if (p.coeff <= 0) return fail("non-positive coefficient");
    total += p.duration;
  }
  if (total != s.total_time) return fail("durations do not sum to the total time");
  std::vector<long> map;
  Segment m = merge_equal(s, &map);
  auto mverts = m.vertices();
  std::vector<Rat> mratios(m.pieces.size() > 0 ? m.pieces.size() - 1 : 0);
  bool origin_bend = false;
  for (std::size_t i = 0; i + 1 < m.pieces.size(); ++i) {
    const RatPoint& y = mverts[i + 1];
    std::size_t orig = std::find(map.begin(), map.end(), static_cast<long>(i)) - map.begin();
    const LatticePoint& before = m.pieces[i].exponent;
    auto shift = bend_shift(d.fd, m.pieces[i + 1].exponent - before);
    if (!shift) return fail("exponent change is not a multiple of a wall exponent", orig);
    const auto& [n, k] = *shift;
    if (y.is_zero()) {
      origin_bend = true;
      continue;
    }
    if (i > 0 && m.pieces[i].duration == 0) return fail("two bends at the same point away from the origin", orig);
    if (pairing(d.fd, n, y) != 0) return fail("bend point is off the wall hyperplane", orig);
    auto walls = walls_through(d, y, n);
    if (walls.empty()) return fail("no wall at the bend point", orig);
    Rat g;
    try {
      g = bend_coefficient(d.fd, walls, n, before, k);
    } catch (const TruncationError&) {
      return fail("bend exceeds the diagram's truncation order", orig);
    }
    if (g <= 0) return fail("bend is not a term of the wall function power", orig);
    mratios[i] = g;
  }
  if (origin_bend) {
    bool realized = false;
    for (const auto& v : spiral_directions(24)) {
      PerturbedSegment fam;
      try {
        fam = perturbed_family(d, m, RatPoint(v));
      } catch (const NonGenericError&) {
        continue;
      }
      if (!fam.valid) continue;
      mratios = fam.ratios;
      realized = true;
      break;
    }
    if (!realized) return fail("no stable perturbation realizes the bends at the origin");
  }
  if (s.vertices().back() != s.end) return fail("endpoint does not match the piece durations");
  rep.ratios.assign(s.pieces.size() > 0 ? s.pieces.size() - 1 : 0, Rat(1));
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] >= 0) rep.ratios[i] = mratios[map[i]];
  return rep;
}

Segment decorate(const Diagram& d, const Segment& s) {
  auto rep = validate_segment(d, s);
  if (!rep.ok) throw InputError("decorate: invalid segment: " + rep.violation);
  Segment out = s;
  for (std::size_t i = 1; i < out.pieces.size(); ++i) out.pieces[i].coeff = out.pieces[i - 1].coeff * rep.ratios[i - 1];
  return out;
}

Segment line_segment(const BrokenLine& g, const Rat& t0) {
  if (t0 > 0) throw InputError("line_segment: start time must be <= 0");
  std::size_t L = g.pieces.size();
  // Durations of the bounded pieces, last piece first in time order from the endpoint.
  std::vector<Rat> dur(L);
  for (std::size_t i = 1; i < L; ++i) {
    RatPoint from = *g.pieces[i - 1].bend_point;
    RatPoint to = i + 1 < L ? *g.pieces[i].bend_point : g.endpoint;
    RatPoint delta = to - from;
    if (delta.is_zero()) {
      dur[i] = 0;
      continue;
    }
    auto r = ratio(delta, -RatPoint(g.pieces[i].exponent));
    if (!r || *r < 0) throw InputError("line_segment: inconsistent bend points");
    dur[i] = *r;
  }
  Rat need = -t0;
  Segment s;
  s.total_time = need;
  s.end = g.endpoint;
  // Walk backward from the endpoint.
  std::vector<SegmentPiece> rev;
  Rat left = need;
  for (std::size_t i = L; i-- > 0;) {
    Rat take = i == 0 ? left : std::min(left, dur[i]);
    rev.push_back({g.pieces[i].exponent, g.pieces[i].coeff, take});
    left -= take;
    if (left == 0) break;
  }
  s.pieces.assign(rev.rbegin(), rev.rend());
  RatPoint x = g.endpoint;
  for (const auto& p : s.pieces) x = x + p.duration * RatPoint(p.exponent);
  s.start = x;
  return s;
}

BrokenLine PerturbedLine::at(const Rat& eps) const {
  BrokenLine g = base;
  g.endpoint = base.endpoint + eps * direction;
  for (std::size_t i = 0; i < bend_const.size(); ++i) g.pieces[i].bend_point = bend_const[i] + eps * bend_slope[i];
  g.perturbation.reset();
  return g;
}

Segment PerturbedSegment::at(const Rat& eps) const {
  Segment s = base;
  s.start = base.start + eps * direction;
  s.total_time = 0;
  for (std::size_t i = 0; i < s.pieces.size(); ++i) {
    s.pieces[i].duration = dur_const[i] + eps * dur_slope[i];
    if (i > 0) s.pieces[i].coeff = s.pieces[i - 1].coeff * ratios[i - 1];
    s.total_time += s.pieces[i].duration;
  }
  s.end = s.vertices().back();
  return s;
}

namespace {

// Walls met by points near y(eps) = yc + eps*ys on the line n-perp; updates the threshold.
std::vector<const Wall*> perturbed_walls(const Diagram& d, const LatticePoint& n, const RatPoint& yc,
                                         const RatPoint& ys, Constraints& cons) {
  if (yc.is_zero() && ys.is_zero()) throw NonGenericError("perturbation direction keeps a bend at the origin");
  RatPoint p = yc.is_zero() ? ys : yc;
  if (!yc.is_zero()) cons.positive(Rat(1), along(ys, yc), "bend leaves its ray");
  return walls_through(d, p, n);
}

}  // namespace

PerturbedSegment perturbed_family(const Diagram& d, const Segment& s, const RatPoint& v) {
  if (d.fd.rank() != 2) throw InputError("perturbed_family requires rank 2");
  PerturbedSegment fam;
  fam.direction = v;
  fam.base = merge_equal(s, nullptr);
  const auto& P = fam.base.pieces;
  std::size_t L = P.size();
  Constraints cons;
  RatPoint yc = s.start, ys = v;
  fam.dur_const.assign(L, Rat(0));
  fam.dur_slope.assign(L, Rat(0));
  for (std::size_t i = 0; i + 1 < L; ++i) {
    auto shift = bend_shift(d.fd, P[i + 1].exponent - P[i].exponent);
    if (!shift) {
      fam.reason = "exponent change is not a wall shift";
      return fam;
    }
    const auto& [n, k] = *shift;
    Rat nm = pairing(d.fd, n, P[i].exponent);
    if (nm == 0) {
      fam.reason = "piece runs parallel to its bending wall";
      return fam;
    }
    Rat a = pairing(d.fd, n, yc) / nm, b = pairing(d.fd, n, ys) / nm;
    if (a == 0 && b == 0) throw NonGenericError("perturbation direction is parallel to a bending wall");
    cons.positive(a, b, "piece duration would be negative");
    fam.dur_const[i] = a;
    fam.dur_slope[i] = b;
    RatPoint m(P[i].exponent);
    yc = yc - a * m;
    ys = ys - b * m;
    auto walls = perturbed_walls(d, n, yc, ys, cons);
    if (walls.empty()) {
      fam.reason = "no wall on the perturbed bend ray";
      return fam;
    }
    Rat g = bend_coefficient(d.fd, walls, n, P[i].exponent, k);
    if (g <= 0) {
      fam.reason = "bend not allowed on the perturbed wall";
      return fam;
    }
    fam.ratios.push_back(g);
  }
  fam.dur_const[L - 1] = P[L - 1].duration;
  if (!cons.feasible) {
    fam.reason = cons.reason;
    return fam;
  }
  fam.threshold = cons.bound;
  fam.valid = true;
  return fam;
}

PerturbedLine perturbed_family(const Diagram& d, const BrokenLine& g, const RatPoint& v) {
  if (d.fd.rank() != 2) throw InputError("perturbed_family requires rank 2");
  PerturbedLine fam;
  fam.direction = v;
  fam.base = g;
  fam.base.perturbation = v;
  Constraints cons;
  for (const auto& w : d.walls) {
    Rat a = pairing(d.fd, w.normal, g.endpoint), b = pairing(d.fd, w.normal, v);
    if (a == 0) {
      if (b == 0) throw NonGenericError("perturbation direction is parallel to a wall through the endpoint");
    } else {
      cons.positive(Rat(1), b / a, "endpoint crosses a wall");
    }
  }
  std::size_t L = g.pieces.size();
  fam.bend_const.assign(L - 1, RatPoint(2));
  fam.bend_slope.assign(L - 1, RatPoint(2));
  RatPoint yc = g.endpoint, ys = v;
  for (std::size_t j = L - 1; j >= 1; --j) {
    const LatticePoint& after = g.pieces[j].exponent;
    const LatticePoint& before = g.pieces[j - 1].exponent;
    auto shift = bend_shift(d.fd, after - before);
    if (!shift) {
      fam.reason = "exponent change is not a wall shift";
      return fam;
    }
    const auto& [n, k] = *shift;
    Rat nm = pairing(d.fd, n, after);
    if (nm == 0) {
      fam.reason = "piece runs parallel to its bending wall";
      return fam;
    }
    Rat a = -pairing(d.fd, n, yc) / nm, b = -pairing(d.fd, n, ys) / nm;
    if (a == 0 && b == 0) throw NonGenericError("perturbation direction is parallel to a bending wall");
    cons.positive(a, b, "piece duration would be negative");
    RatPoint m(after);
    yc = yc + a * m;
    ys = ys + b * m;
    fam.bend_const[j - 1] = yc;
    fam.bend_slope[j - 1] = ys;
    auto walls = perturbed_walls(d, n, yc, ys, cons);
    if (walls.empty()) {
      fam.reason = "no wall on the perturbed bend ray";
      return fam;
    }
    Rat c = bend_coefficient(d.fd, walls, n, before, k);
    if (c <= 0 || g.pieces[j].coeff != g.pieces[j - 1].coeff * c) {
      fam.reason = "decorations differ from the perturbed wall crossings";
      return fam;
    }
  }
  if (!cons.feasible) {
    fam.reason = cons.reason;
    return fam;
  }
  fam.threshold = cons.bound;
  fam.valid = true;
  return fam;
}

std::vector<LatticePoint> spiral_directions(std::size_t count) {
  std::vector<LatticePoint> out;
  for (long r = 1; out.size() < count; ++r) {
    std::vector<LatticePoint> ring;
    for (long x = -r; x <= r; ++x)
      for (long y = -r; y <= r; ++y) {
        if (std::max(std::labs(x), std::labs(y)) != r) continue;
        LatticePoint p{x, y};
        if (content(p) == 1) ring.push_back(p);
      }
    std::sort(ring.begin(), ring.end(),
              [](const LatticePoint& a, const LatticePoint& b) { return angle_less(RatPoint(a), RatPoint(b)); });
    for (const auto& p : ring) {
      if (out.size() == count) break;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace csd
