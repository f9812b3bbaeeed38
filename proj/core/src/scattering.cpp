#include "csd/scattering.hpp"

#include <algorithm>
#include <map>

namespace csd {

namespace {

void require_rank2(const FixedData& fd, const char* what) {
  if (fd.rank() != 2) throw InputError(std::string(what) + " requires rank 2");
}

int half(const RatPoint& a) { return (a[1] < 0 || (a[1] == 0 && a[0] < 0)) ? 1 : 0; }

RatPoint l1_normalized(const RatPoint& x) {
  Rat s = abs_rat(x[0]) + abs_rat(x[1]);
  return (Rat(1) / s) * x;
}

bool same_direction(const RatPoint& a, const RatPoint& b) {
  return cross(a, b) == 0 && dot(a, b) > 0;
}

}  // namespace

bool Wall::contains(const FixedData& fd, const RatPoint& x) const {
  if (pairing(fd, normal, x) != 0) return false;
  if (line) return true;
  return dot(RatPoint(ray), x) >= 0;
}

bool operator==(const Wall& a, const Wall& b) {
  return a.normal == b.normal && a.line == b.line && (a.line || a.ray == b.ray) && a.func == b.func;
}

WallClass classify(const FixedData& fd, const Wall& w) {
  LatticePoint p = p1_star(fd, w.normal);
  return w.contains(fd, RatPoint(p)) ? WallClass::Incoming : WallClass::Outgoing;
}

void Diagram::add_wall(Wall w) {
  for (auto& x : walls) {
    if (x.normal == w.normal && x.line == w.line && (x.line || x.ray == w.ray) && x.func.dir == w.func.dir) {
      long K = std::min(x.func.order, w.func.order);
      x.func = wf_mul(x.func, w.func, K);
      return;
    }
  }
  walls.push_back(std::move(w));
}

bool operator==(const Diagram& a, const Diagram& b) {
  return a.fd == b.fd && a.order == b.order && a.saturated == b.saturated && a.walls == b.walls;
}

LatticePoint perp_direction(const FixedData& fd, const LatticePoint& n) {
  require_rank2(fd, "perp_direction");
  LatticePoint v{0, 0};
  v[0] = n[1] * fd.d(0);
  v[1] = -n[0] * fd.d(1);
  return primitive(v);
}

Diagram initial_diagram(const FixedData& fd, const Seed& s, long K) {
  Diagram d;
  d.fd = fd;
  d.seed = s;
  d.order = K;
  for (int i : fd.unfrozen()) {
    LatticePoint e = LatticePoint::unit(fd.rank(), i);
    LatticePoint p = p1_star(fd, e);
    if (p.is_zero()) throw InputError("p1* vanishes on an unfrozen basis vector; use principal coefficients");
    auto u = j_order(fd, p);
    if (!u) throw InputError("initial exponent outside the monoid");
    Wall w;
    w.normal = e;
    w.line = true;
    w.func = WallFunction::binomial(p, *u);
    d.add_wall(std::move(w));
  }
  return d;
}

bool angle_less(const RatPoint& a, const RatPoint& b) {
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return cross(a, b) > 0;
}

RatPoint rot90(const RatPoint& x) { return RatPoint{-x[1], x[0]}; }

std::vector<LatticePoint> support_rays(const Diagram& d) {
  require_rank2(d.fd, "support_rays");
  std::vector<LatticePoint> rays;
  auto push = [&](const LatticePoint& r) {
    if (std::find(rays.begin(), rays.end(), r) == rays.end()) rays.push_back(r);
  };
  for (const auto& w : d.walls) {
    if (w.line) {
      LatticePoint v = perp_direction(d.fd, w.normal);
      push(v);
      push(-v);
    } else {
      push(w.ray);
    }
  }
  std::sort(rays.begin(), rays.end(),
            [](const LatticePoint& a, const LatticePoint& b) { return angle_less(RatPoint(a), RatPoint(b)); });
  return rays;
}

std::vector<RatPoint> loop_path(const Diagram& d) {
  auto rays = support_rays(d);
  std::vector<RatPoint> pts;
  if (rays.empty()) {
    pts = {RatPoint{1, 1}, RatPoint{-1, 1}, RatPoint{-1, -1}, RatPoint{1, -1}};
  } else {
    for (std::size_t j = 0; j < rays.size(); ++j) {
      RatPoint a = l1_normalized(RatPoint(rays[j]));
      RatPoint b = l1_normalized(RatPoint(rays[(j + 1) % rays.size()]));
      Rat c = cross(a, b);
      if (rays.size() > 1 && c > 0) {
        pts.push_back(a + b);
        continue;
      }
      // Sector of at least half a turn: step through it in quarter-turn increments.
      bool over_three_quarters = rays.size() == 1 || (c < 0 && dot(a, b) > 0);
      std::vector<RatPoint> cand = {a + l1_normalized(rot90(a)), rot90(a)};
      if (over_three_quarters) cand.push_back(-a);
      cand.push_back(-rot90(b));
      cand.push_back(b + l1_normalized(-rot90(b)));
      for (const auto& p : cand)
        if (pts.empty() || !same_direction(pts.back(), p)) pts.push_back(p);
    }
  }
  pts.push_back(pts.front());
  return pts;
}

LaurentPoly path_ordered_product(const Diagram& d, const std::vector<RatPoint>& path,
                                 const LaurentPoly& p, long K) {
  require_rank2(d.fd, "path_ordered_product");
  const FixedData& fd = d.fd;
  for (const auto& x : path)
    for (const auto& w : d.walls)
      if (w.contains(fd, x)) throw NonGenericError("path vertex " + to_string(x) + " lies on a wall");
  LaurentPoly cur = truncate(p, K);
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const RatPoint& a = path[s];
    const RatPoint& b = path[s + 1];
    struct Event {
      Rat t;
      std::size_t wall;
      int sign;
    };
    std::vector<Event> events;
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
      const Wall& w = d.walls[i];
      Rat na = pairing(fd, w.normal, a), nb = pairing(fd, w.normal, b);
      if (sgn(na) * sgn(nb) >= 0) continue;
      Rat t = na / (na - nb);
      RatPoint x = a + t * (b - a);
      if (x.is_zero()) throw NonGenericError("path passes through the origin");
      if (!w.contains(fd, x)) continue;
      events.push_back({t, i, sgn(nb - na)});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& u, const Event& v) { return u.t < v.t; });
    for (const auto& e : events) {
      const Wall& w = d.walls[e.wall];
      cur = wall_cross(fd, cur, w.func, w.normal, e.sign, K);
    }
  }
  return cur;
}

ConsistencyReport check_consistent(const Diagram& d, long K) {
  require_rank2(d.fd, "check_consistent");
  ConsistencyReport rep;
  auto path = loop_path(d);
  for (std::size_t i = 0; i < 2; ++i) {
    LaurentPoly z = LaurentPoly::monomial(LatticePoint::unit(2, i), K);
    LaurentPoly out = path_ordered_product(d, path, z, K);
    LaurentPoly diff = out - z;
    if (!diff.empty()) rep.consistent = false;
    rep.discrepancy.push_back(std::move(diff));
  }
  return rep;
}

Diagram complete_rank2(const Diagram& d_in, long K) {
  require_rank2(d_in.fd, "complete_rank2");
  if (K < 1) throw InputError("order must be at least 1");
  const FixedData& fd = d_in.fd;
  Diagram d = d_in;
  d.order = K;
  d.saturated = false;
  // Corrections already present in the input count towards saturation.
  long last_correction = 0;
  for (const auto& w : d.walls) {
    if (w.line) continue;
    for (std::size_t k = w.func.coeffs.size(); k > 0; --k)
      if (w.func.coeffs[k - 1] != 0) {
        last_correction = std::max(last_correction, static_cast<long>(k) * w.func.unit);
        break;
      }
  }
  for (long k = 1; k <= K; ++k) {
    auto rep = check_consistent(d, k);
    if (rep.consistent) continue;
    // Order-k discrepancy coefficients a_u(f_g), keyed by the shift u.
    std::map<LatticePoint, std::vector<Rat>> shifts;
    for (std::size_t g = 0; g < 2; ++g) {
      LatticePoint fg = LatticePoint::unit(2, g);
      for (const auto& [e, term] : rep.discrepancy[g].terms) {
        if (term.ord != k) throw Error("completion: inconsistency left below order " + std::to_string(k));
        auto& slot = shifts[e - fg];
        slot.resize(2);
        slot[g] = term.coeff;
      }
    }
    for (const auto& [u, a] : shifts) {
      auto n = normal_for_exponent(fd, u);
      if (!n) throw Error("completion: discrepancy exponent " + to_string(u) + " has no normal in N+");
      LatticePoint p = p1_star(fd, *n);
      auto j = ratio(RatPoint(u), RatPoint(p));
      if (!j || j->get_den() != 1 || *j <= 0) throw Error("completion: exponent is not a multiple of p1*(n)");
      LatticePoint r = primitive(-p);
      int eps = -sgn(pairing(fd, *n, rot90(RatPoint(r))));
      LatticePoint np = n0_prime(fd, *n);
      std::optional<Rat> c;
      for (std::size_t g = 0; g < 2; ++g) {
        Rat pr = pairing(fd, np, LatticePoint::unit(2, g));
        if (pr == 0) {
          if (a[g] != 0) throw Error("completion: discrepancy is not a wall-crossing generator");
          continue;
        }
        Rat cg = -a[g] / (eps * pr);
        if (c && *c != cg) throw Error("completion: discrepancy is not a wall-crossing generator");
        c = cg;
      }
      if (!c) throw Error("completion: undetermined correction");
      long jj = j->get_num().get_si();
      Wall* target = nullptr;
      for (auto& w : d.walls)
        if (!w.line && w.ray == r && w.normal == *n) target = &w;
      if (!target) {
        auto unit = j_order(fd, p);
        if (!unit) throw Error("completion: wall exponent outside the monoid");
        Wall w;
        w.normal = *n;
        w.line = false;
        w.ray = r;
        w.func = WallFunction(p, *unit, {}, K);
        d.walls.push_back(std::move(w));
        target = &d.walls.back();
      }
      target->func.coeffs.at(jj - 1) += *c;
      last_correction = k;
    }
  }
  if (K >= 2 && last_correction <= K / 2) {
    d.saturated = true;
    for (auto& w : d.walls) {
      w.func.order = kExact;
      w.func.trim();
    }
  }
  return d;
}

}  // namespace csd
