#include "csd/constructions.hpp"

#include <algorithm>

namespace csd {

namespace {

void require_rank2(const Diagram& d, const char* what) {
  if (d.fd.rank() != 2) throw InputError(std::string(what) + " requires rank 2");
}

// Exponents m_0..m_s of a broken line, endpoint side first.
std::vector<LatticePoint> exponents_from_end(const BrokenLine& g) {
  std::vector<LatticePoint> m;
  for (std::size_t i = g.pieces.size(); i-- > 0;) m.push_back(g.pieces[i].exponent);
  return m;
}

// Normal in N+ of the wall realizing the exponent change between u and v (either order).
LatticePoint normal_between(const FixedData& fd, const LatticePoint& u, const LatticePoint& v) {
  if (auto s = bend_shift(fd, u - v)) return s->first;
  if (auto s = bend_shift(fd, v - u)) return s->first;
  throw InputError("exponents " + to_string(u) + " and " + to_string(v) + " do not differ by a wall exponent");
}

// |<n0', m>| as an integer.
Int bend_power(const FixedData& fd, const LatticePoint& n, const LatticePoint& m) {
  Rat e = abs_rat(pairing(fd, n0_prime(fd, n), m));
  if (e.get_den() != 1) throw Error("bend power is not integral");
  return e.get_num();
}

bool same_ray(const RatPoint& a, const RatPoint& b) { return cross(a, b) == 0 && dot(a, b) > 0; }

// rho_i = prod_{k=i}^{s-1} <n_{0,k+1}, m_k> for exponents listed from the endpoint.
std::vector<Int> rho_list(const FixedData& fd, const std::vector<LatticePoint>& m) {
  std::size_t s = m.size() - 1;
  std::vector<Int> rho(s + 1, Int(1));
  for (std::size_t i = s; i-- > 0;) {
    LatticePoint n = normal_between(fd, m[i], m[i + 1]);
    Int f = bend_power(fd, n, m[i]);
    if (f == 0) throw InputError("a bend runs parallel to its wall");
    rho[i] = rho[i + 1] * f;
  }
  return rho;
}

std::optional<PerturbedLine> stable_family(const Diagram& d, const BrokenLine& g) {
  if (g.perturbation) {
    auto fam = perturbed_family(d, g, *g.perturbation);
    if (fam.valid) return fam;
  }
  for (const auto& v : spiral_directions(24)) {
    try {
      auto fam = perturbed_family(d, g, RatPoint(v));
      if (fam.valid) return fam;
    } catch (const NonGenericError&) {
    }
  }
  return std::nullopt;
}

Segment merged(const Segment& s) {
  Segment out = s;
  out.pieces.clear();
  for (const auto& p : s.pieces) {
    if (!out.pieces.empty() && out.pieces.back().exponent == p.exponent) {
      out.pieces.back().duration += p.duration;
      continue;
    }
    out.pieces.push_back(p);
  }
  return out;
}

// Decorates s with coefficients from the walls, first coefficient 1.
bool decorate_into(const Diagram& d, Segment& s, std::string& why) {
  if (!s.pieces.empty()) s.pieces.front().coeff = 1;
  try {
    auto rep = validate_segment(d, s);
    if (!rep.ok) {
      why = rep.violation;
      return false;
    }
    for (std::size_t i = 1; i < s.pieces.size(); ++i) s.pieces[i].coeff = s.pieces[i - 1].coeff * rep.ratios[i - 1];
  } catch (const Error& e) {
    why = e.what();
    return false;
  }
  return true;
}

Int lcm_of_denominators(const RatPoint& x, const Rat& scale) {
  Int l = 1;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    Rat c = scale * x[i];
    l = lcm_int(l, Int(c.get_den()));
  }
  return l;
}

bool in_multiple(const RatPoint& x, const Int& k) {
  for (std::size_t i = 0; i < x.rank(); ++i) {
    Rat c = x[i] / Rat(k);
    if (c.get_den() != 1) return false;
  }
  return true;
}

}  // namespace

RatPoint ray_segment_intersection(const RatPoint& x, const Rat& lam1, const RatPoint& m, const Rat& lam2,
                                  const RatPoint& ray) {
  if (ray.is_zero()) throw InputError("ray_segment_intersection: zero ray direction");
  RatPoint A = lam1 * x, B = lam2 * m;
  Rat denom = cross(B - A, ray);
  if (denom == 0) throw InputError("ray_segment_intersection: segment parallel to the ray");
  Rat u = -cross(A, ray) / denom;
  if (u < 0 || u > 1) throw InputError("ray_segment_intersection: the segment misses the ray's line");
  RatPoint P = A + u * (B - A);
  if (dot(P, ray) < 0) throw InputError("ray_segment_intersection: the segment meets the opposite ray");
  return P;
}

std::vector<RatPoint> bend_rays(const Diagram& d, const BrokenLine& g) {
  require_rank2(d, "bend_rays");
  std::size_t L = g.pieces.size();
  std::vector<RatPoint> rays(L);
  rays[0] = g.endpoint;
  std::optional<PerturbedLine> fam;
  for (std::size_t i = 1; i < L; ++i) {
    const auto& bp = g.pieces[L - 1 - i].bend_point;
    if (!bp) throw InputError("bend_rays: missing bend point");
    if (!bp->is_zero()) {
      rays[i] = *bp;
      continue;
    }
    if (!fam) fam = stable_family(d, g);
    if (!fam) throw NonGenericError("bend_rays: no stable perturbation of a line bending at the origin");
    const RatPoint& c = fam->bend_const[L - 1 - i];
    rays[i] = c.is_zero() ? fam->bend_slope[L - 1 - i] : c;
    if (rays[i].is_zero()) throw NonGenericError("bend_rays: perturbation keeps a bend at the origin");
  }
  return rays;
}

std::vector<RatPoint> segment_support(const Diagram& d, const BrokenLine& g, const Int& a, const Int& b) {
  if (a <= 0 || b <= 0) throw InputError("segment_support: a and b must be positive");
  auto m = exponents_from_end(g);
  auto rays = bend_rays(d, g);
  std::size_t s = m.size() - 1;
  Rat ra(a);
  std::vector<RatPoint> xt{(Rat(1) / Rat(a + b)) * g.endpoint};
  for (std::size_t i = 0; i < s; ++i)
    xt.push_back(ray_segment_intersection(xt[i], 1, RatPoint(m[i]), Rat(1) / ra, rays[i + 1]));
  xt.push_back((Rat(1) / ra) * RatPoint(m[s]));
  return xt;
}

AttachResult attach_monomials(const Diagram& d, const BrokenLine& g, const Int& a_in, const Int& b_in,
                              const Int& lambda) {
  require_rank2(d, "attach_monomials");
  if (lambda <= 0) throw InputError("attach_monomials: lambda must be positive");
  AttachResult res;
  ConstructionTrace& tr = res.trace;
  auto support = segment_support(d, g, a_in, b_in);
  std::size_t s = g.pieces.size() - 1;
  tr.xt.assign(support.begin(), support.begin() + s + 1);
  // Dilate by beta when the endpoint is not integral; the support does not change.
  tr.beta = denominator_lcm(g.endpoint);
  Int a = tr.beta * a_in, b = tr.beta * b_in;
  auto m = exponents_from_end(g);
  for (auto& e : m) e = tr.beta * e;
  const FixedData& fd = d.fd;
  tr.rho = rho_list(fd, m);
  Rat ra(a);
  RatPoint first = (Rat(1) / ra) * RatPoint(m[0]) - tr.xt[0];
  if (first.is_zero()) {
    if (s != 0) throw InputError("attach_monomials: the final exponent points at the support start");
    tr.C = {Int(0)};
    tr.mt = {LatticePoint(2)};
    tr.times = {Rat(0)};
    tr.tau = 0;
    res.segment.start = res.segment.end = tr.xt[0];
    res.segment.total_time = 0;
    res.segment.pieces = {{LatticePoint(2), Rat(1), Rat(0)}};
    return res;
  }
  tr.C.push_back(a * (a + b) * tr.rho[0] * lambda);
  for (std::size_t i = 0; i <= s; ++i) {
    if (i > 0) {
      LatticePoint n = normal_between(fd, m[i - 1], m[i]);
      Rat num = pairing(fd, n, tr.mt[i - 1]), den = pairing(fd, n, m[i - 1]);
      if (den == 0) throw Error("attach_monomials: bend parallel to its wall");
      Rat c = ra * num / den;
      if (c <= 0 || c.get_den() != 1) throw Error("attach_monomials: velocity scale is not a positive integer");
      tr.C.push_back(c.get_num());
    }
    RatPoint v = Rat(tr.C[i]) * ((Rat(1) / ra) * RatPoint(m[i]) - tr.xt[i]);
    if (!v.is_integral()) throw Error("attach_monomials: segment exponent is not integral");
    tr.mt.push_back(v.to_lattice());
  }
  tr.tau = -Rat(1) / Rat(tr.C[0]);
  for (std::size_t i = 0; i <= s; ++i) tr.times.push_back(tr.tau + Rat(1) / Rat(tr.C[i]));
  for (std::size_t i = 0; i < s; ++i)
    if (tr.xt[i + 1] - tr.xt[i] != (tr.times[i] - tr.times[i + 1]) * RatPoint(tr.mt[i]))
      throw Error("attach_monomials: support and timing disagree");
  Segment& seg = res.segment;
  seg.start = support.back();
  seg.end = tr.xt[0];
  seg.total_time = -tr.tau;
  for (std::size_t i = s + 1; i-- > 0;) {
    Rat dur = i == s ? tr.times[s] - tr.tau : tr.times[i] - tr.times[i + 1];
    seg.pieces.push_back({tr.mt[i], Rat(1), dur});
  }
  std::string why;
  if (!decorate_into(d, seg, why)) throw Error("attach_monomials: constructed segment is invalid: " + why);
  return res;
}

GlueResult glue_balanced(const Diagram& d, const BalancedPair& pair, const Int& a, const Int& b) {
  require_rank2(d, "glue_balanced");
  if (a <= 0 || b <= 0) throw InputError("glue_balanced: a and b must be positive");
  const BrokenLine &g1 = pair.line1, &g2 = pair.line2;
  if (g1.endpoint != pair.base || g2.endpoint != pair.base) throw InputError("glue_balanced: endpoints differ from the base");
  if (!pair.base.is_integral()) throw InputError("glue_balanced: base is not a lattice point");
  if (RatPoint(g1.final_exponent() + g2.final_exponent()) != pair.base)
    throw InputError("glue_balanced: final exponents do not sum to the base");
  GlueResult res;
  const FixedData& fd = d.fd;
  Int rho1 = rho_list(fd, exponents_from_end(g1))[0];
  Int rho2 = rho_list(fd, exponents_from_end(g2))[0];
  auto A1 = attach_monomials(d, g1, a, b, rho2);
  auto A2 = attach_monomials(d, g2, b, a, rho1);
  res.side1 = A1.trace;
  res.side2 = A2.trace;
  if (A1.trace.mt[0] != -A2.trace.mt[0]) throw Error("glue_balanced: the two halves do not meet head on");
  Segment back = reverse(A2.segment);
  Segment& seg = res.segment;
  seg.start = A1.segment.start;
  seg.end = back.end;
  seg.pieces = A1.segment.pieces;
  for (std::size_t i = 0; i < back.pieces.size(); ++i) {
    if (i == 0 && back.pieces[0].exponent == seg.pieces.back().exponent) {
      seg.pieces.back().duration += back.pieces[0].duration;
      continue;
    }
    seg.pieces.push_back(back.pieces[i]);
  }
  seg.total_time = A1.segment.total_time + A2.segment.total_time;
  res.split_time = A1.segment.total_time;
  std::string why;
  if (!decorate_into(d, seg, why)) throw Error("glue_balanced: glued segment is invalid: " + why);
  return res;
}

ReverseResult pair_from_segment(const Diagram& d, const Segment& s_in, const Rat& tau, const Int& a_in,
                                const Int& b_in) {
  require_rank2(d, "pair_from_segment");
  const FixedData& fd = d.fd;
  Segment s = merged(s_in);
  if (s.pieces.empty()) throw InputError("pair_from_segment: empty segment");
  Rat T = s.total_time;
  if (tau <= 0 || tau >= T) throw InputError("pair_from_segment: tau must lie strictly between 0 and T");
  std::size_t L = s.pieces.size();
  std::vector<Rat> S(L), E(L);
  Rat t = 0;
  for (std::size_t j = 0; j < L; ++j) {
    S[j] = t;
    t += s.pieces[j].duration;
    E[j] = t;
  }
  ReverseResult res;
  ReverseTrace& tr = res.trace;
  tr.T = T;
  tr.tau = tau;
  std::size_t js = 0;
  for (std::size_t j = 0; j < L; ++j)
    if (S[j] < tau) js = j;
  tr.split_index = js;
  // delta: half the gap to the nearest other event time.
  Rat gap = std::min<Rat>(tau, T - tau);
  for (std::size_t j = 0; j + 1 < L; ++j)
    if (E[j] != tau) gap = std::min<Rat>(gap, abs_rat(E[j] - tau));
  tr.delta = gap / 2;
  RatPoint rt = s.point_at(tau);
  auto verts = s.vertices();
  // Vertex directions; bends at the origin take the direction of a stable perturbation.
  std::vector<RatPoint> dirs = verts;
  if (std::any_of(verts.begin() + 1, verts.end() - 1, [](const RatPoint& x) { return x.is_zero(); })) {
    bool found = false;
    for (const auto& v : spiral_directions(24)) {
      PerturbedSegment fam;
      try {
        fam = perturbed_family(d, s, RatPoint(v));
      } catch (const NonGenericError&) {
        continue;
      }
      if (!fam.valid) continue;
      auto pv = fam.at(fam.threshold / 2).vertices();
      for (std::size_t i = 1; i + 1 < verts.size(); ++i)
        if (verts[i].is_zero()) dirs[i] = pv[i];
      found = true;
      break;
    }
    if (!found) throw NonGenericError("pair_from_segment: no stable perturbation of the segment");
  }
  // I_j: the line of piece j extended back to time 0.
  auto extended = [&](std::size_t j) { return verts[j] + S[j] * RatPoint(s.pieces[j].exponent); };
  std::size_t s1 = js, s2 = L - 1 - js;
  for (std::size_t i = 0; i <= s1; ++i) tr.mt1.push_back(s.pieces[js - i].exponent);
  for (std::size_t i = 0; i <= s2; ++i) tr.mt2.push_back(s.pieces[js + i].exponent);
  tr.t1.push_back(E[js]);
  for (std::size_t i = 1; i <= s1; ++i) tr.t1.push_back(E[js - i]);
  tr.t2.push_back(S[js]);
  for (std::size_t i = 1; i <= s2; ++i) tr.t2.push_back(S[js + i]);
  auto rho_tilde = [&](const std::vector<LatticePoint>& mt) {
    std::size_t n = mt.size() - 1;
    std::vector<Int> rho(n + 1, Int(1));
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 1; k + i <= n; ++k) rho[i] *= bend_power(fd, normal_between(fd, mt[k - 1], mt[k]), mt[k]);
    return rho;
  };
  tr.rho1 = rho_tilde(tr.mt1);
  tr.rho2 = rho_tilde(tr.mt2);
  Rat ab = (T - tau) / tau;  // a / b
  Int a = a_in, b = b_in;
  if (a == 0 && b == 0) {
    Int num = ab.get_num(), den = ab.get_den();
    Int j = lcm_int(lcm_of_denominators(s.start, Rat(num) / Rat(tr.rho1[0])),
                    lcm_of_denominators(s.end, Rat(den) / Rat(tr.rho2[0])));
    a = j * num;
    b = j * den;
  } else {
    if (a <= 0 || b <= 0) throw InputError("pair_from_segment: a and b must be positive");
    if (Rat(b) * T != Rat(a + b) * tau) throw InputError("pair_from_segment: b/(a+b) must equal tau/T");
  }
  tr.a = a;
  tr.b = b;
  tr.hypotheses_hold = in_multiple(Rat(a) * s.start, tr.rho1[0]) && in_multiple(Rat(b) * s.end, tr.rho2[0]);
  auto to_lattice = [](const RatPoint& x) {
    if (!x.is_integral()) throw Error("pair_from_segment: exponent " + to_string(x) + " is not integral for this a, b");
    return x.to_lattice();
  };
  for (std::size_t i = 0; i <= s1; ++i) tr.m1.push_back(to_lattice(Rat(a) * extended(js - i)));
  for (std::size_t i = 0; i <= s2; ++i)
    tr.m2.push_back(to_lattice(Rat(b) * (extended(js + i) - T * RatPoint(s.pieces[js + i].exponent))));
  RatPoint base = Rat(a + b) * rt;
  // Bend ray k of side 1 passes through vertex js-k+1; of side 2 through vertex js+k.
  auto trace = [&](const std::vector<LatticePoint>& m, auto ray_of) {
    BrokenLine g;
    g.endpoint = base;
    g.initial = m.back();
    std::size_t n = m.size() - 1;
    std::vector<RatPoint> y(n + 1);
    RatPoint x = base;
    for (std::size_t k = 1; k <= n; ++k) {
      RatPoint r = ray_of(k);
      RatPoint dir(m[k - 1]);
      Rat den = cross(dir, r);
      if (den == 0) throw Error("pair_from_segment: traced path runs parallel to a bending ray");
      Rat u = -cross(x, r) / den;
      RatPoint p = x + u * dir;
      if (u < 0 || dot(p, r) < 0) throw Error("pair_from_segment: traced path misses a bending ray");
      y[k] = p;
      x = p;
    }
    std::vector<Rat> coeff(n + 1);
    coeff[n] = 1;
    for (std::size_t k = n; k >= 1; --k) {
      RatPoint at = ray_of(k);
      auto o = j_order(fd, m[k - 1] - m[k]);
      if (!o) throw Error("pair_from_segment: bend shift outside the monoid");
      std::optional<Rat> c;
      try {
        for (const auto& bd : allowed_bends(d, at, m[k], *o))
          if (bd.exponent == m[k - 1]) c = bd.coeff;
      } catch (const TruncationError&) {
        throw Error("pair_from_segment: bend exceeds the diagram's truncation order");
      }
      if (!c) throw Error("pair_from_segment: constructed bend is not allowed");
      coeff[k - 1] = coeff[k] * *c;
    }
    for (std::size_t i = n + 1; i-- > 0;) {
      std::optional<RatPoint> bp;
      if (i >= 1) bp = y[i];
      g.pieces.push_back({m[i], coeff[i], bp});
    }
    return g;
  };
  res.pair.base = base;
  res.pair.line1 = trace(tr.m1, [&](std::size_t k) { return dirs[js - k + 1]; });
  res.pair.line2 = trace(tr.m2, [&](std::size_t k) { return dirs[js + k]; });
  return res;
}

const LaurentPoly& ChamberThetas::get(const LatticePoint& m) {
  auto it = cache_.find(m);
  if (it == cache_.end()) it = cache_.emplace(m, theta(d_, m, z_, K_)).first;
  return it->second;
}

namespace {

RatPoint chamber_point(const std::vector<LatticePoint>& rays, std::size_t j, int attempt) {
  static const long weights[][2] = {{1009, 1013}, {1019, 1021}, {1031, 1033}, {1039, 1049}, {1051, 1061}};
  long w1 = weights[attempt][0], w2 = weights[attempt][1];
  if (rays.empty()) return RatPoint{Rat(w1), Rat(w2)};
  RatPoint a(rays[j]), b(rays[(j + 1) % rays.size()]);
  if (rays.size() > 1 && cross(a, b) > 0) return Rat(w1) * a + Rat(w2) * b;
  return Rat(w1) * a + Rat(w2) * rot90(a);
}

constexpr int kAttempts = 5;

// Counterclockwise angle from a to u is smaller than from a to v.
bool angle_from_less(const RatPoint& a, const RatPoint& u, const RatPoint& v) {
  auto half = [&](const RatPoint& x) { return (cross(a, x) > 0 || same_ray(a, x)) ? 0 : 1; };
  int hu = half(u), hv = half(v);
  if (hu != hv) return hu < hv;
  return cross(u, v) > 0;
}

bool in_closure(const std::vector<LatticePoint>& rays, std::size_t j, const RatPoint& x) {
  if (x.is_zero() || rays.size() < 2) return true;
  RatPoint a(rays[j]), b(rays[(j + 1) % rays.size()]);
  if (same_ray(x, a) || same_ray(x, b)) return true;
  return angle_from_less(a, x, b);
}

}  // namespace

std::vector<RatPoint> chamber_points(const Diagram& d) {
  require_rank2(d, "chamber_points");
  auto rays = support_rays(d);
  std::vector<RatPoint> out;
  std::size_t n = std::max<std::size_t>(rays.size(), 1);
  for (std::size_t j = 0; j < n; ++j) out.push_back(chamber_point(rays, j, 0));
  return out;
}

std::size_t chamber_of(const Diagram& d, const RatPoint& x) {
  require_rank2(d, "chamber_of");
  auto rays = support_rays(d);
  if (rays.empty() || x.is_zero()) return 0;
  std::size_t n = rays.size();
  for (std::size_t j = 0; j < n; ++j)
    if (same_ray(x, RatPoint(rays[j]))) return j;
  std::size_t c = 0;
  for (const auto& r : rays)
    if (angle_less(RatPoint(r), x)) ++c;
  return (c + n - 1) % n;
}

StructureConstant structure_constant_at(const Diagram& d, const LatticePoint& p, const LatticePoint& q,
                                        const LatticePoint& r, const RatPoint& z, long K) {
  require_rank2(d, "structure_constant");
  StructureConstant out;
  if (p.is_zero() || q.is_zero()) {
    out.value = (p.is_zero() ? q : p) == r ? 1 : 0;
    return out;
  }
  auto o = j_order(d.fd, r - p - q);
  if (!o) {
    out.value = 0;
    return out;
  }
  long k = *o;
  if (k > K) {
    out.certified = false;
    k = K;
  }
  LaurentPoly tp = theta(d, p, z, k), tq = theta(d, q, z, k);
  Rat sum = 0;
  for (const auto& [e, t] : tp.terms) sum += t.coeff * tq.coeff(r - e);
  out.value = sum;
  return out;
}

StructureConstant structure_constant(const Diagram& d, const LatticePoint& p, const LatticePoint& q,
                                     const LatticePoint& r, long K) {
  require_rank2(d, "structure_constant");
  auto rays = support_rays(d);
  std::size_t j = chamber_of(d, RatPoint(r));
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    try {
      return structure_constant_at(d, p, q, r, chamber_point(rays, j, attempt), K);
    } catch (const NonGenericError&) {
    }
  }
  throw NonGenericError("structure_constant: no generic endpoint found in the chamber of " + to_string(r));
}

std::vector<ProductTerm> multiply(const Diagram& d, const LatticePoint& p, const LatticePoint& q, long K) {
  ThetaProducts prods(d, K);
  return prods.multiply(p, q);
}

ThetaProducts::ThetaProducts(const Diagram& d, long K) : d_(d), K_(K) {
  require_rank2(d, "multiply");
  rays_ = support_rays(d);
  std::size_t n = std::max<std::size_t>(rays_.size(), 1);
  attempt_.assign(n, 0);
  cache_.resize(n);
}

const LaurentPoly& ThetaProducts::theta_in(std::size_t j, const LatticePoint& m) {
  auto it = cache_[j].find(m);
  if (it != cache_[j].end()) return it->second;
  while (attempt_[j] < kAttempts) {
    try {
      LaurentPoly t = theta(d_, m, chamber_point(rays_, j, attempt_[j]), K_);
      return cache_[j].emplace(m, std::move(t)).first->second;
    } catch (const NonGenericError&) {
      // Thetas computed at the old point are still valid in the same chamber.
      ++attempt_[j];
    }
  }
  throw NonGenericError("multiply: no generic endpoint found in a chamber");
}

std::vector<ProductTerm> ThetaProducts::multiply(const LatticePoint& p, const LatticePoint& q) {
  std::map<LatticePoint, Rat> found;
  for (std::size_t j = 0; j < cache_.size(); ++j) {
    LaurentPoly prod = theta_in(j, p) * theta_in(j, q);
    for (const auto& [r, t] : prod.terms) {
      auto o = j_order(d_.fd, r - p - q);
      if (!o || *o > K_) continue;
      if (!in_closure(rays_, j, RatPoint(r)) || found.count(r)) continue;
      found.emplace(r, t.coeff);
    }
  }
  std::vector<ProductTerm> out;
  for (const auto& [r, c] : found)
    if (c != 0) out.push_back({r, c, true});
  return out;
}

std::vector<BalancedPair> balanced_pairs(const Diagram& d, const LatticePoint& p, const LatticePoint& q,
                                         const LatticePoint& r, long K) {
  require_rank2(d, "balanced_pairs");
  if (p.is_zero() || q.is_zero()) throw InputError("balanced_pairs: initial exponents must be nonzero");
  std::vector<BalancedPair> out;
  auto o = j_order(d.fd, r - p - q);
  if (!o) return out;
  long k = std::min(*o, K);
  RatPoint R(r);
  auto collect = [&](const RatPoint& z, const std::optional<RatPoint>& v, const Rat& eps) {
    std::vector<BalancedPair> pairs;
    auto l1 = enumerate(d, p, z, k);
    auto l2 = enumerate(d, q, z, k);
    for (const auto& g1 : l1)
      for (const auto& g2 : l2) {
        if (g1.final_exponent() + g2.final_exponent() != r) continue;
        BalancedPair bp{g1, g2, R};
        if (v) {
          for (BrokenLine* g : {&bp.line1, &bp.line2}) {
            BrokenLine lim = *g;
            lim.endpoint = R;
            auto fam = perturbed_family(d, lim, *v);
            if (!fam.valid || fam.threshold <= eps) return std::optional<std::vector<BalancedPair>>();
            lim = fam.base;
            for (std::size_t i = 0; i < fam.bend_const.size(); ++i) lim.pieces[i].bend_point = fam.bend_const[i];
            *g = lim;
          }
        }
        pairs.push_back(std::move(bp));
      }
    return std::optional<std::vector<BalancedPair>>(std::move(pairs));
  };
  bool on_wall = R.is_zero();
  for (const auto& w : d.walls)
    if (w.contains(d.fd, R)) on_wall = true;
  if (!on_wall) {
    try {
      return *collect(R, std::nullopt, 0);
    } catch (const NonGenericError&) {
    }
  }
  auto rays = support_rays(d);
  std::size_t j = chamber_of(d, R);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    RatPoint v = chamber_point(rays, j, attempt);
    v = (Rat(1) / (abs_rat(v[0]) + abs_rat(v[1]))) * v;
    for (Rat eps = Rat(1, 8); eps > Rat(1, 1 << 24); eps /= 8) {
      try {
        if (auto res = collect(R + eps * v, v, eps)) return *res;
      } catch (const NonGenericError&) {
        break;
      }
    }
  }
  throw NonGenericError("balanced_pairs: no stable perturbation near " + to_string(r));
}

}  // namespace csd
