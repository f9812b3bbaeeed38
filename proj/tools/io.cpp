#include "io.hpp"

#include <fstream>
#include <sstream>

namespace csd::io {

namespace {

template <class T, class F>
json array_of(const std::vector<T>& xs, F&& f) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(f(x));
  return a;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing JSON field \"") + key + "\"");
  return j.at(key);
}

Int int_from(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) {
    Rat x = parse_rat(j.get<std::string>());
    if (x.get_den() != 1) throw InputError("expected an integer, got " + j.get<std::string>());
    return x.get_num();
  }
  throw InputError("expected an integer");
}

json int_json(const Int& x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(to_string(x));
}

json opt_point(const std::optional<RatPoint>& x) { return x ? to_json(*x) : json(nullptr); }

std::optional<RatPoint> opt_point_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return point_from(j);
}

}  // namespace

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

json to_json(const Rat& x) { return json(to_string(x)); }

json to_json(const LatticePoint& m) { return array_of(m.c, int_json); }

json to_json(const RatPoint& x) {
  return array_of(x.c, [](const Rat& r) { return to_json(r); });
}

Rat rat_from(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw InputError("expected a rational as \"num/den\"");
}

LatticePoint lattice_from(const json& j) {
  if (!j.is_array()) throw InputError("expected an integer vector");
  std::vector<Int> c;
  for (const auto& x : j) c.push_back(int_from(x));
  return LatticePoint(std::move(c));
}

RatPoint point_from(const json& j) {
  if (!j.is_array()) throw InputError("expected a rational vector");
  std::vector<Rat> c;
  for (const auto& x : j) c.push_back(rat_from(x));
  return RatPoint(std::move(c));
}

std::pair<FixedData, Seed> SeedDoc::fixed_data() const {
  if (d.size() != rank || exchange.size() != rank) throw InputError("seed: dimension mismatch");
  for (const auto& row : exchange)
    if (row.size() != rank) throw InputError("seed: exchange matrix is not square");
  FixedData fd = FixedData::from_exchange(exchange, d, unfrozen);
  Seed s = Seed::standard(rank);
  if (principal) return with_principal_coefficients(fd, s);
  return {fd, s};
}

json to_json(const SeedDoc& s) {
  json j;
  j["rank"] = s.rank;
  j["unfrozen"] = s.unfrozen;
  j["d"] = array_of(s.d, int_json);
  j["exchange"] = array_of(s.exchange, [](const std::vector<Int>& row) { return array_of(row, int_json); });
  j["principal"] = s.principal;
  return j;
}

SeedDoc seed_from(const json& j) {
  SeedDoc s;
  s.rank = field(j, "rank").get<std::size_t>();
  for (const auto& x : field(j, "d")) s.d.push_back(int_from(x));
  for (const auto& row : field(j, "exchange")) {
    std::vector<Int> r;
    for (const auto& x : row) r.push_back(int_from(x));
    s.exchange.push_back(std::move(r));
  }
  if (j.contains("unfrozen")) {
    s.unfrozen = j.at("unfrozen").get<std::vector<int>>();
  } else {
    for (std::size_t i = 0; i < s.rank; ++i) s.unfrozen.push_back(static_cast<int>(i));
  }
  s.principal = j.value("principal", false);
  return s;
}

json to_json(const WallFunction& f) {
  json j;
  j["dir"] = to_json(f.dir);
  j["unit"] = f.unit;
  j["coeffs"] = array_of(f.coeffs, [](const Rat& c) { return to_json(c); });
  j["order"] = f.exact() ? json(nullptr) : json(f.order);
  return j;
}

WallFunction wall_function_from(const json& j) {
  WallFunction f;
  f.dir = lattice_from(field(j, "dir"));
  f.unit = j.value("unit", 1L);
  for (const auto& c : field(j, "coeffs")) f.coeffs.push_back(rat_from(c));
  const json& o = j.contains("order") ? j.at("order") : json(nullptr);
  f.order = o.is_null() ? kExact : o.get<long>();
  return f;
}

json to_json(const Diagram& d) {
  json fd;
  std::size_t n = d.fd.rank();
  json skew = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < n; ++k) row.push_back(to_json(d.fd.skew(i, k)));
    skew.push_back(row);
  }
  fd["skew"] = skew;
  fd["d"] = array_of(d.fd.d(), int_json);
  fd["unfrozen"] = d.fd.unfrozen();
  fd["monoid_gens"] = array_of(d.fd.monoid_gens(), [](const LatticePoint& m) { return to_json(m); });
  json j;
  j["fixed_data"] = fd;
  j["seed"] = array_of(d.seed.basis, [](const LatticePoint& m) { return to_json(m); });
  j["order"] = d.order;
  j["saturated"] = d.saturated;
  json walls = json::array();
  for (const auto& w : d.walls) {
    json jw;
    jw["normal"] = to_json(w.normal);
    jw["support"] = w.line ? json{{"kind", "line"}} : json{{"kind", "ray"}, {"dir", to_json(w.ray)}};
    jw["func"] = to_json(w.func);
    walls.push_back(jw);
  }
  j["walls"] = walls;
  return j;
}

Diagram diagram_from(const json& j) {
  Diagram d;
  const json& fd = field(j, "fixed_data");
  std::vector<std::vector<Rat>> skew;
  for (const auto& row : field(fd, "skew")) {
    std::vector<Rat> r;
    for (const auto& x : row) r.push_back(rat_from(x));
    skew.push_back(std::move(r));
  }
  std::vector<Int> dd;
  for (const auto& x : field(fd, "d")) dd.push_back(int_from(x));
  std::vector<LatticePoint> gens;
  if (fd.contains("monoid_gens"))
    for (const auto& g : fd.at("monoid_gens")) gens.push_back(lattice_from(g));
  if (skew.size() != dd.size()) throw InputError("diagram: dimension mismatch");
  d.fd = FixedData(skew, dd, field(fd, "unfrozen").get<std::vector<int>>(), gens);
  if (j.contains("seed")) {
    for (const auto& b : j.at("seed")) d.seed.basis.push_back(lattice_from(b));
  } else {
    d.seed = Seed::standard(dd.size());
  }
  d.order = field(j, "order").get<long>();
  d.saturated = j.value("saturated", false);
  for (const auto& jw : field(j, "walls")) {
    Wall w;
    w.normal = lattice_from(field(jw, "normal"));
    const json& sup = field(jw, "support");
    std::string kind = field(sup, "kind").get<std::string>();
    if (kind == "line") {
      w.line = true;
    } else if (kind == "ray") {
      w.line = false;
      w.ray = lattice_from(field(sup, "dir"));
    } else {
      throw InputError("diagram: unknown support kind " + kind);
    }
    w.func = wall_function_from(field(jw, "func"));
    if (w.normal.rank() != dd.size() || w.func.dir.rank() != dd.size()) throw InputError("diagram: dimension mismatch");
    d.walls.push_back(std::move(w));
  }
  return d;
}

json to_json(const BrokenLine& g) {
  json j;
  j["initial"] = to_json(g.initial);
  j["endpoint"] = to_json(g.endpoint);
  j["perturbation"] = opt_point(g.perturbation);
  j["pieces"] = array_of(g.pieces, [](const Piece& p) {
    return json{{"exponent", to_json(p.exponent)}, {"coeff", to_json(p.coeff)}, {"bend_point", opt_point(p.bend_point)}};
  });
  return j;
}

BrokenLine broken_line_from(const json& j) {
  BrokenLine g;
  g.initial = lattice_from(field(j, "initial"));
  g.endpoint = point_from(field(j, "endpoint"));
  if (j.contains("perturbation")) g.perturbation = opt_point_from(j.at("perturbation"));
  for (const auto& jp : field(j, "pieces")) {
    Piece p;
    p.exponent = lattice_from(field(jp, "exponent"));
    p.coeff = jp.contains("coeff") ? rat_from(jp.at("coeff")) : Rat(1);
    if (jp.contains("bend_point")) p.bend_point = opt_point_from(jp.at("bend_point"));
    g.pieces.push_back(std::move(p));
  }
  if (g.pieces.empty()) throw InputError("broken line has no pieces");
  return g;
}

json to_json(const Segment& s) {
  json j;
  j["start"] = to_json(s.start);
  j["end"] = to_json(s.end);
  j["total_time"] = to_json(s.total_time);
  j["pieces"] = array_of(s.pieces, [](const SegmentPiece& p) {
    return json{{"exponent", to_json(p.exponent)}, {"coeff", to_json(p.coeff)}, {"duration", to_json(p.duration)}};
  });
  return j;
}

Segment segment_from(const json& j) {
  Segment s;
  s.start = point_from(field(j, "start"));
  s.end = point_from(field(j, "end"));
  s.total_time = rat_from(field(j, "total_time"));
  for (const auto& jp : field(j, "pieces")) {
    SegmentPiece p;
    p.exponent = lattice_from(field(jp, "exponent"));
    p.coeff = jp.contains("coeff") ? rat_from(jp.at("coeff")) : Rat(1);
    p.duration = rat_from(field(jp, "duration"));
    s.pieces.push_back(std::move(p));
  }
  if (s.pieces.empty()) throw InputError("segment has no pieces");
  return s;
}

json to_json(const BalancedPair& p) {
  return json{{"line1", to_json(p.line1)}, {"line2", to_json(p.line2)}, {"base", to_json(p.base)}};
}

BalancedPair pair_from(const json& j) {
  return {broken_line_from(field(j, "line1")), broken_line_from(field(j, "line2")), point_from(field(j, "base"))};
}

json to_json(const RationalPointSet& s) {
  json pts = array_of(s.points, [](const RatPoint& x) { return to_json(x); });
  if (s.kind == SetKind::Polygon) return pts;
  return json{{"kind", "finite"}, {"points", pts}};
}

RationalPointSet point_set_from(const json& j) {
  RationalPointSet s;
  const json* pts = &j;
  if (j.is_object()) {
    std::string kind = j.value("kind", std::string("polygon"));
    if (kind == "finite") {
      s.kind = SetKind::Finite;
    } else if (kind != "polygon") {
      throw InputError("point set: unknown kind " + kind);
    }
    pts = &field(j, "points");
  }
  if (!pts->is_array() || pts->empty()) throw InputError("point set: expected a nonempty vertex list");
  for (const auto& x : *pts) {
    RatPoint p = point_from(x);
    if (p.rank() != 2) throw InputError("point set: points must have two coordinates");
    s.points.push_back(std::move(p));
  }
  return s;
}

json to_json(const ConstructionTrace& t) {
  json j;
  j["rho"] = array_of(t.rho, int_json);
  j["C"] = array_of(t.C, int_json);
  j["xt"] = array_of(t.xt, [](const RatPoint& x) { return to_json(x); });
  j["mt"] = array_of(t.mt, [](const LatticePoint& m) { return to_json(m); });
  j["times"] = array_of(t.times, [](const Rat& x) { return to_json(x); });
  j["tau"] = to_json(t.tau);
  j["beta"] = int_json(t.beta);
  return j;
}

json to_json(const ReverseTrace& t) {
  auto pts = [](const std::vector<LatticePoint>& v) { return array_of(v, [](const LatticePoint& m) { return to_json(m); }); };
  auto rats = [](const std::vector<Rat>& v) { return array_of(v, [](const Rat& x) { return to_json(x); }); };
  json j;
  j["split_index"] = t.split_index;
  j["delta"] = to_json(t.delta);
  j["mt1"] = pts(t.mt1);
  j["mt2"] = pts(t.mt2);
  j["m1"] = pts(t.m1);
  j["m2"] = pts(t.m2);
  j["rho1"] = array_of(t.rho1, int_json);
  j["rho2"] = array_of(t.rho2, int_json);
  j["t1"] = rats(t.t1);
  j["t2"] = rats(t.t2);
  j["T"] = to_json(t.T);
  j["tau"] = to_json(t.tau);
  j["a"] = int_json(t.a);
  j["b"] = int_json(t.b);
  j["hypotheses_hold"] = t.hypotheses_hold;
  return j;
}

json to_json(const CheckReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["bounded"] = r.bounded;
  j["degree_checked"] = r.degree_checked;
  j["order_checked"] = r.order_checked;
  j["charts_checked"] = r.charts_checked;
  j["notes"] = r.notes;
  j["positivity_witnesses"] = array_of(r.positivity_witnesses, [](const PositivityWitness& w) {
    return json{{"p", to_json(w.p)}, {"q", to_json(w.q)}, {"r", to_json(w.r)},
                {"a", w.a},          {"b", w.b},          {"alpha", to_json(w.alpha)}};
  });
  j["segment_witnesses"] = array_of(r.segment_witnesses, [](const Segment& s) { return to_json(s); });
  return j;
}

json to_json(const HarnessReport& r) {
  json j;
  j["agreements"] = r.agreements;
  j["disagreements"] = r.disagreements;
  j["undecided"] = r.undecided;
  j["trials"] = array_of(r.trials, [](const HarnessTrial& t) {
    return json{{"polygon", to_json(t.polygon)},
                {"origin", t.origin},
                {"positive", to_string(t.positive)},
                {"convex", to_string(t.convex)},
                {"positivity", to_json(t.positivity)},
                {"convexity", to_json(t.convexity)}};
  });
  return j;
}

json to_json(const std::vector<ProductTerm>& terms) {
  return array_of(terms, [](const ProductTerm& t) {
    return json{{"r", to_json(t.r)}, {"alpha", to_json(t.coeff)}, {"certified", t.certified}};
  });
}

}  // namespace csd::io
