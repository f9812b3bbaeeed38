// csd: command-line front-end for rank-2 cluster scattering diagrams.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "csd/brokenline.hpp"
#include "csd/constructions.hpp"
#include "csd/convexity.hpp"
#include "csd/scattering.hpp"
#include "io.hpp"
#include "render.hpp"

namespace {

using csd::io::json;

constexpr int kOk = 0;
constexpr int kVerdictFalse = 1;
constexpr int kInputError = 2;

struct Options {
  std::string seed, diagram, out, direction, endpoint, p, q, pair, line, segment, tau, points, polygon;
  std::string broken_lines, segments, polygons, extent;
  long order = 0, max_degree = 4, trials = 50, a = 0, b = 0, lambda = 1;
  std::uint64_t perturb_seed = 1;
  bool incoming_only = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    csd::io::write_file(o.out, text);
  }
}

csd::Diagram load_diagram(const Options& o) { return csd::io::diagram_from(csd::io::read_file(o.diagram)); }

long order_or(const Options& o, const csd::Diagram& d) { return o.order > 0 ? o.order : d.order; }

template <class T, class F>
std::vector<T> load_list(const std::string& path, F&& from) {
  std::vector<T> out;
  if (path.empty()) return out;
  json j = csd::io::read_file(path);
  if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (const auto& x : j) out.push_back(from(x));
  } else if (j.is_object()) {
    out.push_back(from(j));
  } else {
    throw csd::InputError(path + ": expected an object or a list of objects");
  }
  return out;
}

int cmd_build(const Options& o) {
  if (o.order < 1) throw csd::InputError("build: --order must be at least 1");
  auto doc = csd::io::seed_from(csd::io::read_file(o.seed));
  auto [fd, seed] = doc.fixed_data();
  if (fd.rank() != 2) throw csd::InputError("build: completion is implemented for rank 2 only");
  auto d = csd::complete_rank2(csd::initial_diagram(fd, seed, o.order), o.order);
  emit(o, csd::io::dump(csd::io::to_json(d)));
  return kOk;
}

int cmd_theta(const Options& o) {
  auto d = load_diagram(o);
  long K = order_or(o, d);
  auto m = csd::parse_lattice_point(o.direction);
  auto z = csd::parse_rat_point(o.endpoint);
  auto lines = csd::enumerate(d, m, z, K);
  std::cout << csd::theta(d, m, z, K).str() << "\n";
  if (!o.out.empty()) {
    json j = json::array();
    for (const auto& g : lines) j.push_back(csd::io::to_json(g));
    csd::io::write_file(o.out, csd::io::dump(j));
  }
  return kOk;
}

int cmd_multiply(const Options& o) {
  auto d = load_diagram(o);
  long K = order_or(o, d);
  auto terms = csd::multiply(d, csd::parse_lattice_point(o.p), csd::parse_lattice_point(o.q), K);
  std::string table;
  for (const auto& t : terms) table += "r=" + csd::to_string(t.r) + ": " + csd::to_string(t.coeff) + "\n";
  std::cout << table;
  if (!o.out.empty()) csd::io::write_file(o.out, csd::io::dump(csd::io::to_json(terms)));
  return kOk;
}

int cmd_segment_from_pair(const Options& o) {
  auto d = load_diagram(o);
  if (o.a < 1 || o.b < 1) throw csd::InputError("segment-from-pair: -a and -b must be positive");
  json j;
  if (!o.pair.empty()) {
    auto g = csd::glue_balanced(d, csd::io::pair_from(csd::io::read_file(o.pair)), o.a, o.b);
    j["segment"] = csd::io::to_json(g.segment);
    j["side1"] = csd::io::to_json(g.side1);
    j["side2"] = csd::io::to_json(g.side2);
    j["split_time"] = csd::io::to_json(g.split_time);
  } else if (!o.line.empty()) {
    auto r = csd::attach_monomials(d, csd::io::broken_line_from(csd::io::read_file(o.line)), o.a, o.b, o.lambda);
    j["segment"] = csd::io::to_json(r.segment);
    j["trace"] = csd::io::to_json(r.trace);
  } else {
    throw csd::InputError("segment-from-pair: give --pair or --line");
  }
  emit(o, csd::io::dump(j));
  return kOk;
}

int cmd_pair_from_segment(const Options& o) {
  auto d = load_diagram(o);
  auto s = csd::io::segment_from(csd::io::read_file(o.segment));
  auto r = csd::pair_from_segment(d, s, csd::parse_rat(o.tau), o.a, o.b);
  json j;
  j["pair"] = csd::io::to_json(r.pair);
  j["trace"] = csd::io::to_json(r.trace);
  emit(o, csd::io::dump(j));
  return kOk;
}

int cmd_hull(const Options& o) {
  auto d = load_diagram(o);
  auto pts = csd::io::point_set_from(csd::io::read_file(o.points));
  auto h = csd::blc_hull_2d(d, pts.points);
  if (!h.exact) std::cerr << "warning: hull is not certified (charts did not close or no fixpoint)\n";
  emit(o, csd::io::dump(csd::io::to_json(h.hull)));
  return kOk;
}

int verdict_code(const csd::CheckReport& r) { return r.verdict == csd::Verdict::False ? kVerdictFalse : kOk; }

int cmd_check_positive(const Options& o) {
  auto d = load_diagram(o);
  auto S = csd::io::point_set_from(csd::io::read_file(o.polygon));
  auto r = csd::check_positive(d, S, o.max_degree, order_or(o, d));
  emit(o, csd::io::dump(csd::io::to_json(r)));
  return verdict_code(r);
}

int cmd_check_blc(const Options& o) {
  auto d = load_diagram(o);
  auto S = csd::io::point_set_from(csd::io::read_file(o.polygon));
  csd::BlcOptions opt;
  opt.incoming_only = o.incoming_only;
  opt.seed = o.perturb_seed;
  auto r = csd::is_blc_2d(d, S, order_or(o, d), opt);
  emit(o, csd::io::dump(csd::io::to_json(r)));
  return verdict_code(r);
}

int cmd_harness(const Options& o) {
  auto d = load_diagram(o);
  if (o.trials < 1) throw csd::InputError("harness: --trials must be positive");
  auto r = csd::main_theorem_harness(d, static_cast<std::size_t>(o.trials), o.max_degree, order_or(o, d),
                                     o.perturb_seed);
  emit(o, csd::io::dump(csd::io::to_json(r)));
  std::cerr << "agreements " << r.agreements << ", disagreements " << r.disagreements << ", undecided "
            << r.undecided << "\n";
  return r.disagreements == 0 ? kOk : kVerdictFalse;
}

int cmd_render(const Options& o) {
  auto d = load_diagram(o);
  csd::svg::Overlays ov;
  ov.lines = load_list<csd::BrokenLine>(o.broken_lines, csd::io::broken_line_from);
  ov.segments = load_list<csd::Segment>(o.segments, csd::io::segment_from);
  if (!o.polygons.empty()) {
    json j = csd::io::read_file(o.polygons);
    // One polygon or a list of polygons.
    bool many = j.is_array() && !j.empty() && j.front().is_array() && !j.front().empty() && j.front().front().is_array();
    if (many) {
      for (const auto& p : j) ov.polygons.push_back(csd::io::point_set_from(p).points);
    } else {
      ov.polygons.push_back(csd::io::point_set_from(j).points);
    }
  }
  csd::Rat extent = o.extent.empty() ? csd::Rat(0) : csd::parse_rat(o.extent);
  emit(o, csd::svg::render(d, ov, extent));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with rank-2 cluster scattering diagrams"};
  app.require_subcommand(1);
  Options o;

  auto diagram_opts = [&](CLI::App* c) {
    c->add_option("--diagram", o.diagram, "diagram JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--order", o.order, "truncation order K (default: the diagram's)");
    c->add_option("--out", o.out, "output file (default: standard output)");
  };

  auto* build = app.add_subcommand("build", "complete the scattering diagram of a seed");
  build->add_option("--seed", o.seed, "seed JSON")->required()->check(CLI::ExistingFile);
  build->add_option("--order", o.order, "truncation order K")->required();
  build->add_option("--out", o.out, "output file (default: standard output)");

  auto* theta = app.add_subcommand("theta", "theta function at a generic endpoint");
  diagram_opts(theta);
  theta->add_option("--direction", o.direction, "initial exponent, e.g. -1,0")->required();
  theta->add_option("--endpoint", o.endpoint, "generic endpoint, e.g. 2,1")->required();
  theta->get_option("--out")->description("write the broken lines as JSON");

  auto* mult = app.add_subcommand("multiply", "structure constants of a theta function product");
  diagram_opts(mult);
  mult->add_option("-p", o.p, "first exponent")->required();
  mult->add_option("-q", o.q, "second exponent")->required();
  mult->get_option("--out")->description("also write the table as JSON");

  auto* s2p = app.add_subcommand("segment-from-pair", "broken line segment from a balanced pair or one line");
  diagram_opts(s2p);
  s2p->add_option("--pair", o.pair, "balanced pair JSON")->check(CLI::ExistingFile);
  s2p->add_option("--line", o.line, "single broken line JSON")->check(CLI::ExistingFile);
  s2p->add_option("-a", o.a, "first weight")->required();
  s2p->add_option("-b", o.b, "second weight")->required();
  s2p->add_option("--lambda", o.lambda, "scale for a single line");

  auto* p2s = app.add_subcommand("pair-from-segment", "balanced pair from a broken line segment");
  diagram_opts(p2s);
  p2s->add_option("--segment", o.segment, "segment JSON")->required()->check(CLI::ExistingFile);
  p2s->add_option("--tau", o.tau, "split time, e.g. 5/2")->required();
  p2s->add_option("-a", o.a, "first weight (default: minimal admissible)");
  p2s->add_option("-b", o.b, "second weight (default: minimal admissible)");

  auto* hull = app.add_subcommand("hull", "broken line convex hull of a point set");
  diagram_opts(hull);
  hull->add_option("--points", o.points, "point list JSON")->required()->check(CLI::ExistingFile);

  auto* pos = app.add_subcommand("check-positive", "bounded positivity check of a polygon");
  diagram_opts(pos);
  pos->add_option("--polygon", o.polygon, "polygon JSON")->required()->check(CLI::ExistingFile);
  pos->add_option("--max-degree", o.max_degree, "largest a+b checked");

  auto* blc = app.add_subcommand("check-blc", "broken line convexity of a polygon");
  diagram_opts(blc);
  blc->add_option("--polygon", o.polygon, "polygon JSON")->required()->check(CLI::ExistingFile);
  blc->add_flag("--incoming-only", o.incoming_only, "straighten only at images of the initial walls");
  blc->add_option("--perturb-seed", o.perturb_seed, "seed of the spot-check generator");

  auto* harness = app.add_subcommand("harness", "compare positivity and convexity on random polygons");
  diagram_opts(harness);
  harness->add_option("--trials", o.trials, "number of polygons");
  harness->add_option("--max-degree", o.max_degree, "largest a+b checked")->default_val(3);
  harness->add_option("--perturb-seed", o.perturb_seed, "seed of the polygon generator");

  auto* render = app.add_subcommand("render", "SVG picture of a diagram with overlays");
  diagram_opts(render);
  render->add_option("--broken-lines", o.broken_lines, "broken line JSON (one or a list)")->check(CLI::ExistingFile);
  render->add_option("--segments", o.segments, "segment JSON (one or a list)")->check(CLI::ExistingFile);
  render->add_option("--polygons", o.polygons, "polygon JSON (one or a list)")->check(CLI::ExistingFile);
  render->add_option("--extent", o.extent, "half-width of the square viewport");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*build) return cmd_build(o);
    if (*theta) return cmd_theta(o);
    if (*mult) return cmd_multiply(o);
    if (*s2p) return cmd_segment_from_pair(o);
    if (*p2s) return cmd_pair_from_segment(o);
    if (*hull) return cmd_hull(o);
    if (*pos) return cmd_check_positive(o);
    if (*blc) return cmd_check_blc(o);
    if (*harness) return cmd_harness(o);
    if (*render) return cmd_render(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
