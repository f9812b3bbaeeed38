#include "render.hpp"

#include <algorithm>
#include <sstream>

namespace csd::svg {

namespace {

constexpr long kPixels = 600;

Rat max_abs(const RatPoint& x) { return std::max<Rat>(abs_rat(x[0]), abs_rat(x[1])); }

// Scales a direction to sup-norm len.
RatPoint reach(const RatPoint& u, const Rat& len) { return (len / max_abs(u)) * u; }

struct View {
  Rat extent;
  std::string x(const RatPoint& p) const { return decimal((p[0] + extent) / (2 * extent) * kPixels); }
  std::string y(const RatPoint& p) const { return decimal((extent - p[1]) / (2 * extent) * kPixels); }
  std::string xy(const RatPoint& p) const { return x(p) + "," + y(p); }
};

std::string monomial(const Rat& c, const LatticePoint& m) {
  std::string e = "z^" + to_string(m);
  if (c == 1) return e;
  return to_string(c) + " " + e;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') {
      out += "&lt;";
    } else if (ch == '>') {
      out += "&gt;";
    } else if (ch == '&') {
      out += "&amp;";
    } else {
      out += ch;
    }
  }
  return out;
}

std::string points_attr(const View& v, const std::vector<RatPoint>& pts) {
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + v.xy(pts[i]);
  return s;
}

void extend(Rat& e, const RatPoint& p) { e = std::max<Rat>(e, max_abs(p)); }

}  // namespace

std::string decimal(const Rat& x) {
  Rat scaled = x * 1000 + Rat(1, 2);
  Int n = floor_rat(scaled);
  bool neg = n < 0;
  if (neg) n = -n;
  Int whole = n / 1000, frac = n % 1000;
  std::string f = to_string(frac);
  while (f.size() < 3) f = "0" + f;
  while (!f.empty() && f.back() == '0') f.pop_back();
  std::string out = (neg ? "-" : "") + to_string(whole);
  if (!f.empty()) out += "." + f;
  return out;
}

std::string wall_label(const WallFunction& f) {
  std::string s = "1";
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    if (f.coeffs[k] == 0) continue;
    s += " + " + monomial(f.coeffs[k], Int(static_cast<long>(k + 1)) * f.dir);
  }
  if (!f.exact()) s += " + O(" + std::to_string(f.order + 1) + ")";
  return s;
}

std::string render(const Diagram& d, const Overlays& o, const Rat& extent) {
  if (d.fd.rank() != 2) throw InputError("render: rank 2 only");
  View v{extent};
  if (v.extent <= 0) {
    v.extent = 3;
    for (const auto& g : o.lines) {
      extend(v.extent, g.endpoint);
      for (const auto& p : g.pieces)
        if (p.bend_point) extend(v.extent, *p.bend_point);
    }
    for (const auto& s : o.segments)
      for (const auto& p : s.vertices()) extend(v.extent, p);
    for (const auto& poly : o.polygons)
      for (const auto& p : poly) extend(v.extent, p);
    v.extent = Rat(ceil_rat(v.extent * Rat(6, 5)));
  }
  Rat far = 4 * v.extent;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPixels << "\" height=\"" << kPixels
      << "\" viewBox=\"0 0 " << kPixels << " " << kPixels << "\">\n";
  out << "<style>.chamber{fill:none;stroke:none}.wall{stroke:#333;stroke-width:1.5}"
         ".label{font:11px sans-serif}.broken-line{fill:none;stroke:#c33;stroke-width:1.5}"
         ".segment{fill:none;stroke:#36c;stroke-width:1.5}.polygon{fill:#9c6;fill-opacity:0.3;stroke:#693}</style>\n";
  RatPoint origin{0, 0};
  // Chambers are the sectors between consecutive support rays.
  auto rays = support_rays(d);
  if (rays.empty()) {
    out << "<rect class=\"chamber\" x=\"0\" y=\"0\" width=\"" << kPixels << "\" height=\"" << kPixels << "\"/>\n";
  }
  for (std::size_t j = 0; j < rays.size(); ++j) {
    RatPoint a(rays[j]), b(rays[(j + 1) % rays.size()]);
    std::vector<RatPoint> pts{origin, reach(a, far)};
    // Sectors of 180 degrees or more need intermediate corners.
    RatPoint cur = a;
    for (int k = 0; k < 4 && cross(cur, b) <= 0; ++k) {
      cur = rot90(cur);
      pts.push_back(reach(cur, far));
    }
    pts.push_back(reach(b, far));
    out << "<polygon class=\"chamber\" points=\"" << points_attr(v, pts) << "\"/>\n";
  }
  for (const auto& w : d.walls) {
    RatPoint u(w.line ? perp_direction(d.fd, w.normal) : w.ray);
    RatPoint from = w.line ? reach(-u, far) : origin;
    RatPoint to = reach(u, far);
    out << "<line class=\"wall\" x1=\"" << v.x(from) << "\" y1=\"" << v.y(from) << "\" x2=\"" << v.x(to)
        << "\" y2=\"" << v.y(to) << "\"/>\n";
    RatPoint at = reach(u, Rat(17, 20) * v.extent);
    out << "<text class=\"label\" x=\"" << v.x(at) << "\" y=\"" << v.y(at) << "\">" << escape(wall_label(w.func))
        << "</text>\n";
  }
  for (const auto& poly : o.polygons)
    out << "<polygon class=\"polygon\" points=\"" << points_attr(v, poly) << "\"/>\n";
  for (const auto& g : o.lines) {
    std::vector<RatPoint> pts;
    RatPoint first = g.pieces.front().bend_point ? *g.pieces.front().bend_point : g.endpoint;
    pts.push_back(first + reach(RatPoint(g.pieces.front().exponent), far));
    for (const auto& p : g.pieces)
      if (p.bend_point) pts.push_back(*p.bend_point);
    pts.push_back(g.endpoint);
    out << "<polyline class=\"broken-line\" points=\"" << points_attr(v, pts) << "\"/>\n";
    out << "<text class=\"label\" x=\"" << v.x(g.endpoint) << "\" y=\"" << v.y(g.endpoint) << "\">"
        << escape(monomial(g.coeff(), g.final_exponent())) << "</text>\n";
  }
  for (const auto& s : o.segments) {
    out << "<polyline class=\"segment\" points=\"" << points_attr(v, s.vertices()) << "\"/>\n";
    out << "<text class=\"label\" x=\"" << v.x(s.end) << "\" y=\"" << v.y(s.end) << "\">"
        << escape(monomial(s.pieces.back().coeff, s.pieces.back().exponent)) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace csd::svg
