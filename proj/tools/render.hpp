#pragma once

#include <string>
#include <vector>

#include "csd/brokenline.hpp"
#include "csd/scattering.hpp"

namespace csd::svg {

struct Overlays {
  std::vector<BrokenLine> lines;
  std::vector<Segment> segments;
  std::vector<std::vector<RatPoint>> polygons;
};

// "1 + 2 z^(-2,2) + O(7)"
std::string wall_label(const WallFunction& f);
// Decimal rendering of a rational to three places, rounded half up, trailing zeros dropped.
std::string decimal(const Rat& x);

// Walls, chambers and overlays in the square [-extent, extent]^2; extent 0 picks it from the
// overlays (at least 3).
std::string render(const Diagram& d, const Overlays& o, const Rat& extent = 0);

}  // namespace csd::svg
