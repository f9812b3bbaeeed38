#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csd/brokenline.hpp"
#include "csd/constructions.hpp"
#include "csd/convexity.hpp"
#include "csd/scattering.hpp"
#include "json.hpp"

namespace csd::io {

using json = nlohmann::json;

// Canonical text of a JSON value: sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);
json parse(const std::string& text);
json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

json to_json(const Rat& x);
json to_json(const LatticePoint& m);
json to_json(const RatPoint& x);
Rat rat_from(const json& j);
LatticePoint lattice_from(const json& j);
RatPoint point_from(const json& j);

// The seed document: rank, unfrozen indices, multipliers, exchange matrix, principal flag.
struct SeedDoc {
  std::size_t rank = 2;
  std::vector<int> unfrozen;
  std::vector<Int> d;
  std::vector<std::vector<Int>> exchange;
  bool principal = false;

  std::pair<FixedData, Seed> fixed_data() const;
};

json to_json(const SeedDoc& s);
SeedDoc seed_from(const json& j);

json to_json(const WallFunction& f);
WallFunction wall_function_from(const json& j);
json to_json(const Diagram& d);
Diagram diagram_from(const json& j);

json to_json(const BrokenLine& g);
BrokenLine broken_line_from(const json& j);
json to_json(const Segment& s);
Segment segment_from(const json& j);
json to_json(const BalancedPair& p);
BalancedPair pair_from(const json& j);

// A polygon is a bare counterclockwise vertex list; a finite set is {"kind":"finite","points":[...]}.
json to_json(const RationalPointSet& s);
RationalPointSet point_set_from(const json& j);

json to_json(const ConstructionTrace& t);
json to_json(const ReverseTrace& t);
json to_json(const CheckReport& r);
json to_json(const HarnessReport& r);
json to_json(const std::vector<ProductTerm>& terms);

}  // namespace csd::io
