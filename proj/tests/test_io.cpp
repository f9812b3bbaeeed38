#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>

#include "csd/constructions.hpp"
#include "fixtures.hpp"
#include "io.hpp"
#include "render.hpp"

namespace csd {
namespace {

namespace fs = std::filesystem;

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

template <class T, class From>
void expect_round_trip(const T& value, From from) {
  std::string text = io::dump(io::to_json(value));
  T back = from(io::parse(text));
  EXPECT_TRUE(back == value);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Json, RationalsPrintExactly) {
  EXPECT_EQ(io::to_json(rat(-3, 2)), "-3/2");
  EXPECT_EQ(io::to_json(Rat(4)), "4");
  EXPECT_EQ(io::rat_from(io::json("6/4")), rat(3, 2));
  EXPECT_EQ(io::rat_from(io::json(5)), 5);
  EXPECT_THROW(io::rat_from(io::json("1/0")), InputError);
  EXPECT_THROW(io::rat_from(io::json("one")), InputError);
  EXPECT_EQ(io::point_from(io::parse(R"(["1/3", 2])")), (RatPoint{rat(1, 3), 2}));
}

TEST(Json, CanonicalTextIsSortedAndStable) {
  io::json j = io::parse(R"({"b": 1, "a": [2, 3]})");
  EXPECT_EQ(io::dump(j), "{\n  \"a\": [\n    2,\n    3\n  ],\n  \"b\": 1\n}\n");
  EXPECT_THROW(io::parse("{bad"), InputError);
}

TEST(Json, DiagramsRoundTrip) {
  for (const Diagram* d : {&test::a2(5), &test::g2(9), &test::g2(10), &test::kronecker(6)})
    expect_round_trip(*d, [](const io::json& j) { return io::diagram_from(j); });
}

TEST(Json, WallFunctionsKeepTheirOrder) {
  WallFunction exact = WallFunction::binomial(LatticePoint{-1, 1}, 2);
  EXPECT_TRUE(io::to_json(exact).at("order").is_null());
  WallFunction cut(LatticePoint{-2, 2}, 2, {Rat(2), Rat(3), Rat(4)}, 6);
  EXPECT_EQ(io::to_json(cut).at("order"), 6);
  expect_round_trip(cut, [](const io::json& j) { return io::wall_function_from(j); });
}

TEST(Json, LinesSegmentsAndPairsRoundTrip) {
  const Diagram& d = test::g2(10);
  for (const auto& g : enumerate(d, LatticePoint{1, 0}, RatPoint{rat(-1, 3), rat(7, 2)}, 6))
    expect_round_trip(g, [](const io::json& j) { return io::broken_line_from(j); });
  for (const auto& pair : balanced_pairs(d, LatticePoint{1, 0}, LatticePoint{-1, 0}, LatticePoint{0, 3}, 8)) {
    expect_round_trip(pair, [](const io::json& j) { return io::pair_from(j); });
    expect_round_trip(glue_balanced(d, pair, 1, 1).segment, [](const io::json& j) { return io::segment_from(j); });
  }
}

TEST(Json, PointSetsRoundTrip) {
  RationalPointSet poly{SetKind::Polygon, test::g2_hull()};
  RationalPointSet finite{SetKind::Finite, {RatPoint{1, -1}, RatPoint{2, -2}}};
  expect_round_trip(poly, [](const io::json& j) { return io::point_set_from(j); });
  expect_round_trip(finite, [](const io::json& j) { return io::point_set_from(j); });
  EXPECT_TRUE(io::to_json(poly).is_array());
}

TEST(Json, SeedDocuments) {
  io::SeedDoc s = io::seed_from(io::parse(R"({"rank": 2, "d": [1, 3], "exchange": [[0, 3], [-1, 0]]})"));
  EXPECT_EQ(s.unfrozen, (std::vector<int>{0, 1}));
  auto [fd, seed] = s.fixed_data();
  EXPECT_TRUE(fd == test::g2_data());
  EXPECT_THROW(io::seed_from(io::parse(R"({"rank": 2, "exchange": []})")), InputError);
}

TEST(Svg, A2DiagramHasThreeWallsAndFiveChambers) {
  std::string svg = svg::render(test::a2(5), {});
  EXPECT_EQ(count_of(svg, "class=\"wall\""), 3u);
  EXPECT_EQ(count_of(svg, "class=\"chamber\""), 5u);
  EXPECT_EQ(count_of(svg, "<polyline"), 0u);
  EXPECT_NE(svg.find("1 + z^(-1,1)"), std::string::npos);
  EXPECT_EQ(svg, svg::render(test::a2(5), {}));
}

TEST(Svg, OverlaysAndLabels) {
  const Diagram& d = test::a2(5);
  svg::Overlays o;
  o.lines = enumerate(d, LatticePoint{-1, 0}, RatPoint{2, 1}, 5);
  o.polygons = {test::a2_pentagon()};
  std::string svg = svg::render(d, o);
  EXPECT_EQ(count_of(svg, "class=\"broken-line\""), 2u);
  EXPECT_EQ(count_of(svg, "class=\"polygon\""), 1u);
  EXPECT_EQ(svg::decimal(rat(2, 3)), "0.667");
  EXPECT_EQ(svg::decimal(rat(-1, 6)), "-0.167");
  EXPECT_EQ(svg::decimal(rat(1, 2)), "0.5");
  EXPECT_EQ(svg::decimal(Rat(2)), "2");
  EXPECT_EQ(svg::wall_label(WallFunction::binomial(LatticePoint{-1, 1}, 2)), "1 + z^(-1,1)");
}

#ifdef CSD_BINARY

struct CliResult {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("csd_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult run(const std::string& args) const {
    CliResult r;
    std::string cmd = std::string(CSD_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string build(const std::string& seed_text, long K) {
    std::string seed = file("seed.json", seed_text);
    std::string out = path("diagram_" + std::to_string(K) + ".json");
    EXPECT_EQ(run("build --seed " + seed + " --order " + std::to_string(K) + " --out " + out).code, 0);
    return out;
  }

  fs::path dir_;
};

const char* kA2Seed = R"({"rank": 2, "d": [1, 1], "exchange": [[0, 1], [-1, 0]]})";
const char* kG2Seed = R"({"rank": 2, "d": [1, 3], "exchange": [[0, 3], [-1, 0]]})";

TEST_F(Cli, BuildWritesTheCompletedDiagram) {
  std::string a2 = build(kA2Seed, 5);
  EXPECT_EQ(io::diagram_from(io::read_file(a2)), test::a2(5));
  std::string again = path("again.json");
  std::string seed = file("seed.json", kA2Seed);
  run("build --seed " + seed + " --order 5 --out " + again);
  std::ifstream x(a2), y(again);
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(x), {}), std::string(std::istreambuf_iterator<char>(y), {}));
}

TEST_F(Cli, ThetaOfTheA2Example) {
  std::string a2 = build(kA2Seed, 5);
  CliResult r = run("theta --diagram " + a2 + " --direction -1,0 --endpoint 2,1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "z^(-1,1) + z^(-1,0)\n");
}

TEST_F(Cli, MultiplyTheG2Pair) {
  std::string g2 = build(kG2Seed, 10);
  CliResult r = run("multiply --diagram " + g2 + " -p 1,0 -q -1,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "r=(0,0): 1\nr=(0,3): 1\n");
}

TEST_F(Cli, HullAndChecks) {
  std::string g2 = build(kG2Seed, 10);
  std::string pts = file("pts.json", R"([[1,0],[0,1],[-1,0],[0,-1],[1,-1],[1,-2],[1,-3],[2,-3]])");
  CliResult hull = run("hull --diagram " + g2 + " --points " + pts);
  EXPECT_EQ(hull.code, 0);
  EXPECT_EQ(io::point_set_from(io::parse(hull.out)).points, test::g2_hull());
  std::string good = file("good.json", hull.out);
  std::string bad = file("bad.json", R"([[1,-3],[2,-3],[1,0],[0,1],[-1,0]])");
  EXPECT_EQ(run("check-positive --diagram " + g2 + " --polygon " + good + " --max-degree 3 --order 8").code, 0);
  CliResult fail = run("check-positive --diagram " + g2 + " --polygon " + bad + " --max-degree 2 --order 8");
  EXPECT_EQ(fail.code, 1);
  io::json w = io::parse(fail.out).at("positivity_witnesses").at(0);
  EXPECT_EQ(io::lattice_from(w.at("r")), (LatticePoint{0, 3}));
  EXPECT_EQ(run("check-blc --diagram " + g2 + " --polygon " + good).code, 0);
  CliResult blc = run("check-blc --diagram " + g2 + " --polygon " + bad);
  EXPECT_EQ(blc.code, 1);
  EXPECT_FALSE(io::parse(blc.out).at("segment_witnesses").empty());
}

TEST_F(Cli, ConstructionsOfTheWorkedExamples) {
  std::string a2 = build(kA2Seed, 5);
  std::string seg = file("seg.json", R"({"start": [1, -5], "end": [2, 4], "total_time": 5, "pieces": [
      {"exponent": [1, -3], "coeff": 1, "duration": 1}, {"exponent": [1, -2], "coeff": 1, "duration": 1},
      {"exponent": [-1, -2], "coeff": 1, "duration": 1}, {"exponent": [-1, -1], "coeff": 1, "duration": 2}]})");
  CliResult rev = run("pair-from-segment --diagram " + a2 + " --segment " + seg + " --tau 5/2 -a 1 -b 1");
  ASSERT_EQ(rev.code, 0);
  io::json out = io::parse(rev.out);
  BalancedPair pair = io::pair_from(out.at("pair"));
  EXPECT_EQ(pair.base, (RatPoint{-1, 2}));
  std::string pair_file = file("pair.json", io::dump(out.at("pair")));
  CliResult glued = run("segment-from-pair --diagram " + a2 + " --pair " + pair_file + " -a 1 -b 1");
  ASSERT_EQ(glued.code, 0);
  Segment s = io::segment_from(io::parse(glued.out).at("segment"));
  EXPECT_EQ(s.start, (RatPoint{1, -5}));
  EXPECT_EQ(s.end, (RatPoint{2, 4}));
}

TEST_F(Cli, HarnessAndRender) {
  std::string a2 = build(kA2Seed, 6);
  CliResult h = run("harness --diagram " + a2 + " --trials 3 --perturb-seed 4");
  EXPECT_EQ(h.code, 0);
  CliResult r1 = run("render --diagram " + a2), r2 = run("render --diagram " + a2);
  EXPECT_EQ(r1.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(count_of(r1.out, "class=\"wall\""), 3u);
  EXPECT_EQ(count_of(r1.out, "class=\"chamber\""), 5u);
}

TEST_F(Cli, ErrorsExitWithTwo) {
  std::string a2 = build(kA2Seed, 5);
  EXPECT_EQ(run("theta --diagram " + file("broken.json", "{bad") + " --direction 1,0 --endpoint 1,1").code, 2);
  EXPECT_EQ(run("theta --diagram " + path("missing.json") + " --direction 1,0 --endpoint 1,1").code, 2);
  EXPECT_EQ(run("theta --diagram " + a2 + " --direction 1,0 --endpoint 1,0").code, 2);
  EXPECT_EQ(run("theta --diagram " + a2 + " --direction 1,0,2 --endpoint 1,1").code, 2);
  EXPECT_EQ(run("build --seed " + file("s.json", kA2Seed) + " --order 0").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

#endif

}  // namespace
}  // namespace csd
