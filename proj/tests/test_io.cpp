#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "support/oracles.hpp"
#include "swarmwave/io/scenario_io.hpp"
#include "swarmwave/io/svg.hpp"
#include "swarmwave/io/trace_io.hpp"
#include "swarmwave/sim/generators.hpp"

using namespace swarmwave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("swarmwave_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string field_error(const std::string& doc) {
  try {
    scenario_from_json(Json::parse(doc));
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Scenario wave5() {
  auto sc = make_scenario("square5", Protocol::Wave, grid_polygon(GridShape::Square, 5, 0.7));
  sc.audits = {"all"};
  return sc;
}

}  // namespace

TEST(ScenarioJson, RoundTrip) {
  auto sc = make_scenario("m", Protocol::Gta, m_fold(3, {{0.6, 0.1}, {0.9, 0.4}}, 0.05, 11));
  sc.seed = 11;
  sc.max_rounds = 77;
  sc.audits = {"symmetry_preserved"};
  const Scenario back = scenario_from_json(Json::parse(to_json(sc).dump()));
  EXPECT_EQ(back.name, "m");
  EXPECT_EQ(back.protocol, Protocol::Gta);
  EXPECT_EQ(back.seed, 11u);
  EXPECT_EQ(back.max_rounds, 77u);
  EXPECT_EQ(back.audits, sc.audits);
  EXPECT_EQ(back.resolved_epsilon(), sc.resolved_epsilon());
  EXPECT_EQ(back.positions, sc.positions);  // bit-exact
}

TEST(ScenarioJson, DefaultsWhenFieldsAreOmitted) {
  const auto sc = scenario_from_json(Json::parse(R"({"protocol": "wave", "positions": [[0, 0], [0.5, 0]]})"));
  EXPECT_EQ(sc.resolved_epsilon(), 0.3);
  EXPECT_EQ(sc.max_rounds, 10000u);
  EXPECT_NEAR(sc.resolved_threshold(), 2.0 + std::sqrt(2.0), 1e-15);
  const auto g = scenario_from_json(Json::parse(R"({"protocol": "gta", "positions": [[0, 0]]})"));
  EXPECT_EQ(g.resolved_threshold(), 1.0);
}

TEST(ScenarioJson, ErrorsNameTheField) {
  EXPECT_NE(field_error(R"({"positions": [[0,0]]})").find("'protocol'"), std::string::npos);
  EXPECT_NE(field_error(R"({"protocol": "gtb", "positions": [[0,0]]})").find("'protocol'"), std::string::npos);
  EXPECT_NE(field_error(R"({"protocol": "gta", "positions": [[0]]})").find("'positions'"), std::string::npos);
  EXPECT_NE(field_error(R"({"protocol": "gta", "positions": [[0,0]], "epsilon": "x"})").find("'epsilon'"),
            std::string::npos);
  EXPECT_NE(field_error(R"({"protocol": "gta", "positions": [[0,0]], "max_rounds": -3})").find("'max_rounds'"),
            std::string::npos);
  EXPECT_NE(field_error(R"({"protocol": "gta", "positions": [[0,0]], "colour": 1})").find("'colour'"),
            std::string::npos);
  EXPECT_NE(field_error(R"({"protocol": "wave", "positions": [[0,0]], "epsilon": 0.7})").find("(0, 0.5)"),
            std::string::npos);
  EXPECT_NE(field_error(R"({"protocol": "wave", "positions": [[0,0]], "audits": ["nope"]})").find("'audits'"),
            std::string::npos);
}

TEST(ScenarioJson, Overrides) {
  const Scenario sc = wave5();
  EXPECT_EQ(apply_override(sc, "epsilon=0.25").resolved_epsilon(), 0.25);
  EXPECT_EQ(apply_override(sc, "max_rounds=9").max_rounds, 9u);
  EXPECT_EQ(apply_override(sc, "name=renamed").name, "renamed");
  EXPECT_EQ(apply_override(sc, "audits=collision_free,convexity").audits,
            (std::vector<std::string>{"collision_free", "convexity"}));
  const Scenario g = apply_override(sc, "protocol=gta");
  EXPECT_EQ(g.protocol, Protocol::Gta);
  EXPECT_EQ(g.resolved_viewing_range(), 1.0);
  EXPECT_THROW(apply_override(sc, "epsilon=0.7"), PreconditionError);
  EXPECT_THROW(apply_override(sc, "max_rounds=many"), ParseError);
  EXPECT_THROW(apply_override(sc, "positions=[]"), ParseError);
  EXPECT_THROW(apply_override(sc, "unknown=1"), ParseError);
  EXPECT_THROW(apply_override(sc, "epsilon"), ParseError);
}

TEST(TraceFormats, CsvColumnsAndRows) {
  const Trace t = run(wave5());
  std::ostringstream pos, met;
  write_positions_csv(t, pos);
  write_metrics_csv(t, met);
  const auto pl = lines(pos.str());
  const auto ml = lines(met.str());
  EXPECT_EQ(pl.front(), "round,robot,x,y,role");
  EXPECT_EQ(ml.front(), "round,diameter,symmetricity,connected,convex_boundary,max_hole,min_dist,audits_failed");
  EXPECT_EQ(ml.size(), t.records.size() + 1);  // one row per round
  EXPECT_EQ(pl.size(), t.records.size() * 25 + 1);
  EXPECT_TRUE(std::regex_match(pl[1], std::regex(R"(0,0,[-0-9.e]+,[-0-9.e]+,boundary)")));
}

TEST(TraceFormats, NumbersRoundTripExactly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(TraceFormats, CsvPositionsReproduceTheRecords) {
  const Trace t = run(wave5());
  std::ostringstream pos;
  write_positions_csv(t, pos);
  const auto pl = lines(pos.str());
  for (std::size_t k = 1; k < pl.size(); ++k) {
    std::stringstream row(pl[k]);
    std::string f[5];
    for (auto& x : f) std::getline(row, x, ',');
    const auto& rec = t.records.at(std::stoul(f[0]));
    const std::size_t i = std::stoul(f[1]);
    EXPECT_EQ(std::stod(f[2]), rec.positions[i].x);
    EXPECT_EQ(std::stod(f[3]), rec.positions[i].y);
    EXPECT_EQ(f[4], rec.roles[i]);
  }
}

TEST(TraceFormats, JsonRoundTripAndRerunFromTrace) {
  const Trace t = run(wave5());
  const auto dir = scratch("json");
  write_trace_json(t, dir);
  const Trace back = load_trace((dir / "trace.json").string());
  ASSERT_EQ(back.records.size(), t.records.size());
  EXPECT_EQ(back.termination.kind, t.termination.kind);
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    EXPECT_EQ(back.records[k].positions, t.records[k].positions);
    EXPECT_EQ(back.records[k].roles, t.records[k].roles);
    EXPECT_EQ(count_failures(back.records[k].audits), count_failures(t.records[k].audits));
  }
  // the envelope is also a scenario: re-running it gives the same trace
  const Trace again = run(load_scenario((dir / "trace.json").string()));
  std::ostringstream a, b;
  write_metrics_csv(t, a);
  write_metrics_csv(again, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(to_json(again).dump(), to_json(t).dump());
}

TEST(TraceFormats, FilesAreByteIdenticalAcrossRuns) {
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  write_trace_csv(run(wave5()), d1);
  write_trace_csv(run(wave5()), d2);
  EXPECT_EQ(slurp(d1 / "metrics.csv"), slurp(d2 / "metrics.csv"));
  EXPECT_EQ(slurp(d1 / "positions.csv"), slurp(d2 / "positions.csv"));
}

TEST(Svg, OneFramePerRecordWithStableNames) {
  Trace t = run(wave5());
  t.records.resize(3);
  const auto dir = scratch("svg");
  EXPECT_EQ(render_frames(t, dir), 3u);
  EXPECT_TRUE(fs::exists(dir / "frame_0000.svg"));
  EXPECT_TRUE(fs::exists(dir / "frame_0001.svg"));
  EXPECT_TRUE(fs::exists(dir / "frame_0002.svg"));
  EXPECT_EQ(render_frames(run(wave5()), scratch("svg2"), 2), 3u);  // rounds 0, 2 and the last one
}

TEST(Svg, EmptyTraceIsRefused) {
  Trace t;
  EXPECT_THROW(render_frames(t, scratch("svg_empty")), PreconditionError);
}

TEST(Svg, BoundaryPolygonIsClosedAndConvexInEveryWaveFrame) {
  auto sc = make_scenario("h", Protocol::Wave, grid_polygon(GridShape::Hexagon, 4, 0.8));
  const Trace t = run(sc);
  const std::regex boundary(R"re(<polygon class="boundary"[^>]*points="([^"]*)")re");
  for (const auto& rec : t.records) {
    const std::string svg = render_frame(rec, t.scenario);
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, boundary)) << "round " << rec.round;
    std::vector<Point> poly;
    std::istringstream in(m[1].str());
    for (std::string pair; in >> pair;) {
      const auto c = pair.find(',');
      poly.push_back({std::stod(pair.substr(0, c)), std::stod(pair.substr(c + 1))});
    }
    ASSERT_GE(poly.size(), 3u);
    // a polygon element closes itself; check every turn has the same sign
    double sign = 0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const double s = oracle::tri_sign(poly[k], poly[(k + 1) % poly.size()], poly[(k + 2) % poly.size()]);
      if (std::abs(s) <= 1e-9) continue;
      if (sign == 0) sign = s;
      EXPECT_GT(s * sign, 0.0) << "round " << rec.round << " vertex " << k;
    }
    EXPECT_NE(svg.find("class=\"robot boundary\""), std::string::npos);
  }
}

TEST(Svg, ViewingCircleOnRequest) {
  const Trace t = run(wave5());
  SvgOptions opt;
  EXPECT_EQ(render_frame(t.records[0], t.scenario, opt).find("viewing-range"), std::string::npos);
  opt.view_robot = 12;
  EXPECT_NE(render_frame(t.records[0], t.scenario, opt).find("viewing-range"), std::string::npos);
}
