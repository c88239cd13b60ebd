#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmwave/swarmwave.hpp"

namespace fs = std::filesystem;
using namespace swarmwave;

namespace {

struct RunFlags {
  std::string scenario;
  std::string out = "out";
  std::string format = "csv,json";
  std::size_t audit_every = 0;  // 0: keep the scenario's
  std::vector<std::string> overrides;
  std::size_t frames_every = 1;
};

struct EmitFlags {
  bool list = false;
  std::string name;
  std::string out;
  std::string protocol = "wave";
  std::string shape = "square";
  std::size_t side = 5;
  double spacing = 0.7;
  std::size_t m = 4;
  std::string base = "1,0";
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

struct RenderFlags {
  std::string trace;
  std::string out = "frames";
  std::size_t frames_every = 1;
  long view_robot = -1;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

Scenario prepare(const RunFlags& f) {
  Scenario sc = load_scenario(f.scenario);
  for (const auto& o : f.overrides) sc = apply_override(sc, o);
  if (f.audit_every > 0) sc.audit_every = f.audit_every;
  sc.validate();
  return sc;
}

int exit_code(const Trace& t) {
  switch (t.termination.kind) {
    case TerminationKind::NearGathering: return 0;
    case TerminationKind::MaxRounds: return 2;
    case TerminationKind::Error: return 1;
  }
  return 1;
}

void print_summary(const Trace& t) {
  const auto& first = t.records.front();
  const auto& last = t.records.back();
  std::printf("%s: %s after %zu rounds, diameter %s, symmetricity %zu -> %zu, audit failures %zu\n",
              t.scenario.name.c_str(), to_string(t.termination.kind), t.rounds(),
              format_number(last.diameter).c_str(), first.symmetricity, last.symmetricity, t.audit_failures());
  if (!t.termination.detail.empty()) std::printf("  %s\n", t.termination.detail.c_str());
}

void export_trace(const Trace& t, const RunFlags& f) {
  const auto formats = split(f.format, ',');
  for (const auto& fmt : formats) {
    if (fmt != "csv" && fmt != "json" && fmt != "svg") throw ParseError("--format: unknown format '" + fmt + "'");
  }
  auto wants = [&](const char* x) { return std::find(formats.begin(), formats.end(), x) != formats.end(); };
  if (wants("csv")) write_trace_csv(t, f.out);
  if (wants("json")) write_trace_json(t, f.out);
  if (wants("svg")) render_frames(t, fs::path(f.out) / "frames", f.frames_every);
}

int cmd_run(const RunFlags& f) {
  const Trace t = run(prepare(f));
  export_trace(t, f);
  print_summary(t);
  return exit_code(t);
}

int cmd_audit(const RunFlags& f) {
  Scenario sc = prepare(f);
  sc.audits = {"all"};
  const Trace t = run(sc);
  export_trace(t, f);
  std::map<std::string, std::size_t> failed;
  std::map<std::string, std::size_t> first;
  for (const auto& name : sc.enabled_audits()) failed[name] = 0;
  for (const auto& r : t.records) {
    for (const auto& [name, res] : r.audits) {
      if (res.passed) continue;
      if (failed[name]++ == 0) first[name] = r.round;
    }
  }
  print_summary(t);
  for (const auto& [name, n] : failed) {
    if (n == 0) {
      std::printf("  %-22s ok\n", name.c_str());
    } else {
      std::printf("  %-22s FAILED in %zu rounds (first: round %zu)\n", name.c_str(), n, first[name]);
    }
  }
  if (t.audit_failures() > 0) return 1;
  return exit_code(t);
}

const std::vector<std::pair<std::string, std::string>>& generators() {
  static const std::vector<std::pair<std::string, std::string>> g{
      {"grid_polygon", "lattice-filled square, triangle or hexagon (--shape --side --spacing)"},
      {"m_fold", "base points copied under m rotations (--m --base x,y;x,y --jitter --seed)"},
      {"figure1a", "ring around an empty middle (reconstructed layout)"},
      {"figure1b", "two grid clusters on one lattice (reconstructed layout)"},
  };
  return g;
}

int cmd_scenarios(const EmitFlags& f) {
  if (f.list || f.name.empty()) {
    for (const auto& [name, what] : generators()) std::printf("%-13s %s\n", name.c_str(), what.c_str());
    return 0;
  }
  const Protocol protocol = parse_protocol(f.protocol);
  Scenario sc;
  if (f.name == "grid_polygon") {
    sc = make_scenario(f.shape + std::to_string(f.side), protocol,
                       grid_polygon(parse_grid_shape(f.shape), f.side, f.spacing));
  } else if (f.name == "m_fold") {
    std::vector<Point> base;
    for (const auto& pair : split(f.base, ';')) {
      const auto xy = split(pair, ',');
      if (xy.size() != 2) throw ParseError("--base: expected x,y pairs separated by ';'");
      base.push_back({std::stod(xy[0]), std::stod(xy[1])});
    }
    sc = make_scenario("m_fold" + std::to_string(f.m), protocol, m_fold(f.m, base, f.jitter, f.seed));
    sc.seed = f.seed;
  } else if (f.name == "figure1a") {
    sc = figure1a(protocol);
  } else if (f.name == "figure1b") {
    sc = figure1b(protocol);
  } else {
    throw ParseError("unknown generator '" + f.name + "' (see scenarios --list)");
  }
  if (f.out.empty()) {
    std::cout << to_json(sc).dump(2) << '\n';
  } else {
    save_scenario(sc, f.out);
    std::printf("wrote %s (%zu robots)\n", f.out.c_str(), sc.positions.size());
  }
  return 0;
}

int cmd_render(const RenderFlags& f) {
  if (!fs::exists(f.trace)) throw ParseError("trace file '" + f.trace + "' does not exist");
  const Trace t = load_trace(f.trace);
  SvgOptions opt;
  if (f.view_robot >= 0) opt.view_robot = static_cast<std::size_t>(f.view_robot);
  const std::size_t n = render_frames(t, f.out, f.frames_every, opt);
  std::printf("wrote %zu frames to %s\n", n, f.out.c_str());
  return 0;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--scenario", f.scenario, "scenario JSON (a trace.json also works)")->required();
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "comma list of csv, json, svg");
  cmd->add_option("--audit-every", f.audit_every, "audit every k-th round");
  cmd->add_option("--set", f.overrides, "override a scenario field, key=value")->allow_extra_args(false);
  cmd->add_option("--frames-every", f.frames_every, "svg frame stride");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmwave: gathering protocols for unit-disc robot swarms"};
  app.require_subcommand(1);
  RunFlags run_flags, audit_flags;
  EmitFlags emit;
  RenderFlags render;

  auto* run_cmd = app.add_subcommand("run", "run a scenario and write its trace");
  add_run_flags(run_cmd, run_flags);
  auto* audit_cmd = app.add_subcommand("audit", "run with every audit enabled and report failures");
  add_run_flags(audit_cmd, audit_flags);

  auto* sc_cmd = app.add_subcommand("scenarios", "list generators or emit a scenario file");
  sc_cmd->add_flag("--list", emit.list, "list generators");
  sc_cmd->add_option("--emit", emit.name, "generator to emit");
  sc_cmd->add_option("--out", emit.out, "scenario file to write (stdout if omitted)");
  sc_cmd->add_option("--protocol", emit.protocol, "gta or wave");
  sc_cmd->add_option("--shape", emit.shape, "square, triangle or hexagon");
  sc_cmd->add_option("--side", emit.side, "robots per side");
  sc_cmd->add_option("--spacing", emit.spacing, "lattice spacing");
  sc_cmd->add_option("--m", emit.m, "rotation order");
  sc_cmd->add_option("--base", emit.base, "base points x,y;x,y");
  sc_cmd->add_option("--jitter", emit.jitter, "random offset per base point");
  sc_cmd->add_option("--seed", emit.seed, "jitter seed");

  auto* render_cmd = app.add_subcommand("render", "write SVG frames from a trace.json");
  render_cmd->add_option("--trace", render.trace, "trace.json from run")->required();
  render_cmd->add_option("--out", render.out, "frame directory");
  render_cmd->add_option("--frames-every", render.frames_every, "frame stride");
  render_cmd->add_option("--view-robot", render.view_robot, "draw this robot's viewing range");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (audit_cmd->parsed()) return cmd_audit(audit_flags);
    if (sc_cmd->parsed()) return cmd_scenarios(emit);
    if (render_cmd->parsed()) return cmd_render(render);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
