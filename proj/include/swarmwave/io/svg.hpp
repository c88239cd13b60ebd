#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>

#include "swarmwave/io/trace_io.hpp"

namespace swarmwave {

struct SvgOptions {
  std::optional<std::size_t> view_robot;  // draw this robot's viewing circle
  double robot_radius = 0.08;
  double pixels_per_unit = 60.0;
};

namespace detail {

inline const char* role_color(const std::string& role) {
  if (role == "boundary") return "#d62728";
  if (role == "wave_old") return "#1f77b4";
  if (role == "wave_new") return "#17becf";
  if (role == "inner") return "#7f7f7f";
  return "#2ca02c";
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void svg_points(std::ostream& out, const auto& pts) {
  bool first = true;
  for (const Point& p : pts) {
    out << (first ? "" : " ") << format_number(p.x) << ',' << format_number(p.y);
    first = false;
  }
}

}  // namespace detail

// One frame in world coordinates; a y-flip group puts +y up.
inline std::string render_frame(const RoundRecord& rec, const Scenario& sc, const SvgOptions& opt = {}) {
  const auto box = bounding_box(rec.positions.positions());
  double pad = 0.5;
  if (opt.view_robot) pad = std::max(pad, sc.resolved_viewing_range() + 0.1);
  const double w = box.hi.x - box.lo.x + 2 * pad;
  const double h = box.hi.y - box.lo.y + 2 * pad;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(w * opt.pixels_per_unit)
      << "\" height=\"" << format_number(h * opt.pixels_per_unit) << "\" viewBox=\""
      << format_number(box.lo.x - pad) << ' ' << format_number(-box.hi.y - pad) << ' ' << format_number(w) << ' '
      << format_number(h) << "\">\n";
  out << "<title>" << detail::xml_escape(sc.name) << " round " << rec.round << "</title>\n";
  out << "<g transform=\"scale(1,-1)\">\n";

  std::optional<BoundaryCycle> cycle;
  try {
    if (rec.connected || is_connected(disc_graph(rec.positions, 1.0))) cycle = connectivity_boundary(rec.positions);
  } catch (const Error&) {
  }
  if (cycle && !cycle->degenerate && sc.protocol == Protocol::Wave && is_convex_cycle(*cycle)) {
    try {
      const auto regions = wave_regions(*cycle, sc.resolved_epsilon());
      for (const auto& s : regions.old_ring) {
        out << "<polygon class=\"segment\" fill=\"#1f77b4\" fill-opacity=\"0.12\" stroke=\"#1f77b4\" "
               "stroke-opacity=\"0.3\" stroke-width=\"0.01\" points=\"";
        detail::svg_points(out, s.corners());
        out << "\"/>\n";
      }
    } catch (const Error&) {
    }
  }
  if (cycle && cycle->size() >= 2) {
    const auto& outline = cycle->outline.empty() ? cycle->positions : cycle->outline;
    out << "<polygon class=\"boundary\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"0.02\" points=\"";
    detail::svg_points(out, outline);
    out << "\"/>\n";
  }
  if (opt.view_robot && *opt.view_robot < rec.positions.size()) {
    const Point c = rec.positions[*opt.view_robot];
    out << "<circle class=\"viewing-range\" cx=\"" << format_number(c.x) << "\" cy=\"" << format_number(c.y)
        << "\" r=\"" << format_number(sc.resolved_viewing_range())
        << "\" fill=\"none\" stroke=\"#9467bd\" stroke-dasharray=\"0.05\" stroke-width=\"0.015\"/>\n";
  }
  for (std::size_t i = 0; i < rec.positions.size(); ++i) {
    const Point p = rec.positions[i];
    const std::string role = i < rec.roles.size() ? rec.roles[i] : "";
    out << "<circle class=\"robot" << (role.empty() ? "" : " " + role) << "\" cx=\"" << format_number(p.x)
        << "\" cy=\"" << format_number(p.y) << "\" r=\"" << format_number(opt.robot_radius) << "\" fill=\""
        << detail::role_color(role) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

inline std::string frame_name(std::size_t round) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.svg", round);
  return buf;
}

// Writes every k-th record plus the last one; returns the number of files.
inline std::size_t render_frames(const Trace& t, const std::filesystem::path& dir, std::size_t every = 1,
                                 const SvgOptions& opt = {}) {
  if (t.records.empty()) throw PreconditionError("render: trace has no records");
  if (every == 0) throw PreconditionError("render: frame stride must be at least 1");
  std::filesystem::create_directories(dir);
  std::size_t written = 0;
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    if (k % every != 0 && k + 1 != t.records.size()) continue;
    const auto& rec = t.records[k];
    detail::write_file(dir / frame_name(rec.round), render_frame(rec, t.scenario, opt));
    ++written;
  }
  return written;
}

}  // namespace swarmwave
