#include "equidyn/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "equidyn/chart.hpp"
#include "equidyn/util.hpp"

namespace equidyn {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw ConfigError("cannot open output file: " + path);
  return out;
}

void append_g17(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

void write_table(std::ofstream& out, const std::vector<std::string>& names,
                 const std::vector<double>& times,
                 const std::vector<std::vector<double>>& rows) {
  std::string line = "t";
  for (const auto& n : names) {
    line += ',';
    line += n;
  }
  line += '\n';
  out << line;
  for (std::size_t k = 0; k < times.size(); ++k) {
    line.clear();
    append_g17(line, times[k]);
    for (double v : rows[k]) {
      line += ',';
      append_g17(line, v);
    }
    line += '\n';
    out << line;
  }
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// 2d projection used for plotting; lossy by design, one point per agent.
Point project_agent(const Configuration& cfg, int agent) {
  const auto p = cfg.agent(agent);
  switch (cfg.scenario) {
    case ScenarioId::se2_plane:
    case ScenarioId::rel_plane:
    case ScenarioId::sphere_so2_stereo:
    case ScenarioId::sl2_plane:
      return {p[0], p[1]};
    case ScenarioId::rel_line:
      return {p[1], cfg.c * p[0]};
    case ScenarioId::circle:
      return {std::cos(p[0]), std::sin(p[0])};
    case ScenarioId::sphere_so3:
      return {p[0], p[1]};  // orthographic view down the z axis
    case ScenarioId::unicycle:
      return {p[0], p[1]};
    case ScenarioId::rel_unicycle:
      return {p[1] * std::cos(p[2]), p[1] * std::sin(p[2])};
    case ScenarioId::su2_quantum:
      return {p[0], p[1]};
  }
  return {};
}

const char* agent_color(int agent) {
  static const char* palette[] = {"#2a9d3c", "#2456c4", "#d18116",
                                  "#b3379b", "#4cb3a6", "#8a5fd1"};
  return palette[agent % 6];
}

void append_f2(std::string& s, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  s += buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string format_g3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Scenarios whose natural picture is coordinate-vs-time panels rather than a
// planar trajectory curve.
bool wants_time_panels(ScenarioId id) {
  switch (id) {
    case ScenarioId::rel_line:
    case ScenarioId::circle:
    case ScenarioId::rel_unicycle:
    case ScenarioId::su2_quantum:
      return true;
    default:
      return false;
  }
}

void append_polyline(std::string& s, const std::vector<Point>& pts, const char* color) {
  s += "<polyline fill=\"none\" stroke=\"";
  s += color;
  s += "\" stroke-width=\"2\" stroke-linejoin=\"round\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) s += ' ';
    append_f2(s, pts[k].x);
    s += ',';
    append_f2(s, pts[k].y);
  }
  s += "\"/>\n";
}

void append_text(std::string& s, double x, double y, int size, const char* anchor,
                 const std::string& text) {
  s += "<text x=\"";
  append_f2(s, x);
  s += "\" y=\"";
  append_f2(s, y);
  s += "\" font-family=\"monospace\" font-size=\"";
  s += std::to_string(size);
  s += "\" text-anchor=\"";
  s += anchor;
  s += "\" fill=\"#333333\">";
  s += xml_escape(text);
  s += "</text>\n";
}

// One stacked panel per per-agent coordinate, each holding every agent's
// series against time; two columns once the panel count passes four.
void append_time_panels(std::string& s, const Trajectory& traj,
                        const std::vector<std::size_t>& picks) {
  const auto& first = traj.states.front();
  const int n = first.n_agents;
  const int d = dim_per_agent(first.scenario);
  const auto names = coordinate_names(first.scenario, n);

  const double t0 = traj.times.front();
  const double t1 = std::max(traj.times.back(), t0 + 1e-12);

  const int cols = d > 4 ? 2 : 1;
  const int rows = (d + cols - 1) / cols;
  const double top = 48.0, bottom = 26.0, left = 56.0, right = 14.0;
  const double gap = 14.0;
  const double panel_w = (800.0 - left - right - gap * (cols - 1)) / cols;
  const double panel_h = (800.0 - top - bottom - gap * (rows - 1)) / rows;

  for (int j = 0; j < d; ++j) {
    const double px = left + (j % cols) * (panel_w + gap);
    const double py = top + (j / cols) * (panel_h + gap);

    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t k : picks)
      for (int i = 0; i < n; ++i) {
        const double v = traj.states[k].agent(i)[j];
        if (!std::isfinite(v)) continue;
        if (!any) {
          lo = hi = v;
          any = true;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    double pad = 0.08 * (hi - lo);
    if (pad < 1e-9) pad = 0.5 * std::max(std::abs(lo), 1.0) * 1e-3 + 1e-9;
    lo -= pad;
    hi += pad;

    auto map_t = [&](double t) { return px + (t - t0) / (t1 - t0) * panel_w; };
    auto map_v = [&](double v) { return py + panel_h - (v - lo) / (hi - lo) * panel_h; };

    s += "<rect x=\"";
    append_f2(s, px);
    s += "\" y=\"";
    append_f2(s, py);
    s += "\" width=\"";
    append_f2(s, panel_w);
    s += "\" height=\"";
    append_f2(s, panel_h);
    s += "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";

    // Panel label: the coordinate name without the agent suffix.
    std::string label = names[static_cast<std::size_t>(j)];
    while (!label.empty() && label.back() >= '0' && label.back() <= '9' && n > 0 &&
           first.scenario != ScenarioId::su2_quantum)
      label.pop_back();
    append_text(s, px + 6, py + 16, 13, "start", label);
    append_text(s, px - 4, py + 11, 11, "end", format_g3(hi));
    append_text(s, px - 4, py + panel_h, 11, "end", format_g3(lo));
    if (j / cols == rows - 1 || (cols == 2 && j + cols >= d)) {
      append_text(s, px, py + panel_h + 16, 11, "start", "t=" + format_g3(t0));
      append_text(s, px + panel_w, py + panel_h + 16, 11, "end", "t=" + format_g3(t1));
    }

    for (int i = 0; i < n; ++i) {
      std::vector<Point> pts;
      pts.reserve(picks.size());
      for (std::size_t k : picks) {
        const double v = traj.states[k].agent(i)[j];
        if (!std::isfinite(v)) continue;
        pts.push_back({map_t(traj.times[k]), map_v(v)});
      }
      if (!pts.empty()) append_polyline(s, pts, agent_color(i));
    }
  }
}

// Planar trajectory curves, one polyline per agent, square aspect.
void append_plane_curves(std::string& s, const Trajectory& traj,
                         const std::vector<std::size_t>& picks) {
  const int n = traj.states.empty() ? 0 : traj.states.front().n_agents;
  std::vector<std::vector<Point>> tracks(static_cast<std::size_t>(std::max(n, 0)));
  for (std::size_t k : picks)
    for (int i = 0; i < n; ++i)
      tracks[static_cast<std::size_t>(i)].push_back(project_agent(traj.states[k], i));

  double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
  bool any = false;
  for (const auto& tr : tracks)
    for (const auto& pt : tr) {
      if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) continue;
      if (!any) {
        lo_x = hi_x = pt.x;
        lo_y = hi_y = pt.y;
        any = true;
      } else {
        lo_x = std::min(lo_x, pt.x);
        hi_x = std::max(hi_x, pt.x);
        lo_y = std::min(lo_y, pt.y);
        hi_y = std::max(hi_y, pt.y);
      }
    }
  double w = hi_x - lo_x, h = hi_y - lo_y;
  const double span = std::max(std::max(w, h), 1e-9);
  lo_x -= 0.1 * span + 0.5 * (span - w);
  hi_x += 0.1 * span + 0.5 * (span - w);
  lo_y -= 0.1 * span + 0.5 * (span - h);
  hi_y += 0.1 * span + 0.5 * (span - h);

  const double side = 800.0, margin = 40.0;
  const double scale = (side - 2 * margin) / (hi_x - lo_x);
  auto map_x = [&](double x) { return margin + (x - lo_x) * scale; };
  auto map_y = [&](double y) { return side - margin - (y - lo_y) * scale; };

  for (int i = 0; i < n; ++i) {
    const auto& tr = tracks[static_cast<std::size_t>(i)];
    if (tr.empty()) continue;
    std::vector<Point> pts;
    pts.reserve(tr.size());
    for (const auto& pt : tr) {
      if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) continue;
      pts.push_back({map_x(pt.x), map_y(pt.y)});
    }
    if (pts.empty()) continue;
    append_polyline(s, pts, agent_color(i));
    auto marker = [&](const Point& pt, bool start) {
      s += "<circle cx=\"";
      append_f2(s, pt.x);
      s += "\" cy=\"";
      append_f2(s, pt.y);
      if (start) {
        s += "\" r=\"5\" fill=\"";
        s += agent_color(i);
        s += "\"/>\n";
      } else {
        s += "\" r=\"3.5\" fill=\"#ffffff\" stroke=\"";
        s += agent_color(i);
        s += "\" stroke-width=\"2\"/>\n";
      }
    };
    marker(pts.front(), true);
    marker(pts.back(), false);
  }
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_or_throw(path);
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  if (!traj.states.empty()) {
    const auto& first = traj.states.front();
    names = coordinate_names(first.scenario, first.n_agents);
    rows.reserve(traj.states.size());
    for (const auto& cfg : traj.states) rows.push_back(cfg.x);
  }
  write_table(out, names, traj.times, rows);
}

void write_invariants_csv(const std::string& path, const QuotientTrace& trace) {
  auto out = open_or_throw(path);
  write_table(out, trace.names, trace.times, trace.values);
}

void write_trajectory_svg(const std::string& path, const Trajectory& traj,
                          const std::string& title) {
  auto out = open_or_throw(path);

  // Cap the polyline length; long runs get decimated but keep the endpoint.
  const std::size_t total = traj.states.size();
  const std::size_t stride = total > 2000 ? (total + 1999) / 2000 : 1;
  std::vector<std::size_t> picks;
  for (std::size_t k = 0; k < total; ++k)
    if (k % stride == 0 || k + 1 == total) picks.push_back(k);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\">\n";
  s += "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
  append_text(s, 20, 28, 16, "start", title);
  if (!picks.empty()) {
    if (wants_time_panels(traj.states.front().scenario))
      append_time_panels(s, traj, picks);
    else
      append_plane_curves(s, traj, picks);
  }
  s += "</svg>\n";
  out << s;
}

}  // namespace equidyn
