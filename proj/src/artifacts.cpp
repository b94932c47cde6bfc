#include "artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rof1d::detail {

namespace fs = std::filesystem;

std::vector<std::pair<double, double>> step_polyline(const StepFunction& u) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < u.size(); ++i) {
    pts.emplace_back(u.left_edge(i), u.value(i));
    pts.emplace_back(u.right_edge(i), u.value(i));
  }
  return pts;
}

std::vector<std::pair<double, double>> field_polyline(const DualField& z) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < z.nodes().size(); ++i) pts.emplace_back(z.nodes()[i], z.values()[i]);
  return pts;
}

ArtifactWriter::ArtifactWriter(fs::path dir, RunReport& report)
    : dir_(std::move(dir)), report_(report) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory '" + dir_.string() + "'");
}

void ArtifactWriter::write(const std::string& file, const std::string& body) {
  const fs::path p = dir_ / file;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
  out.close();
  if (!out) throw Error(ErrorCode::io, "cannot write '" + p.string() + "'");
  report_.files.push_back(p);
}

void ArtifactWriter::step_csv(const std::string& file, const StepFunction& u) {
  std::ostringstream os;
  os << "x_left,x_right,value\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    os << format_number(u.left_edge(i)) << ',' << format_number(u.right_edge(i)) << ','
       << format_number(u.value(i)) << '\n';
  }
  write(file, os.str());
}

void ArtifactWriter::field_csv(const std::string& file, const DualField& z) {
  std::ostringstream os;
  os << "x,z\n";
  for (std::size_t i = 0; i < z.nodes().size(); ++i) {
    os << format_number(z.nodes()[i]) << ',' << format_number(z.values()[i]) << '\n';
  }
  write(file, os.str());
}

void ArtifactWriter::events_csv(const std::string& file, const FlowTrajectory& traj) {
  std::ostringstream os;
  os << "t,kind,detail\n";
  for (const auto& e : traj.events) {
    os << format_number(e.t) << ',' << to_string(e.kind) << ',';
    if (e.kind == EventKind::boundary_hit) {
      os << to_string(e.end) << " facet " << e.facet << " at x=" << format_number(e.x);
    } else if (e.kind == EventKind::extinction) {
      os << e.state_after.size() << " facets remain";
    } else {
      os << "facet " << e.facet << " at x=" << format_number(e.x);
    }
    os << '\n';
  }
  write(file, os.str());
}

void ArtifactWriter::trajectory_csv(const std::string& file, const FlowTrajectory& traj) {
  std::ostringstream os;
  os << "t,x_left,x_right,value\n";
  auto rows = [&](double t, const StepFunction& u) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      os << format_number(t) << ',' << format_number(u.left_edge(i)) << ','
         << format_number(u.right_edge(i)) << ',' << format_number(u.value(i)) << '\n';
    }
  };
  for (const auto& ep : traj.epochs) rows(ep.t_start, ep.state);
  rows(traj.t_ext, traj.terminal);
  write(file, os.str());
}

void ArtifactWriter::text(const std::string& file, const std::string& body) { write(file, body); }

void ArtifactWriter::summary(const std::string& file) {
  std::ostringstream os;
  for (const auto& [k, v] : report_.summary) os << k << ": " << v << '\n';
  write(file, os.str());
}

namespace {

struct Panel {
  double top;
  double height;
  const std::vector<PlotSeries>* series;
};

void draw_panel(std::ostringstream& os, const Panel& p, double x_max, double left, double width) {
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& s : *p.series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        lo = hi = y;
        first = false;
      }
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto sx = [&](double x) { return left + width * x / x_max; };
  auto sy = [&](double y) { return p.top + p.height * (hi - y) / (hi - lo); };

  os << "<rect x=\"" << left << "\" y=\"" << p.top << "\" width=\"" << width << "\" height=\""
     << p.height << "\" fill=\"none\" stroke=\"#999\"/>\n";
  if (lo < 0 && hi > 0) {
    os << "<line x1=\"" << left << "\" y1=\"" << sy(0) << "\" x2=\"" << left + width
       << "\" y2=\"" << sy(0) << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << left - 6 << "\" y=\"" << p.top + 10
     << "\" font-size=\"10\" text-anchor=\"end\">" << format_number(hi) << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << p.top + p.height
     << "\" font-size=\"10\" text-anchor=\"end\">" << format_number(lo) << "</text>\n";

  double legend_y = p.top + 14;
  for (const auto& s : *p.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"5,3\"";
    os << " points=\"";
    for (const auto& [x, y] : s.points) os << sx(x) << ',' << sy(y) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << left + width + 8 << "\" y=\"" << legend_y << "\" font-size=\"11\" fill=\""
       << s.color << "\">" << s.label << "</text>\n";
    legend_y += 14;
  }
}

}  // namespace

void ArtifactWriter::svg(const std::string& file, const std::string& title,
                         const std::vector<PlotSeries>& primal,
                         const std::vector<PlotSeries>& dual) {
  const double left = 60, width = 520, total_w = 680;
  double x_max = 1.0;
  for (const auto* group : {&primal, &dual}) {
    for (const auto& s : *group) {
      for (const auto& pt : s.points) x_max = std::max(x_max, pt.first);
    }
  }
  std::ostringstream os;
  os.precision(6);
  const double h = dual.empty() ? 300 : 480;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\">\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-size=\"13\">" << title << "</text>\n";
  draw_panel(os, {36, 230, &primal}, x_max, left, width);
  if (!dual.empty()) draw_panel(os, {300, 150, &dual}, x_max, left, width);
  os << "<text x=\"" << left << "\" y=\"" << h - 6 << "\" font-size=\"10\">0</text>\n";
  os << "<text x=\"" << left + width << "\" y=\"" << h - 6
     << "\" font-size=\"10\" text-anchor=\"end\">" << format_number(x_max) << "</text>\n";
  os << "</svg>\n";
  write(file, os.str());
}

}  // namespace rof1d::detail
