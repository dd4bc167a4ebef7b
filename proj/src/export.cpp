#include "qcs/export.hpp"

#include <algorithm>
#include <boost/version.hpp>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fftw3.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

namespace qcs {

IoError::IoError(const std::string& p, const std::string& what) : std::runtime_error(p + ": " + what), path(p) {}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("format_double: non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(path, std::string("cannot open for writing: ") + std::strerror(errno));
  f << text;
  f.flush();
  if (!f) throw IoError(path, "write failed");
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ostringstream s;
  write_csv(s, table);
  write_text(path, s.str());
}

CsvTable distribution_csv(const std::vector<DistributionTable>& tables) {
  CsvTable t;
  t.header = {"family", "x", "tau", "count", "proportion", "log_proportion"};
  for (const auto& d : tables) {
    for (std::size_t i = 0; i < d.tau_grid.size(); ++i) {
      const double p = d.proportions[i];
      t.rows.push_back({d.family, std::to_string(d.x), format_double(d.tau_grid[i]), std::to_string(d.counts[i]),
                        format_double(p), p > 0 ? format_double(std::log(p)) : std::string()});
    }
  }
  return t;
}

void export_csv(const DistributionTable& table, const std::string& path) { write_csv(path, distribution_csv({table})); }

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path, std::string("cannot open for reading: ") + std::strerror(errno));
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "qcs";
  j["versions"]["qcs"] = m.version;
  j["versions"]["boost"] = BOOST_LIB_VERSION;
  j["versions"]["fftw"] = std::string(fftw_version);
  j["command"] = m.command;
  j["seed"] = m.seed;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  j["parameters"] = params;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.results) results[k] = v;
  j["results"] = results;
  if (m.table) {
    j["table"]["columns"] = m.table->header;
    j["table"]["rows"] = m.table->rows;
  }
  j["wall_seconds"] = m.wall_seconds;
  return j.dump(2) + "\n";
}

void export_json(const RunManifest& manifest, const std::string& path) { write_text(path, manifest_json(manifest)); }

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string svg_plot(const std::vector<DistributionTable>& tables, const std::vector<Overlay>& overlays,
                     const std::string& title) {
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;
    bool dashed;
  };
  std::vector<Series> series;
  for (const auto& t : tables) {
    Series s{t.family + " " + to_string(t.statistic), {}, false};
    for (std::size_t i = 0; i < t.tau_grid.size(); ++i) {
      if (t.proportions[i] > 0) s.pts.emplace_back(t.tau_grid[i], std::log(t.proportions[i]));
    }
    series.push_back(std::move(s));
  }
  for (const auto& o : overlays) {
    Series s{o.label, {}, true};
    for (std::size_t i = 0; i < o.tau.size() && i < o.proportion.size(); ++i) {
      if (o.proportion[i] > 0 && std::isfinite(std::log(o.proportion[i]))) s.pts.emplace_back(o.tau[i], std::log(o.proportion[i]));
    }
    series.push_back(std::move(s));
  }
  double x0 = 0, x1 = 1, y0 = -1, y1 = 0;
  bool any = false;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.pts) {
      if (!any) x0 = x1 = x, y0 = y1 = y, any = true;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (x1 - x0 < 1e-9) x1 = x0 + 1;
  if (y1 - y0 < 1e-9) y0 = y1 - 1;
  const double W = 640, H = 420, L = 60, R = 160, T = 30, B = 40;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return T + (y1 - y) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
    << "<title>" << xml_escape(title) << "</title>\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 8 << "\" font-size=\"12\" text-anchor=\"middle\">tau</text>\n"
    << "<text x=\"14\" y=\"" << (T + H - B) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << (T + H - B) / 2
    << ")\" text-anchor=\"middle\">log proportion</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    o << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << H - B + 14 << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(xv)
      << "</text>\n";
    o << "<text x=\"" << L - 4 << "\" y=\"" << fmt(py(yv) + 3) << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(yv)
      << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 6];
    if (!s.pts.empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
      for (std::size_t i = 0; i < s.pts.size(); ++i) {
        if (i) o << ' ';
        o << fmt(px(s.pts[i].first)) << ',' << fmt(py(s.pts[i].second));
      }
      o << "\"/>\n";
    }
    const double ly = T + 14 * static_cast<double>(k) + 6;
    o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly << "\" stroke=\""
      << color << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    o << "<text x=\"" << W - R + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"10\">" << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void emit_svg(const std::vector<DistributionTable>& tables, const std::vector<Overlay>& overlays,
              const std::string& path, const std::string& title) {
  write_text(path, svg_plot(tables, overlays, title));
}

}  // namespace qcs
