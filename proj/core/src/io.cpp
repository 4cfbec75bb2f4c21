#include "kk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "kk/error.hpp"

namespace kk::io {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::filesystem::path write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                       const std::optional<ModelChoice>& params) {
  std::filesystem::create_directories(dir);
  json index;
  index["model"] = traj.model;
  index["epsilon"] = traj.epsilon;
  index["dx"] = traj.grid.dx();
  index["grid"] = {{"x_left", traj.grid.x_left},
                   {"x_right", traj.grid.x_right},
                   {"n_cells", traj.grid.n_cells},
                   {"boundary", traj.grid.boundary == Boundary::periodic ? "periodic" : "outflow"}};
  if (params) {
    index["model_params"] = {{"name", params->name},
                             {"B", params->B},
                             {"alpha", params->alpha},
                             {"rho_min", params->rho_min},
                             {"source", {{"kind", std::string(to_string(params->source.kind))},
                                         {"k", params->source.k}}}};
  }
  json t_values = json::array();
  json files = json::array();
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const Field& f = traj.snapshots[k];
    char name[32];
    std::snprintf(name, sizeof name, "snap_%04zu.csv", k);
    std::string body = "x,rho,m,w\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
      body += format_number(traj.grid.center(static_cast<int>(i)));
      body += ',';
      body += format_number(f.rho[i]);
      body += ',';
      body += format_number(f.m[i]);
      body += ',';
      body += format_number(f.w(i));
      body += '\n';
    }
    write_text(dir / name, body);
    t_values.push_back(f.t);
    files.push_back(name);
  }
  index["t_values"] = t_values;
  index["files"] = files;
  const auto path = dir / "index.json";
  write_text(path, index.dump(2) + "\n");
  return path;
}

namespace {

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("missing trajectory file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);  // header
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      double v = 0.0;
      const auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc()) {
        throw ParseError(path.string() + ": bad number on line " + std::to_string(lineno));
      }
      row.push_back(v);
      p = r.ptr;
      if (p < end && *p == ',') ++p;
    }
    if (row.size() != columns) {
      throw ParseError(path.string() + ": expected " + std::to_string(columns) +
                       " columns on line " + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Trajectory read_trajectory(const std::filesystem::path& index_path) {
  std::ifstream in(index_path);
  if (!in) throw MissingInputError("missing trajectory index " + index_path.string());
  json index;
  try {
    in >> index;
  } catch (const json::exception& e) {
    throw ParseError(index_path.string() + ": " + e.what());
  }
  Trajectory traj;
  try {
    const auto files = index.at("files").get<std::vector<std::string>>();
    const auto t_values = index.at("t_values").get<std::vector<double>>();
    if (files.empty()) throw MissingInputError(index_path.string() + " lists no snapshots");
    if (files.size() != t_values.size()) {
      throw ParseError(index_path.string() + ": files and t_values differ in length");
    }
    traj.model = index.value("model", std::string());
    traj.epsilon = index.value("epsilon", 0.0);
    if (index.contains("grid")) {
      const json& g = index.at("grid");
      traj.grid.x_left = g.at("x_left");
      traj.grid.x_right = g.at("x_right");
      traj.grid.n_cells = g.at("n_cells");
      traj.grid.boundary =
          g.value("boundary", std::string("periodic")) == "outflow" ? Boundary::outflow
                                                                    : Boundary::periodic;
    }
    const auto dir = index_path.parent_path();
    for (std::size_t k = 0; k < files.size(); ++k) {
      const auto rows = read_csv(dir / files[k], 4);
      Field f;
      f.t = t_values[k];
      for (const auto& r : rows) {
        f.rho.push_back(r[1]);
        f.m.push_back(r[2]);
      }
      if (!index.contains("grid")) {
        if (rows.size() < 2) throw ParseError("cannot infer grid from " + files[k]);
        const double dx = rows[1][0] - rows[0][0];
        traj.grid.n_cells = static_cast<int>(rows.size());
        traj.grid.x_left = rows[0][0] - 0.5 * dx;
        traj.grid.x_right = traj.grid.x_left + dx * rows.size();
      }
      if (f.size() != static_cast<std::size_t>(traj.grid.n_cells)) {
        throw ParseError(files[k] + " does not match the grid size");
      }
      traj.snapshots.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw ParseError(index_path.string() + ": " + e.what());
  }
  traj.min_rho = std::numeric_limits<double>::infinity();
  traj.max_rho = -traj.min_rho;
  for (const auto& f : traj.snapshots) {
    for (double r : f.rho) {
      traj.min_rho = std::min(traj.min_rho, r);
      traj.max_rho = std::max(traj.max_rho, r);
    }
  }
  return traj;
}

std::optional<ModelChoice> read_model_params(const std::filesystem::path& index_path) {
  std::ifstream in(index_path);
  if (!in) throw MissingInputError("missing trajectory index " + index_path.string());
  try {
    json index;
    in >> index;
    if (!index.contains("model_params")) return std::nullopt;
    const json& p = index.at("model_params");
    ModelChoice c;
    c.name = p.at("name");
    c.B = p.at("B");
    c.alpha = p.at("alpha");
    c.rho_min = p.at("rho_min");
    c.source.kind = source_kind_from_string(p.at("source").at("kind").get<std::string>());
    c.source.k = p.at("source").at("k");
    return c;
  } catch (const json::exception& e) {
    throw ParseError(index_path.string() + ": " + e.what());
  } catch (const InputError& e) {
    throw ParseError(index_path.string() + ": " + e.what());
  }
}

void write_decay_csv(const std::vector<DecayRecord>& rows, const std::filesystem::path& path) {
  std::string body = "epsilon,functional,value\n";
  for (const auto& r : rows) {
    body += format_number(r.epsilon) + "," + r.functional + "," + format_number(r.value) + "\n";
  }
  write_text(path, body);
}

void write_measure_csv(const EmpiricalMeasure& measure, const std::filesystem::path& path) {
  std::string body = "rho_center,w_center,weight\n";
  for (int i = 0; i < measure.bins.rho.count; ++i) {
    for (int j = 0; j < measure.bins.w.count; ++j) {
      const double v = measure.weight(i, j);
      if (v == 0.0) continue;
      body += format_number(measure.bins.rho.center(i)) + "," +
              format_number(measure.bins.w.center(j)) + "," + format_number(v) + "\n";
    }
  }
  write_text(path, body);
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kPanelHeight = 240.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 40.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels) {
  const double height = kPanelHeight * std::max<std::size_t>(1, panels.size());
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
      << "\" height=\"" << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const PlotPanel& panel = panels[p];
    const double top = p * kPanelHeight + kMarginTop;
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;
    auto tx = [&](double v) { return panel.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return panel.log_y ? std::log10(v) : v; };
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : panel.series) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        const double X = tx(s.x[i]), Y = ty(s.y[i]);
        if (!std::isfinite(X) || !std::isfinite(Y)) continue;
        xmin = std::min(xmin, X);
        xmax = std::max(xmax, X);
        ymin = std::min(ymin, Y);
        ymax = std::max(ymax, Y);
      }
    }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (xmax - xmin < 1e-300) xmin -= 0.5, xmax += 0.5;
    if (ymax - ymin < 1e-12 * (1.0 + std::abs(ymax))) {
      const double pad = 0.5 * (1.0 + std::abs(ymax)) * 1e-3;
      ymin -= pad;
      ymax += pad;
    }
    auto px = [&](double X) { return kMarginLeft + (X - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double Y) { return top + plot_h - (Y - ymin) / (ymax - ymin) * plot_h; };

    svg << "<g class=\"panel\">\n";
    svg << "<text x=\"" << fixed(kMarginLeft) << "\" y=\"" << fixed(top - 10) << "\">"
        << escape(panel.title) << "</text>\n";
    svg << "<rect x=\"" << fixed(kMarginLeft) << "\" y=\"" << fixed(top) << "\" width=\""
        << fixed(plot_w) << "\" height=\"" << fixed(plot_h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double X = xmin + (xmax - xmin) * k / 4.0;
      const double Y = ymin + (ymax - ymin) * k / 4.0;
      const double xv = panel.log_x ? std::pow(10.0, X) : X;
      const double yv = panel.log_y ? std::pow(10.0, Y) : Y;
      svg << "<text x=\"" << fixed(px(X)) << "\" y=\"" << fixed(top + plot_h + 14)
          << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
      svg << "<text x=\"" << fixed(kMarginLeft - 4) << "\" y=\"" << fixed(py(Y) + 4)
          << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\""
        << fixed(top + plot_h + 30) << "\" text-anchor=\"middle\">" << escape(panel.x_label)
        << "</text>\n";
    for (std::size_t s = 0; s < panel.series.size(); ++s) {
      const Series& ser = panel.series[s];
      const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
      svg << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.2\" points=\"";
      bool first = true;
      for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
        const double X = tx(ser.x[i]), Y = ty(ser.y[i]);
        if (!std::isfinite(X) || !std::isfinite(Y)) continue;
        if (!first) svg << ' ';
        svg << fixed(px(X)) << ',' << fixed(py(Y));
        first = false;
      }
      svg << "\"/>\n";
      const double ly = top + 12 + 14 * s;
      svg << "<line x1=\"" << fixed(kWidth - kMarginRight + 10) << "\" y1=\"" << fixed(ly - 4)
          << "\" x2=\"" << fixed(kWidth - kMarginRight + 30) << "\" y2=\"" << fixed(ly - 4)
          << "\" stroke=\"" << color << "\"/>\n";
      svg << "<text x=\"" << fixed(kWidth - kMarginRight + 34) << "\" y=\"" << fixed(ly) << "\">"
          << escape(ser.label) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace kk::io
