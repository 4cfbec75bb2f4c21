#include "kk/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kk/error.hpp"

namespace kk {

using nlohmann::json;

ModelSpec build_model(const ModelChoice& c) {
  ModelSpec m;
  if (c.name == "gc") {
    m = make_gc(c.B, c.alpha, c.source);
  } else if (c.name == "chaplygin") {
    m = make_chaplygin(c.source);
  } else if (c.name == "convex") {
    m = make_convex(c.B, c.alpha, c.source);
  } else {
    throw ConfigError("unknown model '" + c.name + "' (expected gc, chaplygin or convex)");
  }
  m.rho_domain.lo = c.rho_min;
  return m;
}

void Scenario::validate() const {
  grid.validate();
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (n_snapshots < 2) throw ConfigError("snapshots must be at least 2");
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
  if (!(diff_fraction > 0.0 && diff_fraction < 0.5)) {
    throw ConfigError("diff_fraction must lie in (0, 0.5)");
  }
  for (std::size_t i = 0; i < epsilon.size(); ++i) {
    if (!(epsilon[i] > 0.0)) throw ConfigError("epsilon values must be positive");
    if (i > 0 && !(epsilon[i] < epsilon[i - 1])) {
      throw ConfigError("epsilon list must be strictly decreasing");
    }
  }
  for (int i = 0; i < grid.n_cells; ++i) {
    if (evaluate(rho0, grid.center(i)) < 0.0) throw ConfigError("initial rho must be nonnegative");
  }
  if (!(model.rho_min > 0.0)) throw ConfigError("rho_min must be positive");
}

namespace {

/// Converts a byte offset into "line L, column C" of text.
std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ParseError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

double required_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + ": missing '" + key + "'");
  return number(j, key, 0.0);
}

TableProfile read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot read table file " + path.string());
  TableProfile t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw ParseError(path.string() + ": line " + std::to_string(lineno) + " needs x,value");
    }
    try {
      const double x = std::stod(a);
      const double v = std::stod(b);
      t.x.push_back(x);
      t.value.push_back(v);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      throw ParseError(path.string() + ": line " + std::to_string(lineno) + " is not numeric");
    }
  }
  if (t.x.size() < 2) throw ParseError(path.string() + ": table needs at least 2 rows");
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    if (!(t.x[i] > t.x[i - 1])) throw ParseError(path.string() + ": x must increase");
  }
  return t;
}

Profile parse_profile(const json& j, const std::string& where, const std::filesystem::path& base) {
  if (j.is_number()) return ConstantProfile{j.get<double>()};
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ParseError(where + ": profile needs a string 'type' or a number");
  }
  const std::string type = j.at("type");
  if (type == "constant") return ConstantProfile{required_number(j, "value", where)};
  if (type == "riemann") {
    return RiemannProfile{required_number(j, "left", where), required_number(j, "right", where),
                          required_number(j, "x0", where)};
  }
  if (type == "sine") {
    return SineProfile{required_number(j, "mean", where), required_number(j, "amp", where),
                       number(j, "freq", 1.0)};
  }
  if (type == "table") {
    if (!j.contains("file") || !j.at("file").is_string()) {
      throw ParseError(where + ": table profile needs 'file'");
    }
    std::filesystem::path p = j.at("file").get<std::string>();
    if (p.is_relative()) p = base / p;
    return read_table(p);
  }
  throw ParseError(where + ": unknown profile type '" + type + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at " + position(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                     e.what());
  }
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  if (!j.contains("schema") || !j.at("schema").is_number_integer() || j.at("schema") != 1) {
    throw ParseError("scenario needs \"schema\": 1");
  }

  Scenario s;
  try {
    s.name = j.value("name", std::string("scenario"));

    if (!j.contains("model") || !j.at("model").is_object()) throw ParseError("missing 'model'");
    const json& m = j.at("model");
    s.model.name = m.value("name", std::string("gc"));
    s.model.B = number(m, "B", 1.0);
    s.model.alpha = number(m, "alpha", 0.5);
    s.model.rho_min = number(m, "rho_min", 1e-3);
    if (m.contains("source")) {
      const json& src = m.at("source");
      s.model.source.kind = source_kind_from_string(src.value("kind", std::string("none")));
      s.model.source.k = number(src, "k", 0.0);
    }

    if (!j.contains("initial")) throw ParseError("missing 'initial'");
    const json& init = j.at("initial");
    if (!init.contains("rho") || !init.contains("w")) {
      throw ParseError("'initial' needs both 'rho' and 'w'");
    }
    s.rho0 = parse_profile(init.at("rho"), "initial.rho", base_dir);
    s.w0 = parse_profile(init.at("w"), "initial.w", base_dir);

    if (!j.contains("grid")) throw ParseError("missing 'grid'");
    const json& g = j.at("grid");
    s.grid.x_left = number(g, "x_left", 0.0);
    s.grid.x_right = number(g, "x_right", 1.0);
    s.grid.n_cells = g.value("n_cells", 256);
    const std::string bc = g.value("boundary", std::string("periodic"));
    if (bc == "periodic") {
      s.grid.boundary = Boundary::periodic;
    } else if (bc == "outflow") {
      s.grid.boundary = Boundary::outflow;
    } else {
      throw ParseError("grid.boundary must be 'periodic' or 'outflow'");
    }

    s.t_end = required_number(j, "t_end", "scenario");
    if (j.contains("epsilon")) s.epsilon = j.at("epsilon").get<std::vector<double>>();
    if (j.contains("region")) {
      const json& r = j.at("region");
      RegionSpec reg;
      reg.c1_low = number(r, "C1", reg.c1_low);
      reg.c2_high = number(r, "C2", reg.c2_high);
      s.region = reg;
    }
    s.n_snapshots = j.value("snapshots", 50);
    s.cfl = number(j, "cfl", 0.45);
    s.diff_fraction = number(j, "diff_fraction", 0.4);
    s.audit_threshold = number(j, "audit_threshold", 1.0);
    if (j.contains("window")) {
      s.window.x_lo = number(j.at("window"), "x_lo", s.window.x_lo);
      s.window.x_hi = number(j.at("window"), "x_hi", s.window.x_hi);
    }
    s.output = j.value("output", std::string("out/") + s.name);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid scenario field: ") + e.what());
  } catch (const InputError& e) {
    throw ParseError(e.what());
  }
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot read scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace kk
