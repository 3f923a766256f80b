#include "circ/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "circ/errors.hpp"

namespace circ {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawConfig = std::map<std::string, RawEntry>;  // "section.key" -> entry

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw ValidationError(os.str());
}

RawConfig read_raw(std::istream& in) {
  RawConfig raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(lineno, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(lineno, "empty section name");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    if (section.empty()) fail(lineno, "key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail(lineno, "empty key");
    const std::string full = section + "." + key;
    if (raw.count(full)) fail(lineno, "duplicate key '" + full + "'");
    raw[full] = {trim(s.substr(eq + 1)), lineno};
  }
  return raw;
}

class Reader {
 public:
  explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  std::string require_string(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) {
      throw ValidationError("config is missing required key '" + key + "'");
    }
    used_.insert(key);
    return it->second.value;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? parse_number(key) : fallback;
  }

  double require_number(const std::string& key) {
    require_string(key);
    return parse_number(key);
  }

  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const auto& e = raw_.at(key);
    used_.insert(key);
    try {
      std::size_t pos = 0;
      const long v = std::stol(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(e.line, "expected an integer for '" + key + "', got '" + e.value + "'");
    }
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? require_string(key) : fallback;
  }

  std::vector<long> integer_list(const std::string& key, std::vector<long> fallback) {
    if (!has(key)) return fallback;
    const auto& e = raw_.at(key);
    used_.insert(key);
    std::vector<long> out;
    std::istringstream is(e.value);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        out.push_back(std::stol(trim(tok)));
      } catch (const std::exception&) {
        fail(e.line, "expected a comma-separated integer list for '" + key + "'");
      }
    }
    if (out.empty()) fail(e.line, "empty list for '" + key + "'");
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : raw_) {
      if (!used_.count(key)) fail(entry.line, "unknown key '" + key + "'");
    }
  }

 private:
  double parse_number(const std::string& key) {
    const auto& e = raw_.at(key);
    used_.insert(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(e.line, "expected a number for '" + key + "', got '" + e.value + "'");
    }
  }

  RawConfig raw_;
  std::set<std::string> used_;
};

}  // namespace

ScenarioFile parse_scenario(std::istream& in) {
  Reader r(read_raw(in));
  ScenarioFile s;

  const std::string shape = r.require_string("body.shape");
  if (shape == "circle") {
    s.shape = CircleSpec{r.require_number("body.radius")};
  } else if (shape == "ellipse") {
    s.shape = EllipseSpec{r.require_number("body.a"), r.require_number("body.b")};
  } else if (shape == "joukowski") {
    JoukowskiSpec jk;
    jk.circle_radius = r.require_number("body.circle_radius");
    jk.offset = Vec2(r.number("body.offset_x", 0.0), r.number("body.offset_y", 0.0));
    jk.c = r.require_number("body.c");
    s.shape = jk;
  } else {
    throw ValidationError("unknown body.shape '" + shape +
                          "' (expected circle, ellipse or joukowski)");
  }
  s.panels = static_cast<int>(r.integer("body.panels", 256));
  s.rho = r.number("body.rho", 1.0);

  s.gamma = r.require_number("dynamics.gamma");
  s.dt = r.number("dynamics.dt", 1e-3);
  s.steps = r.integer("dynamics.steps", 0);
  const std::string integ = r.string("dynamics.integrator", "implicit_midpoint");
  if (integ == "rk4") {
    s.integrator = IntegratorKind::Rk4;
  } else if (integ == "implicit_midpoint") {
    s.integrator = IntegratorKind::ImplicitMidpoint;
  } else {
    throw ValidationError("unknown dynamics.integrator '" + integ + "'");
  }
  const std::string space = r.string("dynamics.space", "se2_magnetic");
  if (space == "se2_magnetic") {
    s.space = PhaseSpaceKind::Se2Magnetic;
  } else if (space == "osc") {
    s.space = PhaseSpaceKind::Osc;
  } else {
    throw ValidationError("unknown dynamics.space '" + space + "'");
  }
  s.pi0 = Se2Momentum(r.number("dynamics.Pi0", 0.0), r.number("dynamics.Px0", 0.0),
                      r.number("dynamics.Py0", 0.0));
  s.pose0 = Se2Element(r.number("dynamics.theta0", 0.0), r.number("dynamics.x0", 0.0),
                       r.number("dynamics.y0", 0.0));
  s.has_p0 = r.has("dynamics.p0");
  if (s.has_p0) s.p0 = r.require_number("dynamics.p0");

  s.trajectory = r.string("outputs.trajectory", s.trajectory);
  s.summary = r.string("outputs.summary", s.summary);
  s.field = r.string("outputs.field", s.field);
  s.leaves = r.string("outputs.leaves", s.leaves);
  s.grid_min_x = r.number("outputs.grid_min_x", s.grid_min_x);
  s.grid_max_x = r.number("outputs.grid_max_x", s.grid_max_x);
  s.grid_min_y = r.number("outputs.grid_min_y", s.grid_min_y);
  s.grid_max_y = r.number("outputs.grid_max_y", s.grid_max_y);
  s.grid_n = static_cast<int>(r.integer("outputs.grid_n", s.grid_n));
  s.field_steps = r.integer_list("outputs.field_steps", s.field_steps);
  s.leaf_min = r.number("outputs.leaf_min", s.leaf_min);
  s.leaf_max = r.number("outputs.leaf_max", s.leaf_max);
  s.leaf_count = static_cast<int>(r.integer("outputs.leaf_count", s.leaf_count));

  r.reject_unknown();

  if (!(s.dt > 0.0)) throw ValidationError("dynamics.dt must be positive");
  if (s.steps < 0) throw ValidationError("dynamics.steps must be nonnegative");
  if (s.grid_n < 2) throw ValidationError("outputs.grid_n must be at least 2");
  if (s.leaf_count < 1) throw ValidationError("outputs.leaf_count must be positive");
  return s;
}

ScenarioFile parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_scenario(in);
}

SimConfig ScenarioFile::sim_config(const MassModel& mass) const {
  SimConfig c;
  c.mass = mass;
  c.gamma = gamma;
  c.dt = dt;
  c.steps = steps;
  c.integrator = integrator;
  c.pi0 = pi0;
  c.g0 = pose0;
  c.space = space;
  c.p0 = extension_level();
  return c;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_scenario(const ScenarioFile& s, std::ostream& out) {
  out << "[body]\n";
  if (const auto* c = std::get_if<CircleSpec>(&s.shape)) {
    out << "shape = circle\n"
        << "radius = " << fmt_num(c->radius) << "\n";
  } else if (const auto* e = std::get_if<EllipseSpec>(&s.shape)) {
    out << "shape = ellipse\n"
        << "a = " << fmt_num(e->a) << "\n"
        << "b = " << fmt_num(e->b) << "\n";
  } else {
    const auto& jk = std::get<JoukowskiSpec>(s.shape);
    out << "shape = joukowski\n"
        << "circle_radius = " << fmt_num(jk.circle_radius) << "\n"
        << "offset_x = " << fmt_num(jk.offset.x()) << "\n"
        << "offset_y = " << fmt_num(jk.offset.y()) << "\n"
        << "c = " << fmt_num(jk.c) << "\n";
  }
  out << "panels = " << s.panels << "\n"
      << "rho = " << fmt_num(s.rho) << "\n\n";

  out << "[dynamics]\n"
      << "gamma = " << fmt_num(s.gamma) << "\n"
      << "dt = " << fmt_num(s.dt) << "\n"
      << "steps = " << s.steps << "\n"
      << "integrator = "
      << (s.integrator == IntegratorKind::Rk4 ? "rk4" : "implicit_midpoint") << "\n"
      << "space = " << (s.space == PhaseSpaceKind::Osc ? "osc" : "se2_magnetic")
      << "\n"
      << "Pi0 = " << fmt_num(s.pi0.ang) << "\n"
      << "Px0 = " << fmt_num(s.pi0.lin.x()) << "\n"
      << "Py0 = " << fmt_num(s.pi0.lin.y()) << "\n"
      << "theta0 = " << fmt_num(s.pose0.theta()) << "\n"
      << "x0 = " << fmt_num(s.pose0.translation().x()) << "\n"
      << "y0 = " << fmt_num(s.pose0.translation().y()) << "\n";
  if (s.has_p0) out << "p0 = " << fmt_num(s.p0) << "\n";
  out << "\n[outputs]\n"
      << "trajectory = " << s.trajectory << "\n"
      << "summary = " << s.summary << "\n"
      << "field = " << s.field << "\n"
      << "leaves = " << s.leaves << "\n"
      << "grid_min_x = " << fmt_num(s.grid_min_x) << "\n"
      << "grid_max_x = " << fmt_num(s.grid_max_x) << "\n"
      << "grid_min_y = " << fmt_num(s.grid_min_y) << "\n"
      << "grid_max_y = " << fmt_num(s.grid_max_y) << "\n"
      << "grid_n = " << s.grid_n << "\n";
  out << "field_steps = ";
  for (std::size_t i = 0; i < s.field_steps.size(); ++i) {
    out << (i ? "," : "") << s.field_steps[i];
  }
  out << "\n"
      << "leaf_min = " << fmt_num(s.leaf_min) << "\n"
      << "leaf_max = " << fmt_num(s.leaf_max) << "\n"
      << "leaf_count = " << s.leaf_count << "\n";
}

}  // namespace circ
