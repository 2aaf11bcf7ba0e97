#include "hotspots/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

namespace hotspots {

namespace {

using Slot = std::variant<int*, double*, bool*, std::uint64_t*, std::string*>;

struct Binding {
  const char* key;
  Slot slot;
  bool hashed = true;
};

std::vector<Binding> bind(RunConfig& c) {
  SolverSettings& s = c.solver;
  AnalysisSettings& a = c.analysis;
  return {
      {"solver.terms", &s.terms},
      {"solver.center_order", &s.center_order},
      {"solver.image_blocks", &s.image_blocks},
      {"solver.boundary_factor", &s.boundary_factor},
      {"solver.interior_factor", &s.interior_factor},
      {"solver.exclusion_radius", &s.exclusion_radius},
      {"solver.sigma_tol", &s.sigma_tol},
      {"solver.residual_tol", &s.residual_tol},
      {"solver.fem_refinement", &s.fem_refinement},
      {"solver.scan_lo", &s.scan_lo},
      {"solver.scan_hi", &s.scan_hi},
      {"solver.scan_resolution", &s.scan_resolution},
      {"solver.refine_width", &s.refine_width},
      {"solver.rank_tol", &s.rank_tol},
      {"solver.seed", &s.seed},
      {"analysis.vertex_exclusion", &a.vertex_exclusion},
      {"analysis.edge_samples", &a.edge_samples},
      {"analysis.seed_grid", &a.seed_grid},
      {"analysis.grad_tol", &a.grad_tol},
      {"analysis.degeneracy", &a.degeneracy},
      {"analysis.mixed_tol", &a.mixed_tol},
      {"analysis.vertex_gap", &a.vertex_gap},
      {"analysis.coeff_floor", &a.coeff_floor},
      {"analysis.vertex_zero", &a.vertex_zero},
      {"analysis.extremum_tol", &a.extremum_tol},
      {"analysis.extremum_grid", &a.extremum_grid},
      {"analysis.extremum_boundary", &a.extremum_boundary},
      {"analysis.nodal_samples", &a.nodal_samples},
      {"analysis.nodal_zero", &a.nodal_zero},
      {"analysis.nodal_step", &a.nodal_step},
      {"analysis.nodal_min_step", &a.nodal_min_step},
      {"analysis.ring_radius", &a.ring_radius},
      {"analysis.ring_samples", &a.ring_samples},
      {"analysis.probe_radius", &a.probe_radius},
      {"analysis.quadrature_nodes", &a.quadrature_nodes},
      {"analysis.vertex_model_floor", &a.vertex_model_floor},
      {"analysis.vertex_model_grid", &a.vertex_model_grid},
      {"sweep.resolution", &c.sweep_resolution},
      {"sweep.margin", &c.sweep_margin},
      {"sweep.workers", &c.sweep_workers, false},
      {"sweep.near_equilateral", &c.near_equilateral},
      {"path.steps", &c.path_steps},
      {"path.window", &c.path_window},
      {"path.min_alignment", &c.path_min_alignment},
      {"output.dir", &c.output.dir, false},
      {"output.json", &c.output.json, false},
      {"output.csv", &c.output.csv, false},
      {"output.svg", &c.output.svg, false},
  };
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("config: bad value for " + key + ": '" + v + "'");
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Writer {
  const std::string& key;
  const std::string& value;
  void operator()(int* p) const { *p = parse_number<int>(key, value); }
  void operator()(double* p) const { *p = parse_number<double>(key, value); }
  void operator()(std::uint64_t* p) const { *p = parse_number<std::uint64_t>(key, value); }
  void operator()(std::string* p) const { *p = value; }
  void operator()(bool* p) const {
    if (value == "true" || value == "1") {
      *p = true;
    } else if (value == "false" || value == "0") {
      *p = false;
    } else {
      throw ConfigError("config: bad boolean for " + key + ": '" + value + "'");
    }
  }
};

struct Reader {
  std::string operator()(int* p) const { return std::to_string(*p); }
  std::string operator()(double* p) const { return format_double(*p); }
  std::string operator()(std::uint64_t* p) const { return std::to_string(*p); }
  std::string operator()(std::string* p) const { return "\"" + *p + "\""; }
  std::string operator()(bool* p) const { return *p ? "true" : "false"; }
};

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (auto& b : bind(*this)) {
    if (key == b.key) {
      std::visit(Writer{key, unquote(trim(value))}, b.slot);
      return;
    }
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

std::string RunConfig::get(const std::string& key) const {
  auto& self = const_cast<RunConfig&>(*this);
  for (auto& b : bind(self))
    if (key == b.key) return std::visit(Reader{}, b.slot);
  throw ConfigError("config: unknown key '" + key + "'");
}

std::string RunConfig::to_text() const {
  auto& self = const_cast<RunConfig&>(*this);
  std::string out;
  for (auto& b : bind(self)) out += std::string(b.key) + " = " + std::visit(Reader{}, b.slot) + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const {
  auto& self = const_cast<RunConfig&>(*this);
  std::uint64_t h = 14695981039346656037ull;
  for (auto& b : bind(self)) {
    if (!b.hashed) continue;
    const std::string line = std::string(b.key) + "=" + std::visit(Reader{}, b.slot) + "\n";
    for (unsigned char ch : line) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

void RunConfig::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0)) throw ConfigError(std::string("config: ") + name + " must be positive");
  };
  positive(solver.terms, "solver.terms");
  if (solver.center_order < 0) throw ConfigError("config: solver.center_order must be >= 0");
  positive(solver.boundary_factor, "solver.boundary_factor");
  positive(solver.interior_factor, "solver.interior_factor");
  positive(solver.exclusion_radius, "solver.exclusion_radius");
  positive(solver.sigma_tol, "solver.sigma_tol");
  positive(solver.residual_tol, "solver.residual_tol");
  positive(solver.fem_refinement, "solver.fem_refinement");
  positive(solver.scan_lo, "solver.scan_lo");
  if (!(solver.scan_hi > solver.scan_lo)) throw ConfigError("config: solver.scan_hi must exceed scan_lo");
  positive(solver.scan_resolution, "solver.scan_resolution");
  positive(solver.refine_width, "solver.refine_width");
  positive(solver.rank_tol, "solver.rank_tol");
  positive(analysis.vertex_exclusion, "analysis.vertex_exclusion");
  positive(analysis.edge_samples - 1, "analysis.edge_samples");
  positive(analysis.seed_grid, "analysis.seed_grid");
  positive(analysis.grad_tol, "analysis.grad_tol");
  positive(analysis.degeneracy, "analysis.degeneracy");
  positive(analysis.mixed_tol, "analysis.mixed_tol");
  positive(analysis.vertex_gap, "analysis.vertex_gap");
  positive(analysis.coeff_floor, "analysis.coeff_floor");
  positive(analysis.vertex_zero, "analysis.vertex_zero");
  positive(analysis.extremum_tol, "analysis.extremum_tol");
  positive(analysis.extremum_grid, "analysis.extremum_grid");
  positive(analysis.extremum_boundary, "analysis.extremum_boundary");
  positive(analysis.nodal_samples, "analysis.nodal_samples");
  positive(analysis.nodal_zero, "analysis.nodal_zero");
  positive(analysis.nodal_step, "analysis.nodal_step");
  positive(analysis.nodal_min_step, "analysis.nodal_min_step");
  positive(analysis.ring_radius, "analysis.ring_radius");
  positive(analysis.ring_samples, "analysis.ring_samples");
  positive(analysis.probe_radius, "analysis.probe_radius");
  positive(analysis.quadrature_nodes, "analysis.quadrature_nodes");
  positive(analysis.vertex_model_floor, "analysis.vertex_model_floor");
  positive(analysis.vertex_model_grid, "analysis.vertex_model_grid");
  if (sweep_resolution < 8) throw ConfigError("config: sweep.resolution must be at least 8");
  if (!(sweep_margin >= 0.05)) throw ConfigError("config: sweep.margin must be at least 0.05");
  if (sweep_workers < 0) throw ConfigError("config: sweep.workers must be >= 0");
  positive(near_equilateral, "sweep.near_equilateral");
  if (path_steps < 1) throw ConfigError("config: path.steps must be positive");
  positive(path_window, "path.window");
  positive(path_min_alignment, "path.min_alignment");
}

SweepSettings RunConfig::sweep_settings() const {
  SweepSettings s;
  s.resolution = sweep_resolution;
  s.margin = sweep_margin;
  s.workers = sweep_workers;
  s.near_equilateral = near_equilateral;
  s.solver = solver;
  s.analysis = analysis;
  return s;
}

ContinuationSettings RunConfig::continuation_settings() const {
  ContinuationSettings s;
  s.steps = path_steps;
  s.window = path_window;
  s.min_alignment = path_min_alignment;
  s.solver = solver;
  s.analysis = analysis;
  return s;
}

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(number) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  for (const auto& [k, v] : parse_flat_config(ss.str())) cfg.set(k, v);
  return cfg;
}

void apply_environment(RunConfig& cfg) {
  if (const char* seed = std::getenv("HOTSPOTS_SEED"); seed && *seed) cfg.set("solver.seed", seed);
}

std::string output_header(const RunConfig& cfg) {
  return "hotspots config_hash=" + cfg.hash_hex() + " seed=" + std::to_string(cfg.solver.seed);
}

}  // namespace hotspots
