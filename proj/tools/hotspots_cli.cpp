// Command-line front end: solve, analyze, sweep, path, isosceles, selftest.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hotspots/analysis.hpp"
#include "hotspots/config.hpp"
#include "hotspots/eigensolver.hpp"
#include "hotspots/field.hpp"
#include "hotspots/io.hpp"
#include "hotspots/selftest.hpp"
#include "hotspots/svg.hpp"
#include "hotspots/sweep.hpp"

namespace fs = std::filesystem;
using namespace hotspots;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerification = 2;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
  int workers = -1;
  std::optional<std::uint64_t> seed;

  std::string angles;
  std::string triangle_file;
  std::string eigenpair_file;
  int resolution = -1;
  double margin = -1;
  int steps = -1;
  double lo = 0.6, hi = 1.4;
  int iso_steps = 40;
  std::vector<int> criteria;
};

RunConfig build_config(const Options& o) {
  RunConfig cfg = o.config_file.empty() ? RunConfig{} : load_config(o.config_file);
  apply_environment(cfg);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.out_dir.empty()) cfg.output.dir = o.out_dir;
  if (o.workers >= 0) cfg.sweep_workers = o.workers;
  if (o.seed) cfg.solver.seed = *o.seed;
  if (o.resolution > 0) cfg.sweep_resolution = o.resolution;
  if (o.margin >= 0) cfg.sweep_margin = o.margin;
  if (o.steps > 0) cfg.path_steps = o.steps;
  cfg.validate();
  return cfg;
}

std::pair<double, double> parse_angles(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("--angles expects beta1,beta2");
  try {
    std::size_t n1 = 0, n2 = 0;
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    const double b1 = std::stod(a, &n1), b2 = std::stod(b, &n2);
    if (n1 != a.size() || n2 != b.size()) throw std::invalid_argument("trailing characters");
    return {b1, b2};
  } catch (const std::logic_error&) {
    throw UsageError("--angles expects two numbers, got '" + s + "'");
  }
}

LabeledTriangle input_triangle(const Options& o) {
  if (!o.angles.empty() && !o.triangle_file.empty())
    throw UsageError("give either --angles or --triangle, not both");
  if (!o.triangle_file.empty()) return triangle_from_json(read_json_file(o.triangle_file));
  if (o.angles.empty()) throw UsageError("a triangle is required: --angles or --triangle");
  const auto [b1, b2] = parse_angles(o.angles);
  try {
    return from_angles(b1, b2);
  } catch (const GeometryError& e) {
    throw UsageError(e.what());
  }
}

Json header_json(const RunConfig& cfg) {
  return {{"generator", "hotspots"}, {"config_hash", cfg.hash_hex()}, {"seed", cfg.solver.seed}};
}

fs::path output_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output.dir);
  return fs::path(cfg.output.dir) / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string with_header(const RunConfig& cfg, Json body) {
  Json doc = {{"header", header_json(cfg)}};
  for (auto& [k, v] : body.items()) doc[k] = v;
  return doc.dump(2) + "\n";
}

int cmd_solve(const Options& o) {
  const RunConfig cfg = build_config(o);
  const LabeledTriangle t = input_triangle(o);
  Eigenpair ep = find_mu2(t, cfg.solver);
  const Certificate cert = residual_certificate(ep);
  if (cfg.output.json)
    write_text(output_path(cfg, "eigenpair.json"), with_header(cfg, eigenpair_to_json(ep)));
  Json summary = {{"mu", ep.mu},
                  {"sigma", ep.sigma},
                  {"multiplicity_flag", ep.multiplicity_flag},
                  {"certificate", certificate_to_json(cert)}};
  std::cout << with_header(cfg, summary);
  return cert.certified ? kOk : kVerification;
}

int cmd_analyze(const Options& o) {
  const RunConfig cfg = build_config(o);
  const Json doc = read_json_file(o.eigenpair_file);
  Eigenpair ep = [&] {
    try {
      return eigenpair_from_json(doc);
    } catch (const StaleEigenpair&) {
      throw;
    } catch (const GeometryError& e) {
      throw FormatError(e.what());
    }
  }();
  const EigenField field(ep);
  const HotSpotsVerdict v = hot_spots_verdict(FieldView::of(field), cfg.analysis);
  const std::string header = output_header(cfg);
  if (cfg.output.json) write_text(output_path(cfg, "verdict.json"), with_header(cfg, verdict_to_json(v)));
  if (cfg.output.csv) {
    std::ostringstream nodal, crit;
    write_nodal_csv(nodal, v.nodal, header);
    write_critical_csv(crit, v.reports, header);
    write_text(output_path(cfg, "nodal.csv"), nodal.str());
    write_text(output_path(cfg, "critical.csv"), crit.str());
  }
  if (cfg.output.svg)
    write_text(output_path(cfg, "contour.svg"), contour_svg(field, ep.triangle, ep.scale, &v, header));
  std::cout << to_string(v.classification) << " crit_count=" << v.crit_count;
  for (const auto& m : v.margins) std::cout << " margin=\"" << m << '"';
  std::cout << '\n';
  return kOk;
}

int cmd_sweep(const Options& o) {
  const RunConfig cfg = build_config(o);
  const SweepSettings s = cfg.sweep_settings();
  const auto records = moduli_sweep(s);
  const std::string header = output_header(cfg);
  if (cfg.output.csv) {
    std::ostringstream csv;
    write_sweep_csv(csv, records, header);
    write_text(output_path(cfg, "sweep.csv"), csv.str());
  }
  if (cfg.output.svg)
    write_text(output_path(cfg, "moduli.svg"), moduli_svg(records, s.resolution, s.margin, header));
  int crit = 0, nocrit = 0, amb = 0;
  for (const auto& r : records) {
    crit += r.verdict == Classification::crit;
    nocrit += r.verdict == Classification::nocrit;
    amb += r.verdict == Classification::ambiguous;
  }
  std::cout << records.size() << " nodes: CRIT " << crit << ", NOCRIT " << nocrit << ", AMBIGUOUS "
            << amb << '\n';
  return kOk;
}

int cmd_path(const Options& o) {
  const RunConfig cfg = build_config(o);
  Options start = o;
  if (start.angles.empty() && start.triangle_file.empty()) start.angles = "0.9,0.9";
  const LabeledTriangle t0 = input_triangle(start);
  const ShapeClass shape = classify(t0);
  if (shape.kind == ShapeKind::right || shape.is_equilateral)
    throw UsageError("path start must be neither right nor equilateral");
  const auto path = continuation(t0, cfg.continuation_settings());
  const TrajectoryReport tr = crit_trajectory(path);
  const std::string header = output_header(cfg);
  if (cfg.output.csv) {
    std::ostringstream csv;
    write_path_csv(csv, path, header);
    write_text(output_path(cfg, "path.csv"), csv.str());
  }
  bool aligned = true;
  for (const auto& r : path) aligned = aligned && r.aligned;
  Json summary = {{"samples", path.size()},
                  {"aligned", aligned},
                  {"critical_point_samples", tr.points.size()},
                  {"continuous", tr.continuous},
                  {"ambiguous_link", tr.ambiguous_link},
                  {"max_displacement", tr.max_displacement},
                  {"disappears", tr.disappears}};
  if (tr.last_t) {
    summary["last_t"] = *tr.last_t;
    summary["last_vertex"] = tr.last_vertex + 1;
    summary["last_vertex_distance"] = tr.last_vertex_distance;
    summary["last_vertex_u"] = tr.last_vertex_u;
    summary["last_min_vertex_u"] = tr.last_min_vertex_u;
  }
  std::cout << with_header(cfg, summary);
  return aligned ? kOk : kVerification;
}

int cmd_isosceles(const Options& o) {
  const RunConfig cfg = build_config(o);
  if (!(o.lo < std::numbers::pi / 3 && o.hi > std::numbers::pi / 3))
    throw UsageError("--lo and --hi must bracket pi/3");
  const IsoscelesScan scan = isosceles_scan(o.lo, o.hi, o.iso_steps, cfg.sweep_settings());
  const std::string header = output_header(cfg);
  if (cfg.output.csv) {
    std::ostringstream csv;
    csv << "# " << header << "\napex,verdict,u_apex,crit_x,crit_y,base_midpoint_distance\n";
    for (const auto& s : scan.samples)
      csv << format_real(s.apex) << ',' << to_string(s.verdict) << ',' << format_real(s.u_apex) << ','
          << (s.crit ? format_real(s.crit->x()) : "") << ',' << (s.crit ? format_real(s.crit->y()) : "")
          << ',' << format_real(s.base_midpoint_distance) << '\n';
    write_text(output_path(cfg, "isosceles.csv"), csv.str());
  }
  Json summary = {{"samples", scan.samples.size()}, {"monotone", scan.monotone}};
  summary["threshold"] = scan.threshold ? Json(*scan.threshold) : Json(nullptr);
  std::cout << with_header(cfg, summary);
  return scan.threshold && scan.monotone ? kOk : kVerification;
}

int cmd_selftest(const Options& o) {
  const RunConfig cfg = build_config(o);
  bool ok = true;
  run_acceptance(cfg, o.criteria, [&](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
    ok = ok && r.pass;
  });
  return ok ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second Neumann eigenfunctions of triangles and their critical points"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_file, "flat key = value configuration file");
  app.add_option("--set", o.overrides, "override one configuration key (key=value)");
  app.add_option("--out", o.out_dir, "output directory");
  app.add_option("--workers", o.workers, "sweep worker threads (0 = all cores)");
  app.add_option("--seed", o.seed, "seed for sampling (also HOTSPOTS_SEED)");

  auto* solve = app.add_subcommand("solve", "compute mu_2 and write eigenpair.json");
  solve->add_option("--angles", o.angles, "beta1,beta2 in radians");
  solve->add_option("--triangle", o.triangle_file, "JSON file with \"vertices\"");

  auto* analyze = app.add_subcommand("analyze", "classify a stored eigenpair");
  analyze->add_option("eigenpair", o.eigenpair_file, "eigenpair.json")->required();

  auto* sweep = app.add_subcommand("sweep", "classify a grid over the angle simplex");
  sweep->add_option("--resolution", o.resolution, "grid subdivisions");
  sweep->add_option("--margin", o.margin, "distance kept from the simplex boundary (radians)");

  auto* path = app.add_subcommand("path", "follow mu_2 along the straight path to the right isosceles triangle");
  path->add_option("--angles", o.angles, "start beta1,beta2 (default 0.9,0.9)");
  path->add_option("--triangle", o.triangle_file, "start triangle JSON");
  path->add_option("--steps", o.steps, "number of steps");

  auto* iso = app.add_subcommand("isosceles", "locate the apex angle where the critical point disappears");
  iso->add_option("--lo", o.lo, "smallest apex angle");
  iso->add_option("--hi", o.hi, "largest apex angle");
  iso->add_option("--steps", o.iso_steps, "grid steps before bisection");

  auto* self = app.add_subcommand("selftest", "run the acceptance suite");
  self->add_option("--criteria", o.criteria, "subset of criteria 1-12");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (analyze->parsed()) return cmd_analyze(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (path->parsed()) return cmd_path(o);
    if (iso->parsed()) return cmd_isosceles(o);
    if (self->parsed()) return cmd_selftest(o);
  } catch (const StaleEigenpair& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerification;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NoDipFound& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerification;
  }
  return kUsage;
}
