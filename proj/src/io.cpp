#include "hotspots/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hotspots {

namespace {

Json point_json(const Point& p) { return Json::array({p.x(), p.y()}); }

Point point_from(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError(std::string(what) + ": expected [x, y]");
  return Point(j[0].get<double>(), j[1].get<double>());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw FormatError(std::string("field '") + key + "' must be a boolean");
  } else {
    if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
  }
  return v.get<T>();
}

Json block_json(const VertexBlock& b) {
  Json j = {{"vertex", b.vertex},       {"nu", b.nu},
            {"beta", b.beta},           {"terms", b.terms},
            {"orientation", b.orientation}, {"origin", point_json(b.origin)},
            {"axis", point_json(b.axis)}, {"ref_radius", b.ref_radius}};
  if (b.mirrored) {
    j["mirror_point"] = point_json(b.mirror_point);
    j["mirror_normal"] = point_json(b.mirror_normal);
  }
  return j;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

void check_block(const Json& j, const VertexBlock& b, const std::string& what) {
  const double tol = 1e-9;
  const bool ok = number<int>(j, "vertex") == b.vertex && number<int>(j, "terms") == b.terms &&
                  number<int>(j, "orientation") == b.orientation &&
                  close(number<double>(j, "nu"), b.nu, tol) &&
                  close(number<double>(j, "beta"), b.beta, tol) &&
                  (point_from(field(j, "origin"), "origin") - b.origin).norm() <= tol &&
                  (point_from(field(j, "axis"), "axis") - b.axis).norm() <= tol &&
                  j.contains("mirror_point") == b.mirrored;
  if (!ok) throw StaleEigenpair("stored " + what + " does not match the triangle");
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

LabeledTriangle triangle_from_json(const Json& j) {
  const Json& v = field(j, "vertices");
  if (!v.is_array() || v.size() != 3) throw FormatError("'vertices' must hold three points");
  try {
    return LabeledTriangle(point_from(v[0], "vertex 1"), point_from(v[1], "vertex 2"),
                           point_from(v[2], "vertex 3"));
  } catch (const GeometryError& e) {
    throw FormatError(std::string("invalid triangle: ") + e.what());
  }
}

Json triangle_to_json(const LabeledTriangle& t) {
  return {{"vertices", Json::array({point_json(t.vertex(0)), point_json(t.vertex(1)),
                                    point_json(t.vertex(2))})}};
}

Json solver_settings_to_json(const SolverSettings& s) {
  return {{"terms", s.terms},
          {"center_order", s.center_order},
          {"image_blocks", s.image_blocks},
          {"boundary_factor", s.boundary_factor},
          {"interior_factor", s.interior_factor},
          {"exclusion_radius", s.exclusion_radius},
          {"sigma_tol", s.sigma_tol},
          {"residual_tol", s.residual_tol},
          {"fem_refinement", s.fem_refinement},
          {"scan_lo", s.scan_lo},
          {"scan_hi", s.scan_hi},
          {"scan_resolution", s.scan_resolution},
          {"refine_width", s.refine_width},
          {"rank_tol", s.rank_tol},
          {"seed", s.seed}};
}

SolverSettings solver_settings_from_json(const Json& j) {
  SolverSettings s;
  s.terms = number<int>(j, "terms");
  s.center_order = number<int>(j, "center_order");
  s.image_blocks = number<bool>(j, "image_blocks");
  s.boundary_factor = number<double>(j, "boundary_factor");
  s.interior_factor = number<double>(j, "interior_factor");
  s.exclusion_radius = number<double>(j, "exclusion_radius");
  s.sigma_tol = number<double>(j, "sigma_tol");
  s.residual_tol = number<double>(j, "residual_tol");
  s.fem_refinement = number<int>(j, "fem_refinement");
  s.scan_lo = number<double>(j, "scan_lo");
  s.scan_hi = number<double>(j, "scan_hi");
  s.scan_resolution = number<double>(j, "scan_resolution");
  s.refine_width = number<double>(j, "refine_width");
  s.rank_tol = number<double>(j, "rank_tol");
  s.seed = number<std::uint64_t>(j, "seed");
  return s;
}

Json eigenpair_to_json(const Eigenpair& ep) {
  Json blocks = Json::array();
  for (const auto& b : ep.basis.blocks) blocks.push_back(block_json(b));
  Json images = Json::array();
  for (const auto& b : ep.basis.images) images.push_back(block_json(b));
  Json centers = Json::array();
  for (const auto& c : ep.basis.centers)
    centers.push_back({{"center", point_json(c.center)}, {"order", c.order}, {"ref_radius", c.ref_radius}});
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i < ep.coeffs.size(); ++i) coeffs.push_back(ep.coeffs[i]);
  Json j = triangle_to_json(ep.triangle);
  j["mu"] = ep.mu;
  j["sigma"] = ep.sigma;
  j["sigma2"] = ep.sigma2;
  j["sigma_gap"] = ep.sigma_gap;
  j["multiplicity_flag"] = ep.multiplicity_flag;
  j["seed"] = ep.seed;
  j["scale"] = ep.scale;
  j["fem_estimate"] = ep.fem_estimate;
  j["settings"] = solver_settings_to_json(ep.settings);
  j["basis"] = {{"blocks", blocks}, {"images", images}, {"centers", centers}};
  j["coeffs"] = coeffs;
  return j;
}

Eigenpair eigenpair_from_json(const Json& j) {
  const LabeledTriangle t = triangle_from_json(j);
  const SolverSettings settings = solver_settings_from_json(field(j, "settings"));
  if (settings.terms < 1 || settings.center_order < 0)
    throw FormatError("settings: terms must be positive and center_order non-negative");
  const BasisSpec basis =
      BasisSpec::for_triangle(t, settings.terms, settings.center_order, settings.image_blocks);
  if (!basis.matches(t)) throw StaleEigenpair("basis does not match the triangle");

  const Json& stored = field(j, "basis");
  const Json& blocks = field(stored, "blocks");
  const Json& images = field(stored, "images");
  const Json& centers = field(stored, "centers");
  if (!blocks.is_array() || blocks.size() != 3) throw FormatError("basis.blocks must hold three blocks");
  if (!images.is_array() || images.size() != basis.images.size())
    throw StaleEigenpair("stored image blocks do not match the triangle");
  if (!centers.is_array() || centers.size() != basis.centers.size())
    throw StaleEigenpair("stored center blocks do not match the triangle");
  for (std::size_t i = 0; i < 3; ++i) check_block(blocks[i], basis.blocks[i], "vertex block");
  for (std::size_t i = 0; i < images.size(); ++i) check_block(images[i], basis.images[i], "image block");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const CenterBlock& c = basis.centers[i];
    if (number<int>(centers[i], "order") != c.order ||
        (point_from(field(centers[i], "center"), "center") - c.center).norm() > 1e-9 * t.diameter())
      throw StaleEigenpair("stored center block does not match the triangle");
  }

  const Json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array()) throw FormatError("'coeffs' must be an array");
  if (static_cast<int>(coeffs.size()) != basis.total_terms())
    throw StaleEigenpair("coefficient count " + std::to_string(coeffs.size()) + " does not match basis size " +
                         std::to_string(basis.total_terms()));
  Eigen::VectorXd c(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!coeffs[i].is_number()) throw FormatError("'coeffs' must hold numbers");
    c[static_cast<Eigen::Index>(i)] = coeffs[i].get<double>();
  }
  const double mu = number<double>(j, "mu");
  if (!(mu > 0)) throw FormatError("'mu' must be positive");
  const double scale = number<double>(j, "scale");
  if (!(scale > 0)) throw FormatError("'scale' must be positive");

  return Eigenpair{t,
                   mu,
                   c,
                   basis,
                   number<double>(j, "sigma"),
                   number<double>(j, "sigma2"),
                   number<double>(j, "sigma_gap"),
                   number<bool>(j, "multiplicity_flag"),
                   number<std::uint64_t>(j, "seed"),
                   scale,
                   number<double>(j, "fem_estimate"),
                   settings};
}

Json certificate_to_json(const Certificate& c) {
  return {{"normal_residual", c.normal_residual},
          {"helmholtz_residual", c.helmholtz_residual},
          {"certified", c.certified}};
}

Json report_to_json(const CriticalPointReport& r) {
  Json j = {{"location", point_json(r.location)},
            {"locus", to_string(r.locus)},
            {"edge", r.edge},
            {"arc_length", r.arc_length},
            {"grad_residual", r.grad_residual},
            {"hessian", Json::array({Json::array({r.hessian(0, 0), r.hessian(0, 1)}),
                                     Json::array({r.hessian(1, 0), r.hessian(1, 1)})})},
            {"hessian_available", r.hessian_available},
            {"det_hessian", r.det_hessian},
            {"mixed_residual", r.mixed_residual},
            {"u", r.u},
            {"morse", to_string(r.morse)},
            {"newton_converged", r.newton_converged}};
  if (r.near_vertex) {
    j["near_vertex"] = r.vertex;
    j["vertex_distance"] = r.vertex_distance;
  }
  return j;
}

Json verdict_to_json(const HotSpotsVerdict& v) {
  Json reports = Json::array();
  for (const auto& r : v.reports) reports.push_back(report_to_json(r));
  Json coeffs = Json::array();
  for (const auto& c : v.coefficients) {
    Json cj = {{"c0", c.c0}, {"radius", c.radius}, {"two_radius_gap", c.two_radius_gap},
               {"magnitude", c.magnitude}};
    cj["c1"] = c.c1 ? Json(*c.c1) : Json(nullptr);
    coeffs.push_back(cj);
  }
  const ExtremumReport& e = v.extrema;
  return {{"classification", to_string(v.classification)},
          {"crit_count", v.crit_count},
          {"reports", reports},
          {"extremum_at_vertices", v.extremum_at_vertices},
          {"extrema",
           {{"argmax", point_json(e.argmax)},
            {"argmin", point_json(e.argmin)},
            {"max", e.max},
            {"min", e.min},
            {"max_vertex", e.max_vertex},
            {"min_vertex", e.min_vertex},
            {"max_excess", e.max_excess},
            {"min_excess", e.min_excess}}},
          {"nodal_arc_ok", v.nodal_arc_ok},
          {"nodal_arc",
           {{"arc_count", v.nodal.arc_count},
            {"boundary_zeros", v.nodal.boundary_zeros},
            {"stalled", v.nodal.stalled},
            {"points", v.nodal.points.size()},
            {"start", point_json(v.nodal.start.point)},
            {"end", point_json(v.nodal.end.point)},
            {"max_abs_u", v.nodal.max_abs_u}}},
          {"coeff_ok", v.coeff_ok},
          {"two_radius_ok", v.two_radius_ok},
          {"coefficients", coeffs},
          {"strict_extrema", Json::array({v.strict_extrema[0], v.strict_extrema[1], v.strict_extrema[2]})},
          {"vertex_zero_count", v.vertex_zero_count},
          {"margins", v.margins}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

namespace {

std::string optional_real(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records,
                     const std::string& header) {
  out << "# " << header << "\n";
  out << "beta1,beta2,mu2,u_v1,u_v2,u_v3,c1_v1,c1_v2,c1_v3,verdict,crit_x,crit_y,sigma,flags\n";
  for (const auto& r : records) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out << format_real(r.beta1) << ',' << format_real(r.beta2) << ',' << format_real(r.mu2) << ','
        << format_real(r.u_vertex[0]) << ',' << format_real(r.u_vertex[1]) << ','
        << format_real(r.u_vertex[2]) << ',' << optional_real(r.c1[0]) << ','
        << optional_real(r.c1[1]) << ',' << optional_real(r.c1[2]) << ',' << to_string(r.verdict)
        << ',' << (r.crit ? format_real(r.crit->x()) : "") << ','
        << (r.crit ? format_real(r.crit->y()) : "") << ',' << format_real(r.sigma) << ','
        << csv_field(flags) << '\n';
  }
}

void write_path_csv(std::ostream& out, const std::vector<PathRecord>& path,
                    const std::string& header) {
  out << "# " << header << "\n";
  out << "t,x3,y3,mu,sigma,alignment,aligned,verdict,crit_count,crit_x,crit_y,min_vertex_u,"
         "min_vertex,c1_obtuse\n";
  for (const auto& r : path) {
    const Point& v3 = r.eigenpair.triangle.vertex(2);
    out << format_real(r.t) << ',' << format_real(v3.x()) << ',' << format_real(v3.y()) << ','
        << format_real(r.eigenpair.mu) << ',' << format_real(r.eigenpair.sigma) << ','
        << format_real(r.alignment) << ',' << (r.aligned ? 1 : 0) << ',' << to_string(r.verdict)
        << ',' << r.crit_count << ',' << (r.crit ? format_real(r.crit->x()) : "") << ','
        << (r.crit ? format_real(r.crit->y()) : "") << ',' << format_real(r.min_vertex_u) << ','
        << r.min_vertex + 1 << ',' << optional_real(r.c1_obtuse) << '\n';
  }
}

void write_nodal_csv(std::ostream& out, const NodalArc& arc, const std::string& header) {
  out << "# " << header << "\n";
  out << "x,y\n";
  for (const auto& p : arc.points) out << format_real(p.x()) << ',' << format_real(p.y()) << '\n';
}

void write_critical_csv(std::ostream& out, const std::vector<CriticalPointReport>& reports,
                        const std::string& header) {
  out << "# " << header << "\n";
  out << "x,y,locus,edge,arc_length,grad_residual,det_hessian,morse,u\n";
  for (const auto& r : reports)
    out << format_real(r.location.x()) << ',' << format_real(r.location.y()) << ','
        << to_string(r.locus) << ',' << r.edge << ',' << format_real(r.arc_length) << ','
        << format_real(r.grad_residual) << ',' << format_real(r.det_hessian) << ','
        << to_string(r.morse) << ',' << format_real(r.u) << '\n';
}

}  // namespace hotspots
