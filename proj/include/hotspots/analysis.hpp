#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hotspots/field.hpp"
#include "hotspots/geometry.hpp"

namespace hotspots {

/// Thresholds shared by the detectors and the verdict. Lengths are relative to
/// the diameter, values relative to the field scale.
struct AnalysisSettings {
  double vertex_exclusion = 1e-3;  // delta_v
  int edge_samples = 400;
  int seed_grid = 30;
  double grad_tol = 1e-7;          // |grad u| * diam / scale at a reported point
  double degeneracy = 1e-4;        // min |lambda| against max(|lambda|, mu |u|)
  double mixed_tol = 1e-6;         // |u_tn| / (mu * scale) at an edge point
  double vertex_gap = 1e-3;        // vertex_zero <= |u(v)| / scale < vertex_gap is ambiguous
  double coeff_floor = 1e-5;
  double vertex_zero = 1e-5;
  double extremum_tol = 1e-8;
  int extremum_grid = 200;
  int extremum_boundary = 600;
  int nodal_samples = 800;
  double nodal_zero = 1e-6;        // |u(v)| / scale counted as a vertex zero
  double nodal_step = 1e-2;
  double nodal_min_step = 1e-6;
  double ring_radius = 1e-2;
  int ring_samples = 64;
  double probe_radius = 0.05;      // times the shortest adjacent edge
  int quadrature_nodes = 64;
  double vertex_model_floor = 1e-150;  // smallest radius / diam searched by the vertex expansion
  int vertex_model_grid = 600;
};

/// The field under analysis with the data the thresholds need.
struct FieldView {
  FieldView(const ScalarField& f, const LabeledTriangle& t, double mu_, double scale_,
            bool multiplicity = false)
      : field(&f), triangle(t), mu(mu_), scale(scale_), multiplicity_flag(multiplicity) {}
  static FieldView of(const EigenField& f);

  const ScalarField* field;
  LabeledTriangle triangle;
  double mu;
  double scale;
  bool multiplicity_flag;

  double diameter() const { return triangle.diameter(); }
};

enum class Locus { interior, edge };
/// Morse index = number of negative Hessian eigenvalues (0 = minimum, 2 = maximum).
enum class Morse { index0, index1, index2, degenerate, unavailable };
const char* to_string(Morse m);
const char* to_string(Locus l);

struct CriticalPointReport {
  Point location = Point::Zero();
  Locus locus = Locus::interior;
  int edge = -1;            // edge index when locus = edge
  double arc_length = 0;    // from the edge start
  double grad_residual = 0; // |grad u| * diam / scale
  /// Edge frame (tangent, inward normal) on edges, global frame inside.
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  bool hessian_available = true;
  double det_hessian = 0;
  double mixed_residual = 0; // |u_tn| / (mu * scale), edges only
  double u = 0;
  Morse morse = Morse::unavailable;
  bool newton_converged = true;
  /// Inside the vertex exclusion disk, located from the vertex expansion.
  bool near_vertex = false;
  int vertex = -1;
  double vertex_distance = 0;  // absolute; the location may round onto the vertex
};

Morse classify_hessian(const Eigen::Matrix2d& hessian, double mu_u, double degeneracy = 1e-4);
void classify_critical_point(CriticalPointReport& report, double mu, double degeneracy = 1e-4);

std::vector<CriticalPointReport> boundary_critical_points(const FieldView& view,
                                                          const AnalysisSettings& s = {});
std::vector<CriticalPointReport> interior_critical_points(const FieldView& view,
                                                          const AnalysisSettings& s = {});

/// Edge critical points closer than vertex_exclusion * diam to a vertex. The
/// tangential derivative there is taken from the two-term vertex expansion
/// c0 J_0(k r) + c1 J_nu(k r) cos(nu theta), whose root is bracketed on a
/// logarithmic grid down to vertex_model_floor * diam. Vertices with
/// |u(v)| < vertex_zero * scale are skipped.
std::vector<CriticalPointReport> vertex_critical_points(const FieldView& view,
                                                        const AnalysisSettings& s = {});

class CoefficientError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// c_n at a vertex from the orthogonality of cos(n nu theta) on the sector:
/// c_n J_(n nu)(k r) = (2 - delta_n0) / beta * int_0^beta u(r, theta) cos(n nu theta) dtheta.
struct VertexCoefficients {
  int vertex = 0;
  std::vector<double> c;  // c[0..n_max]
  double c0_direct = 0;   // u(v)
  bool c0_consistent = true;
  double radius = 0;
  int nodes = 0;
};

/// r_probe is absolute. Throws CoefficientError when r_probe is outside
/// [1e-3, 0.2] x shortest adjacent edge, when the arc leaves the triangle, or
/// when J_(n nu)(k r) <= 1e-12 for a requested n.
VertexCoefficients bessel_coefficients(const FieldView& view, int vertex, int n_max,
                                       double r_probe, int nodes = 64);

struct NodalEnd {
  int vertex = -1;  // >= 0 when the arc ends at a vertex
  int edge = -1;
  double arc_length = 0;
  Point point = Point::Zero();
};

struct NodalArc {
  std::vector<Point> points;
  NodalEnd start, end;
  int arc_count = 0;
  int boundary_zeros = 0;
  bool stalled = false;
  double max_abs_u = 0;  // over the polyline, relative to scale
  double max_step = 0;   // largest spacing between consecutive points, relative to diam
};

NodalArc nodal_arc(const FieldView& view, const AnalysisSettings& s = {});

struct ExtremumReport {
  Point argmax = Point::Zero(), argmin = Point::Zero();
  double max = 0, min = 0;
  int max_vertex = 0, min_vertex = 0;  // best vertices
  bool max_at_vertex = false, min_at_vertex = false;
  double max_excess = 0, min_excess = 0;  // best non-vertex sample beyond the best vertex, / scale
};

ExtremumReport extremum_locus(const FieldView& view, const AnalysisSettings& s = {});

/// Vertices that are strict local extrema over a ring of radius
/// ring_radius * diam inside their sector.
std::array<bool, 3> strict_vertex_extrema(const FieldView& view, const AnalysisSettings& s = {});

enum class Classification { crit, nocrit, ambiguous };
const char* to_string(Classification c);

struct VertexCoefficientSummary {
  double c0 = 0;
  std::optional<double> c1;  // unavailable when the Bessel factor is too small
  double radius = 0;
  double two_radius_gap = 0;  // relative disagreement on max(|c0|, |c1|)
  double magnitude = 0;       // max(|c0|, |c1|), the smaller of the two radii's values
};

struct HotSpotsVerdict {
  int crit_count = 0;
  std::vector<CriticalPointReport> reports;
  ExtremumReport extrema;
  NodalArc nodal;
  std::array<VertexCoefficientSummary, 3> coefficients;
  std::array<bool, 3> strict_extrema{};
  bool extremum_at_vertices = false;
  bool nodal_arc_ok = false;
  bool coeff_ok = false;
  bool two_radius_ok = false;  // reported; the floor test already uses both radii
  int vertex_zero_count = 0;
  Classification classification = Classification::ambiguous;
  std::vector<std::string> margins;  // violated margins, empty unless ambiguous
};

HotSpotsVerdict hot_spots_verdict(const FieldView& view, const AnalysisSettings& s = {});

}  // namespace hotspots
