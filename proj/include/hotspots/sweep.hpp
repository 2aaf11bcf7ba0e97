#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hotspots/analysis.hpp"
#include "hotspots/eigensolver.hpp"
#include "hotspots/geometry.hpp"

namespace hotspots {

struct SweepSettings {
  int resolution = 24;
  double margin = 0.05;            // radians kept clear of the simplex boundary
  int workers = 0;                 // 0 = hardware concurrency
  double near_equilateral = 0.03;  // all angles within this of pi/3 -> AMBIGUOUS a priori
  /// When non-empty, classify these (beta1, beta2) nodes instead of the grid.
  std::vector<std::pair<double, double>> nodes;
  SolverSettings solver;
  AnalysisSettings analysis;
};

/// One triangle solved and analysed.
struct SweepRecord {
  double beta1 = 0, beta2 = 0;
  double mu2 = 0;
  std::array<double, 3> u_vertex{};  // u(v) / scale
  std::array<std::optional<double>, 3> c1{};
  Classification verdict = Classification::ambiguous;
  std::optional<Point> crit;
  double sigma = 0;
  double normal_residual = 0;
  double helmholtz_residual = 0;
  std::vector<std::string> flags;
};

/// Nodes beta_i = margin + i h, h = (pi - 3 margin) / n, with i, j >= 1 and
/// i + j <= n - 1, sorted by (beta1, beta2).
std::vector<std::pair<double, double>> sweep_nodes(int resolution, double margin);

/// Solves, certifies and classifies one triangle. Failures become AMBIGUOUS
/// records with the reason in flags; nothing is thrown.
SweepRecord classify_triangle(const LabeledTriangle& t, double beta1, double beta2,
                              const SweepSettings& settings);

std::vector<SweepRecord> moduli_sweep(const SweepSettings& settings);

struct PathRecord {
  PathRecord(double t_, Eigenpair ep) : t(t_), eigenpair(std::move(ep)) {}

  double t = 0;
  Eigenpair eigenpair;
  double alignment = 1;  // normalized inner product with the previous record
  bool aligned = true;   // alignment magnitude >= 0.5
  Classification verdict = Classification::ambiguous;
  int crit_count = 0;
  std::optional<Point> crit;
  double min_vertex_u = 0;  // min_v |u(v)| / scale
  int min_vertex = 0;
  std::optional<double> c1_obtuse;
};

struct ContinuationSettings {
  int steps = 100;
  double window = 0.1;        // warm-start scan window, relative to the previous mu
  double min_alignment = 0.5;
  SolverSettings solver;
  AnalysisSettings analysis;
};

/// Solves along straight_line_path(T0, k / m), warm-starting each scan from the
/// previous mu and aligning signs over 100 fixed barycentric reference points.
std::vector<PathRecord> continuation(const LabeledTriangle& t0, const ContinuationSettings& s);
/// Same, starting from a given eigenpair of T0 (its sign is kept).
std::vector<PathRecord> continuation(const Eigenpair& start, const ContinuationSettings& s);

/// Fixed reference points in barycentric coordinates.
std::vector<Eigen::Vector3d> reference_barycentric(int count);

struct TrajectoryReport {
  std::vector<std::pair<double, Point>> points;  // (t, p) while the critical point exists
  bool continuous = true;
  bool ambiguous_link = false;
  double max_displacement = 0;  // per step, relative to the diameter
  std::optional<double> last_t;
  double last_vertex_distance = 0;  // relative to the diameter
  int last_vertex = -1;
  double last_vertex_u = 0;         // |u(v)| / scale at that vertex
  double last_min_vertex_u = 0;     // min_v |u(v)| / scale at the last CRIT sample
  bool disappears = false;          // present at some t and absent at the end
};

/// Links critical points of consecutive records by nearest neighbour within
/// 10 * step * diameter.
TrajectoryReport crit_trajectory(const std::vector<PathRecord>& path);

struct IsoscelesSample {
  double apex = 0;
  Classification verdict = Classification::ambiguous;
  double u_apex = 0;  // u(apex) / scale
  std::optional<Point> crit;
  double base_midpoint_distance = 0;  // crit to base midpoint, relative to the diameter
};

struct IsoscelesScan {
  std::vector<IsoscelesSample> samples;  // by apex angle
  std::optional<double> threshold;
  bool monotone = true;
};

/// Isosceles triangle with apex angle beta at v3.
LabeledTriangle isosceles(double apex);
IsoscelesSample isosceles_sample(double apex, const SweepSettings& settings);
/// Grid of steps + 1 apex angles, then bisection of the last CRIT / first
/// NOCRIT pair down to width 1e-3.
IsoscelesScan isosceles_scan(double lo, double hi, int steps, const SweepSettings& settings);

}  // namespace hotspots
