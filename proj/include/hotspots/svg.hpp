#pragma once

#include <string>
#include <vector>

#include "hotspots/analysis.hpp"
#include "hotspots/field.hpp"
#include "hotspots/sweep.hpp"

namespace hotspots {

struct Segment {
  Point a, b;
};

/// Marching squares over an nx-by-ny lattice of values; NaN marks cells to
/// skip. values(i, j) sits at (x0 + i dx, y0 + j dy).
std::vector<Segment> marching_squares(const Eigen::MatrixXd& values, double x0, double y0,
                                      double dx, double dy, double level);

struct ContourOptions {
  int grid = 160;
  int levels = 14;
  int width = 640;
};

/// Triangle outline, level lines of u, the nodal arc and critical points.
std::string contour_svg(const ScalarField& field, const LabeledTriangle& t, double scale,
                        const HotSpotsVerdict* verdict, const std::string& header,
                        const ContourOptions& options = {});

/// Sweep nodes as cells of the (beta1, beta2) simplex coloured by verdict,
/// with the right-angle and isosceles loci drawn for reference.
std::string moduli_svg(const std::vector<SweepRecord>& records, int resolution, double margin,
                       const std::string& header, int width = 640);

}  // namespace hotspots
