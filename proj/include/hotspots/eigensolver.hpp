#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hotspots/basis.hpp"
#include "hotspots/geometry.hpp"

namespace hotspots {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when the stacked basis matrix has numerically collapsed.
class RankCollapse : public SolverError {
public:
  RankCollapse(const std::string& what, double condition)
      : SolverError(what), condition_(condition) {}
  double condition() const { return condition_; }

private:
  double condition_;
};

struct ScanSample {
  double mu = 0;
  double sigma = 0;
};

/// No sigma dip below tolerance inside the scan window.
class NoDipFound : public SolverError {
public:
  NoDipFound(const std::string& what, std::vector<ScanSample> trace)
      : SolverError(what), trace_(std::move(trace)) {}
  const std::vector<ScanSample>& trace() const { return trace_; }

private:
  std::vector<ScanSample> trace_;
};

struct SolverSettings {
  int terms = 12;                  // mean per vertex block
  int center_order = 6;            // smooth interior blocks, 2 * order + 1 terms each
  bool image_blocks = true;        // reflected copies of vertices close to their opposite edge
  double boundary_factor = 3.0;    // points per edge = factor * max(terms, total / 3)
  double interior_factor = 3.0;    // interior points = factor * total terms
  double exclusion_radius = 1e-3;  // relative to the diameter
  double sigma_tol = 1e-5;
  double residual_tol = 1e-4;      // certificate gate on diam * max|du/dn| / max|u|
  int fem_refinement = 32;
  double scan_lo = 0.6;            // scan window relative to the FEM estimate
  double scan_hi = 1.4;
  double scan_resolution = 200.0;  // scan step = estimate / resolution
  double refine_width = 1e-10;     // relative width of the golden-section bracket
  double rank_tol = 1e-14;         // truncation of the stacked basis SVD
  std::uint64_t seed = 20130101;
};

struct BoundaryNode {
  Point point;
  Vec2 normal;  // outward
  int edge = 0;
};

struct Discretization {
  std::vector<BoundaryNode> boundary;
  std::vector<Point> interior;
  double exclusion_radius = 0;  // absolute
  std::uint64_t seed = 0;

  /// Chebyshev-clustered collocation on each edge, points closer than the
  /// exclusion radius to a vertex dropped, plus a seeded low-discrepancy
  /// interior sample.
  static Discretization build(const LabeledTriangle& t, const BasisSpec& basis,
                              const SolverSettings& settings);
};

/// Low-discrepancy points in the triangle (R2 sequence with a seeded shift).
std::vector<Point> interior_sample(const LabeledTriangle& t, int count, std::uint64_t seed);

struct MpsSystem {
  Eigen::MatrixXd boundary;  // diam * outward normal derivative, unit-norm columns
  Eigen::MatrixXd interior;  // basis values, same column scaling
  Eigen::VectorXd column_norms;
};

MpsSystem assemble(const LabeledTriangle& t, double mu, const BasisSpec& basis,
                   const Discretization& disc);

struct SigmaResult {
  double sigma = 0;
  double sigma2 = 0;
  double sigma_gap = 0;
  Eigen::VectorXd coeffs;  // unit norm, in unscaled basis units
  int rank = 0;
  double condition = 0;
};

/// Smallest generalized singular value of the pencil (boundary, stacked).
SigmaResult sigma_min(const LabeledTriangle& t, double mu, const BasisSpec& basis,
                      const Discretization& disc, const SolverSettings& settings);

struct FemResult {
  double mu = 0;
  int iterations = 0;
  int nodes = 0;
};

/// Smallest nonzero eigenvalue of the P1 Neumann pencil on the n^2-cell
/// similar subdivision of t.
FemResult fem_eigenvalue(const LabeledTriangle& t, int refinement);
inline double fem_bracket(const LabeledTriangle& t, int refinement) {
  return fem_eigenvalue(t, refinement).mu;
}

struct Eigenpair {
  LabeledTriangle triangle;
  double mu = 0;
  Eigen::VectorXd coeffs;
  BasisSpec basis;
  double sigma = 0;
  double sigma2 = 0;
  double sigma_gap = 0;
  bool multiplicity_flag = false;
  std::uint64_t seed = 0;
  double scale = 1;          // max |u| over vertices and the interior sample
  double fem_estimate = 0;   // 0 when the scan window was supplied
  SolverSettings settings;

  double wavenumber() const;
  /// Raw Bessel coefficient c_n of block b (coefficient of J_(n nu)(k r) cos(n nu theta)).
  double bessel_coefficient(int block, int n) const;
  /// Flips the sign of the eigenfunction.
  void negate() { coeffs = -coeffs; }
};

struct MuWindow {
  double lo = 0;
  double hi = 0;
};

/// Computes mu_2 and its eigenfunction. Without a window the scan covers
/// [scan_lo, scan_hi] times the FEM estimate.
Eigenpair find_mu2(const LabeledTriangle& t, const SolverSettings& settings = {},
                   std::optional<MuWindow> window = std::nullopt);

/// sigma sampled on a uniform grid over [lo, hi].
std::vector<ScanSample> sigma_scan(const LabeledTriangle& t, const SolverSettings& settings,
                                   double lo, double hi, int samples);

struct Certificate {
  double normal_residual = 0;     // diam * max|du/dn| on the boundary / max|u| inside
  double helmholtz_residual = 0;  // max |lap u + mu u| / (mu * scale)
  bool certified = false;
};

Certificate residual_certificate(const Eigenpair& ep, int samples_per_edge = 400);

}  // namespace hotspots
