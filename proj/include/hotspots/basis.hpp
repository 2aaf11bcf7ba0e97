#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "hotspots/geometry.hpp"

namespace hotspots {

/// Fourier-Bessel block anchored at one vertex.
///
/// Term n of the block is
///   phi_n(r, theta) = (r / R)^(n nu) * h_(n nu)(k r) * cos(n nu theta)
/// with nu = pi / beta, R = ref_radius and h the reduced Bessel function, so
///   phi_n = J_(n nu)(k r) cos(n nu theta) / L_n,  L_n = (k R / 2)^(n nu) / Gamma(n nu + 1).
/// theta is measured from the edge towards the next labeled vertex, turning
/// into the triangle: counterclockwise when orientation = +1, clockwise when -1.
struct VertexBlock {
  int vertex = 0;
  double nu = 0;
  double beta = 0;
  int terms = 0;
  int orientation = 1;
  Point origin;
  Vec2 axis;  // unit vector along the edge towards the next labeled vertex
  double ref_radius = 1;
  /// Set on image blocks: the expansion is evaluated at the reflection of p
  /// across the line through `mirror_point` with unit normal `mirror_normal`.
  bool mirrored = false;
  Point mirror_point = Point::Zero();
  Vec2 mirror_normal = Vec2::Zero();

  double order(int n) const { return n * nu; }
  /// Local (x, y) with theta = atan2(y, x) in [0, beta] inside the triangle.
  Vec2 to_local(const Point& p) const;
  /// Local-to-global rotation; columns are the local axes.
  Eigen::Matrix2d frame() const;
  Point reflect(const Point& p) const;
};

/// Smooth Fourier-Bessel block about an interior point: terms
/// h_0(k r), then (r / R)^m h_m(k r) cos(m theta) and (r / R)^m h_m(k r) sin(m theta)
/// for m = 1..order, in that interleaved order.
struct CenterBlock {
  Point center = Point::Zero();
  int order = 0;
  double ref_radius = 1;

  int terms() const { return order > 0 ? 2 * order + 1 : 0; }
};

struct BasisSpec {
  std::array<VertexBlock, 3> blocks;
  std::vector<VertexBlock> images;
  std::vector<CenterBlock> centers;

  int total_terms() const;
  /// Column offsets in the coefficient vector. Order: vertex blocks, image
  /// blocks, center blocks.
  int offset(int block) const;
  int image_offset(int image) const;
  int center_offset(int center) const;

  /// `terms` is the mean count per vertex block. Each block gets a share
  /// proportional to its angle, capped at the Bessel envelope (order 200) and
  /// never below 4. With center_order > 0, smooth blocks sit at mid-width
  /// along the longest edge, more of them the more elongated the triangle.
  /// With `images`, a vertex close to its opposite edge also gets a copy of
  /// its block reflected across that edge.
  static BasisSpec for_triangle(const LabeledTriangle& t, int terms, int center_order = 0,
                                bool images = false);

  /// True when the stored vertices, angles and frames match t.
  bool matches(const LabeledTriangle& t, double tol = 1e-9) const;
};

inline constexpr int kMinBlockTerms = 4;
inline constexpr double kMaxBlockOrder = 200.0;
inline constexpr double kCenterSpacing = 24.0;  // inradii of longest edge per center
inline constexpr int kMaxCenters = 8;
inline constexpr double kImageHeightRatio = 0.25;  // altitude / opposite edge below which images are added

/// Value and derivatives of one basis term in global coordinates.
struct TermSample {
  double value = 0;
  Vec2 grad = Vec2::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
};

enum class TermDerivatives { value, gradient, hessian };

/// Evaluates every term of block at p; out must hold block.terms entries.
/// Hessian entries are unbounded at the block's own vertex when 1 < nu < 2.
void evaluate_block(const VertexBlock& block, double k, const Point& p, TermDerivatives level,
                    TermSample* out);
void evaluate_block(const CenterBlock& block, double k, const Point& p, TermDerivatives level,
                    TermSample* out);

/// Every term of the basis at p, in coefficient order.
void evaluate_basis(const BasisSpec& basis, double k, const Point& p, TermDerivatives level,
                    std::vector<TermSample>& out);

}  // namespace hotspots
