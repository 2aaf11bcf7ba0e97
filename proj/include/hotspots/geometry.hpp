#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hotspots {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;

/// Thrown when three vertices do not span a triangle, or when an angle pair
/// lies outside the open moduli simplex.
class GeometryError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Interior angles at v1, v2, v3 (radians).
using Angles = std::array<double, 3>;

/// Three labeled planar vertices. Vertex and edge indices are zero based:
/// edge e joins vertex e to vertex (e + 1) % 3.
class LabeledTriangle {
public:
  LabeledTriangle(const Point& v1, const Point& v2, const Point& v3);

  /// The reference right isosceles triangle (0, 1, i).
  static LabeledTriangle right_isosceles();

  const Point& vertex(int i) const { return v_[static_cast<std::size_t>(i)]; }
  const std::array<Point, 3>& vertices() const { return v_; }

  /// +1 for counterclockwise labeling, -1 otherwise.
  int orientation() const { return orientation_; }
  double area() const;
  double diameter() const;
  double edge_length(int e) const;
  Point centroid() const;

  /// Barycentric coordinates of p (weights of v1, v2, v3).
  Eigen::Vector3d barycentric(const Point& p) const;
  Point from_barycentric(double l1, double l2, double l3) const;

  /// True when p lies inside the closed triangle up to tol (absolute length).
  bool contains(const Point& p, double tol = 0.0) const;
  /// Signed distance to the boundary; positive inside.
  double boundary_distance(const Point& p) const;

  LabeledTriangle scaled(double s) const;
  /// Rotation by angle about the origin followed by translation.
  LabeledTriangle moved(double angle, const Vec2& shift) const;

private:
  std::array<Point, 3> v_;
  int orientation_ = 1;
};

Angles angles(const LabeledTriangle& t);

enum class ShapeKind { acute, right, obtuse };

struct ShapeClass {
  ShapeKind kind = ShapeKind::acute;
  bool is_isosceles = false;
  bool is_equilateral = false;
  std::optional<int> obtuse_vertex;
};

inline constexpr double kRightAngleTol = 1e-10;

ShapeClass classify(const LabeledTriangle& t, double tol = kRightAngleTol);
const char* to_string(ShapeKind kind);

/// (1 - t) * T0 + t * (0, 1, i), vertex by vertex.
LabeledTriangle straight_line_path(const LabeledTriangle& t0, double t);

/// Normalized placement v1 = 0, v2 = 1, v3 in the upper half-plane with
/// angles beta1 at v1 and beta2 at v2.
LabeledTriangle from_angles(double beta1, double beta2);

struct EdgeFrame {
  int edge = 0;
  Vec2 tangent;       // rotating by +pi/2 points into the triangle
  Vec2 normal;        // outward unit normal
  Point start;        // vertex(edge)
  Point end;          // vertex(edge + 1)
  double length = 0;  // arc-length parameter runs over [0, length] from start
  Vec2 direction;     // unit vector from start to end

  Point at(double s) const { return start + s * direction; }
};

EdgeFrame edge_frame(const LabeledTriangle& t, int e);

/// Cross product z-component.
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace hotspots
