#include "hotspots/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hotspots {

namespace {

double twice_signed_area(const Point& a, const Point& b, const Point& c) {
  return cross(b - a, c - a);
}

std::string describe(const Point& p) {
  return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")";
}

}  // namespace

LabeledTriangle::LabeledTriangle(const Point& v1, const Point& v2, const Point& v3)
    : v_{v1, v2, v3} {
  for (const auto& v : v_) {
    if (!std::isfinite(v.x()) || !std::isfinite(v.y()))
      throw GeometryError("triangle vertex is not finite");
  }
  const double a2 = twice_signed_area(v1, v2, v3);
  const double d = diameter();
  if (!(std::abs(a2) > 1e-12 * d * d))
    throw GeometryError("degenerate triangle " + describe(v1) + " " + describe(v2) + " " +
                        describe(v3));
  orientation_ = a2 > 0 ? 1 : -1;
}

LabeledTriangle LabeledTriangle::right_isosceles() {
  return {Point(0, 0), Point(1, 0), Point(0, 1)};
}

double LabeledTriangle::area() const {
  return 0.5 * std::abs(twice_signed_area(v_[0], v_[1], v_[2]));
}

double LabeledTriangle::diameter() const {
  return std::max({(v_[0] - v_[1]).norm(), (v_[1] - v_[2]).norm(), (v_[2] - v_[0]).norm()});
}

double LabeledTriangle::edge_length(int e) const {
  return (vertex((e + 1) % 3) - vertex(e)).norm();
}

Point LabeledTriangle::centroid() const { return (v_[0] + v_[1] + v_[2]) / 3.0; }

Eigen::Vector3d LabeledTriangle::barycentric(const Point& p) const {
  const double a2 = twice_signed_area(v_[0], v_[1], v_[2]);
  const double l1 = twice_signed_area(p, v_[1], v_[2]) / a2;
  const double l2 = twice_signed_area(v_[0], p, v_[2]) / a2;
  return {l1, l2, 1.0 - l1 - l2};
}

Point LabeledTriangle::from_barycentric(double l1, double l2, double l3) const {
  return l1 * v_[0] + l2 * v_[1] + l3 * v_[2];
}

double LabeledTriangle::boundary_distance(const Point& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 3; ++e) {
    const Point& a = vertex(e);
    const Point& b = vertex((e + 1) % 3);
    // Interior lies to the left of a->b for counterclockwise labeling.
    const double s = orientation_ * cross(b - a, p - a) / (b - a).norm();
    d = std::min(d, s);
  }
  return d;
}

bool LabeledTriangle::contains(const Point& p, double tol) const {
  return boundary_distance(p) >= -tol;
}

LabeledTriangle LabeledTriangle::scaled(double s) const {
  return {s * v_[0], s * v_[1], s * v_[2]};
}

LabeledTriangle LabeledTriangle::moved(double angle, const Vec2& shift) const {
  Eigen::Matrix2d rot;
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return {rot * v_[0] + shift, rot * v_[1] + shift, rot * v_[2] + shift};
}

Angles angles(const LabeledTriangle& t) {
  Angles out{};
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = t.vertex((i + 1) % 3) - t.vertex(i);
    const Vec2 b = t.vertex((i + 2) % 3) - t.vertex(i);
    out[static_cast<std::size_t>(i)] = std::atan2(std::abs(cross(a, b)), a.dot(b));
  }
  return out;
}

ShapeClass classify(const LabeledTriangle& t, double tol) {
  const Angles b = angles(t);
  ShapeClass c;
  const auto it = std::max_element(b.begin(), b.end());
  const double half_pi = std::numbers::pi / 2;
  if (std::abs(*it - half_pi) <= tol) {
    c.kind = ShapeKind::right;
  } else if (*it > half_pi) {
    c.kind = ShapeKind::obtuse;
    c.obtuse_vertex = static_cast<int>(it - b.begin());
  }
  const bool e01 = std::abs(b[0] - b[1]) <= tol;
  const bool e12 = std::abs(b[1] - b[2]) <= tol;
  const bool e20 = std::abs(b[2] - b[0]) <= tol;
  c.is_isosceles = e01 || e12 || e20;
  c.is_equilateral = e01 && e12;
  return c;
}

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::acute: return "acute";
    case ShapeKind::right: return "right";
    case ShapeKind::obtuse: return "obtuse";
  }
  return "?";
}

LabeledTriangle straight_line_path(const LabeledTriangle& t0, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw GeometryError("path parameter outside [0, 1]: " + std::to_string(t));
  const LabeledTriangle target = LabeledTriangle::right_isosceles();
  std::array<Point, 3> v;
  for (int i = 0; i < 3; ++i)
    v[static_cast<std::size_t>(i)] = (1.0 - t) * t0.vertex(i) + t * target.vertex(i);
  try {
    return {v[0], v[1], v[2]};
  } catch (const GeometryError& e) {
    throw GeometryError("straight-line path degenerates at t = " + std::to_string(t) + ": " +
                        e.what());
  }
}

LabeledTriangle from_angles(double beta1, double beta2) {
  if (!(beta1 > 0 && beta2 > 0 && beta1 + beta2 < std::numbers::pi))
    throw GeometryError("angle pair outside the simplex: (" + std::to_string(beta1) + ", " +
                        std::to_string(beta2) + ")");
  // Law of sines with |v1 v2| = 1.
  const double side13 = std::sin(beta2) / std::sin(beta1 + beta2);
  return {Point(0, 0), Point(1, 0), Point(side13 * std::cos(beta1), side13 * std::sin(beta1))};
}

EdgeFrame edge_frame(const LabeledTriangle& t, int e) {
  if (e < 0 || e > 2) throw GeometryError("edge index must be 0, 1 or 2");
  EdgeFrame f;
  f.edge = e;
  f.start = t.vertex(e);
  f.end = t.vertex((e + 1) % 3);
  f.length = (f.end - f.start).norm();
  f.direction = (f.end - f.start) / f.length;
  f.tangent = t.orientation() * f.direction;
  f.normal = Vec2(f.tangent.y(), -f.tangent.x());
  return f;
}

}  // namespace hotspots
