#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hotspots/geometry.hpp"

using namespace hotspots;
constexpr double pi = std::numbers::pi;

TEST_CASE("from_angles reproduces the requested angles") {
  for (auto [b1, b2] : {std::pair{0.4, 0.7}, {1.2, 1.1}, {2.5, 0.3}, {pi / 2, pi / 4}}) {
    const Angles a = angles(from_angles(b1, b2));
    CHECK(a[0] == doctest::Approx(b1).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(b2).epsilon(1e-12));
    CHECK(a[2] == doctest::Approx(pi - b1 - b2).epsilon(1e-12));
  }
}

TEST_CASE("angle pairs outside the simplex are rejected") {
  CHECK_THROWS_AS(from_angles(2.0, 2.0), GeometryError);
  CHECK_THROWS_AS(from_angles(-0.1, 1.0), GeometryError);
  CHECK_THROWS_AS(from_angles(0.0, 1.0), GeometryError);
}

TEST_CASE("degenerate triangles are rejected") {
  CHECK_THROWS_AS(LabeledTriangle(Point(0, 0), Point(1, 0), Point(2, 0)), GeometryError);
  CHECK_THROWS_AS(LabeledTriangle(Point(0, 0), Point(0, 0), Point(0, 1)), GeometryError);
}

TEST_CASE("right isosceles reference triangle") {
  const auto t = LabeledTriangle::right_isosceles();
  CHECK(t.area() == doctest::Approx(0.5));
  CHECK(t.diameter() == doctest::Approx(std::sqrt(2.0)));
  const ShapeClass c = classify(t);
  CHECK(c.kind == ShapeKind::right);
  CHECK(c.is_isosceles);
  CHECK_FALSE(c.is_equilateral);
  CHECK_FALSE(c.obtuse_vertex.has_value());
}

TEST_CASE("shape classification") {
  CHECK(classify(from_angles(pi / 3, pi / 3)).is_equilateral);
  CHECK(classify(from_angles(1.0, 1.2)).kind == ShapeKind::acute);
  const ShapeClass o = classify(from_angles(0.3, 2.2));
  CHECK(o.kind == ShapeKind::obtuse);
  REQUIRE(o.obtuse_vertex.has_value());
  CHECK(*o.obtuse_vertex == 1);
}

TEST_CASE("barycentric coordinates round trip") {
  const LabeledTriangle t(Point(0.3, -1.0), Point(2.0, 0.4), Point(-0.5, 1.7));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    if (a + b > 1) {
      a = 1 - a;
      b = 1 - b;
    }
    const Point p = t.from_barycentric(a, b, 1 - a - b);
    const Eigen::Vector3d l = t.barycentric(p);
    CHECK(l[0] == doctest::Approx(a).epsilon(1e-12));
    CHECK(l[1] == doctest::Approx(b).epsilon(1e-12));
    CHECK(l.sum() == doctest::Approx(1.0));
    CHECK(t.contains(p, 1e-12));
    CHECK(t.boundary_distance(p) >= -1e-12);
  }
  CHECK_FALSE(t.contains(Point(10, 10)));
}

TEST_CASE("rigid motions and scaling keep angles") {
  const auto t = from_angles(0.8, 1.3);
  const auto m = t.scaled(2.5).moved(0.7, Vec2(3, -4));
  const Angles a = angles(t), b = angles(m);
  for (int i = 0; i < 3; ++i) CHECK(a[static_cast<std::size_t>(i)] == doctest::Approx(b[static_cast<std::size_t>(i)]));
  CHECK(m.diameter() == doctest::Approx(2.5 * t.diameter()));
  CHECK(m.area() == doctest::Approx(6.25 * t.area()));
}

TEST_CASE("straight line path hits both ends") {
  const auto t0 = from_angles(0.9, 0.9);
  const auto a = straight_line_path(t0, 0.0), b = straight_line_path(t0, 1.0);
  const auto r = LabeledTriangle::right_isosceles();
  for (int i = 0; i < 3; ++i) {
    CHECK((a.vertex(i) - t0.vertex(i)).norm() < 1e-15);
    CHECK((b.vertex(i) - r.vertex(i)).norm() < 1e-15);
  }
  const auto mid = straight_line_path(t0, 0.5);
  CHECK((mid.vertex(1) - 0.5 * (t0.vertex(1) + r.vertex(1))).norm() < 1e-15);
  CHECK_THROWS_AS(straight_line_path(t0, 1.5), GeometryError);
}

TEST_CASE("edge normals point outward") {
  const auto t = from_angles(0.7, 1.4);
  for (int e = 0; e < 3; ++e) {
    const EdgeFrame f = edge_frame(t, e);
    CHECK((f.at(0) - t.vertex(e)).norm() < 1e-14);
    CHECK(t.contains(f.at(0.5 * f.length) - 1e-3 * f.normal));
    CHECK_FALSE(t.contains(f.at(0.5 * f.length) + 1e-3 * f.normal));
  }
}
