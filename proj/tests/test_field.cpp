#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hotspots/eigensolver.hpp"
#include "hotspots/field.hpp"

using namespace hotspots;
constexpr double pi = std::numbers::pi;

namespace {

const Eigenpair& right_pair() {
  static const Eigenpair ep = find_mu2(LabeledTriangle::right_isosceles());
  return ep;
}

const Eigenpair& generic_pair() {
  static const Eigenpair ep = find_mu2(from_angles(1.0, 1.2).moved(0.3, Vec2(0.5, -0.2)));
  return ep;
}

}  // namespace

TEST_CASE("right isosceles field is cos(pi x) - cos(pi y)") {
  const Eigenpair& ep = right_pair();
  const EigenField f(ep);
  const double s = f.value(Point(0, 1)) / 2;
  CHECK(s > 0);
  for (auto [x, y] : {std::pair{0.1, 0.2}, {0.5, 0.3}, {0.05, 0.9}, {0.7, 0.25}, {0.33, 0.33}}) {
    const FieldSample fs = eval(ep, Point(x, y));
    CHECK(std::abs(fs.u - s * (std::cos(pi * x) - std::cos(pi * y))) <= 1e-8 * s);
    CHECK(std::abs(fs.grad.x() + s * pi * std::sin(pi * x)) <= 1e-7 * s * pi);
    CHECK(std::abs(fs.grad.y() - s * pi * std::sin(pi * y)) <= 1e-7 * s * pi);
    CHECK(std::abs(fs.hessian(0, 0) + s * pi * pi * std::cos(pi * x)) <= 1e-6 * s * pi * pi);
    CHECK(std::abs(fs.hessian(0, 1)) <= 1e-6 * s * pi * pi);
  }
}

TEST_CASE("Helmholtz identity holds pointwise") {
  const Eigenpair& ep = generic_pair();
  const auto& t = ep.triangle;
  for (const Point& p : interior_sample(t, 40, 3)) {
    const FieldSample fs = eval(ep, p);
    CHECK(std::abs(fs.hessian.trace() + ep.mu * fs.u) <= 1e-6 * ep.mu * ep.scale);
  }
}

TEST_CASE("gradient matches central differences") {
  const Eigenpair& ep = generic_pair();
  const EigenField f(ep);
  const double h = 1e-6 * ep.triangle.diameter();
  const Point p = ep.triangle.from_barycentric(0.25, 0.4, 0.35);
  const Vec2 g = f.gradient(p);
  const Vec2 fd((f.value(p + Vec2(h, 0)) - f.value(p - Vec2(h, 0))) / (2 * h),
                (f.value(p + Vec2(0, h)) - f.value(p - Vec2(0, h))) / (2 * h));
  CHECK((g - fd).norm() <= 1e-6 * std::sqrt(ep.mu) * ep.scale);
}

TEST_CASE("rotational derivative vanishes on the edges through its anchor") {
  const Eigenpair& ep = generic_pair();
  const auto& t = ep.triangle;
  for (int v = 0; v < 3; ++v) {
    for (int e : {v, (v + 2) % 3}) {
      const EdgeFrame fr = edge_frame(t, e);
      for (double s : {0.2, 0.5, 0.9}) {
        const Point p = fr.at(s * fr.length);
        CHECK(std::abs(rotational_derivative(ep, t.vertex(v), p)) <=
              1e-4 * ep.scale);
      }
    }
  }
  // at an interior point it is -(y - y0) u_x + (x - x0) u_y
  const Point p = t.centroid(), a = t.vertex(0);
  const Vec2 g = eval(ep, p).grad;
  CHECK(rotational_derivative(ep, a, p) ==
        doctest::Approx(-(p.y() - a.y()) * g.x() + (p.x() - a.x()) * g.y()));
}

TEST_CASE("directional derivative is the projected gradient") {
  const Eigenpair& ep = generic_pair();
  const Point p = ep.triangle.from_barycentric(0.6, 0.1, 0.3);
  const Vec2 d(0.6, -0.8);
  CHECK(directional_derivative(ep, d, p) == doctest::Approx(d.dot(eval(ep, p).grad)));
}

TEST_CASE("points outside the triangle are rejected") {
  CHECK_THROWS_AS(eval(right_pair(), Point(0.8, 0.8)), OutsideDomain);
  CHECK_THROWS_AS(eval(right_pair(), Point(-0.1, 0.5)), OutsideDomain);
  CHECK_NOTHROW(eval(right_pair(), Point(0.5, 0.5)));
}

TEST_CASE("grid sampling keeps only interior points") {
  const EigenField f(right_pair());
  const auto rows = sample_grid(f, right_pair().triangle, 21, 21);
  CHECK_FALSE(rows.empty());
  CHECK(rows.size() < 21u * 21u);
  for (const auto& r : rows) CHECK(r.x + r.y <= 1 + 1e-12);
}
