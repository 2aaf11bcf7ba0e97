#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hotspots/analysis.hpp"
#include "hotspots/eigensolver.hpp"
#include "hotspots/selftest.hpp"

using namespace hotspots;
constexpr double pi = std::numbers::pi;

namespace {

struct Solved {
  Eigenpair ep;
  EigenField field;
  explicit Solved(const LabeledTriangle& t) : ep(find_mu2(t)), field(ep) {}
  FieldView view() const { return FieldView::of(field); }
};

const Solved& right_iso() {
  static const Solved s(LabeledTriangle::right_isosceles());
  return s;
}

}  // namespace

TEST_CASE("Hessian classification") {
  CHECK(classify_hessian(Eigen::Vector2d(-pi * pi, pi * pi).asDiagonal(), 0) == Morse::index1);
  CHECK(classify_hessian(Eigen::Vector2d(2, 3).asDiagonal(), 0) == Morse::index0);
  CHECK(classify_hessian(Eigen::Vector2d(-1, -2).asDiagonal(), 0) == Morse::index2);
  CHECK(classify_hessian(Eigen::Vector2d(1, 1e-9).asDiagonal(), 0) == Morse::degenerate);
  Eigen::Matrix2d rotated;
  rotated << 0, 1, 1, 0;
  CHECK(classify_hessian(rotated, 0) == Morse::index1);
}

TEST_CASE("planted saddle is found at the origin") {
  const PlantedSaddle f;
  const auto t = planted_triangle();
  REQUIRE(t.contains(Point(0, 0)));
  const FieldView view(f, t, pi * pi, 2.0);
  const auto reports = interior_critical_points(view);
  int found = 0;
  for (const auto& r : reports) {
    if (r.location.norm() < 1e-8) {
      ++found;
      CHECK(r.morse == Morse::index1);
      CHECK(r.det_hessian < 0);
    }
  }
  CHECK(found == 1);
}

TEST_CASE("right isosceles has no edge or interior critical point") {
  const FieldView v = right_iso().view();
  CHECK(boundary_critical_points(v).empty());
  CHECK(interior_critical_points(v).empty());
  const HotSpotsVerdict verdict = hot_spots_verdict(v);
  CHECK(verdict.classification == Classification::nocrit);
  CHECK(verdict.extremum_at_vertices);
  CHECK(verdict.extrema.max_vertex == 2);
  CHECK(verdict.extrema.min_vertex == 1);
}

TEST_CASE("right isosceles vertex coefficients") {
  const Solved& s = right_iso();
  const FieldView v = s.view();
  const double amp = s.field.value(Point(0, 1)) / 2;
  // cos(pi x) - cos(pi y) = -4 J_2(pi r) cos(2 theta) + ... about the right angle
  const VertexCoefficients a = bessel_coefficients(v, 0, 2, 0.05);
  CHECK(std::abs(a.c[0]) <= 1e-6 * amp);
  CHECK(std::abs(a.c[1] + 4 * amp) <= 1e-6 * amp);
  const VertexCoefficients b = bessel_coefficients(v, 1, 1, 0.05);
  CHECK(std::abs(b.c[0] + 2 * amp) <= 1e-6 * amp);
  CHECK(b.c0_consistent);
  CHECK_THROWS_AS(bessel_coefficients(v, 0, 1, 0.5), CoefficientError);
  CHECK_THROWS_AS(bessel_coefficients(v, 0, 1, 1e-6), CoefficientError);
}

TEST_CASE("right isosceles nodal line is the diagonal") {
  const NodalArc arc = nodal_arc(right_iso().view());
  CHECK(arc.arc_count == 1);
  CHECK_FALSE(arc.stalled);
  CHECK(arc.max_abs_u <= 1e-6);
  for (const Point& p : arc.points) CHECK(std::abs(p.x() - p.y()) <= 1e-6);
  const bool ends_at_origin = arc.start.vertex == 0 || arc.end.vertex == 0;
  CHECK(ends_at_origin);
}

TEST_CASE("isosceles with apex pi/4 has a saddle at the base midpoint") {
  const double base = (pi - pi / 4) / 2;
  const Solved s(from_angles(base, base));
  const auto& t = s.ep.triangle;
  const HotSpotsVerdict v = hot_spots_verdict(s.view());
  CHECK(v.classification == Classification::crit);
  REQUIRE(v.reports.size() == 1);
  const auto& r = v.reports.front();
  CHECK(r.locus == Locus::edge);
  CHECK(r.morse == Morse::index1);
  CHECK(r.det_hessian < 0);
  CHECK((r.location - 0.5 * (t.vertex(0) + t.vertex(1))).norm() <= 1e-4 * t.diameter());
}

TEST_CASE("obtuse triangle: NOCRIT and the obtuse vertex is not extremal") {
  const Solved s(LabeledTriangle(Point(0, 0), Point(1, 0), Point(0.25, 0.15)));
  const HotSpotsVerdict v = hot_spots_verdict(s.view());
  CHECK(v.classification == Classification::nocrit);
  CHECK(v.reports.empty());
  CHECK(v.extremum_at_vertices);
  CHECK(v.extrema.max_vertex != 2);
  CHECK(v.extrema.min_vertex != 2);
}

TEST_CASE("acute scalene triangle: one index-1 edge critical point") {
  const Solved s(from_angles(1.0, 1.2));
  const HotSpotsVerdict v = hot_spots_verdict(s.view());
  CHECK(v.classification == Classification::crit);
  REQUIRE(v.reports.size() == 1);
  const auto& r = v.reports.front();
  CHECK(r.locus == Locus::edge);
  CHECK(r.morse == Morse::index1);
  CHECK(r.grad_residual <= 1e-7);
  CHECK(v.coeff_ok);
  CHECK(v.nodal_arc_ok);
  CHECK(v.extremum_at_vertices);
}

TEST_CASE("critical point close to a vertex is located from the expansion") {
  // Along the path from (0.9, 0.9) to the right isosceles triangle, the edge
  // critical point runs into a vertex before disappearing.
  const Solved s(straight_line_path(from_angles(0.9, 0.9), 0.9));
  const HotSpotsVerdict v = hot_spots_verdict(s.view());
  CHECK(v.classification == Classification::crit);
  REQUIRE(v.reports.size() == 1);
  const auto& r = v.reports.front();
  CHECK(r.near_vertex);
  CHECK(r.vertex_distance < 1e-3 * s.ep.triangle.diameter());
  CHECK(r.morse == Morse::index1);
}

TEST_CASE("a symmetric field's vertex zero does not produce a critical point") {
  const double apex = 2 * pi / 5, base = (pi - apex) / 2;
  const Solved s(from_angles(base, base));
  const HotSpotsVerdict v = hot_spots_verdict(s.view());
  CHECK(std::abs(s.field.value(s.ep.triangle.vertex(2))) <= 1e-4 * s.ep.scale);
  CHECK(v.classification == Classification::nocrit);
  CHECK(vertex_critical_points(s.view()).empty());
}
