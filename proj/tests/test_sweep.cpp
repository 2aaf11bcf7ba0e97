#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "hotspots/io.hpp"
#include "hotspots/sweep.hpp"

using namespace hotspots;
constexpr double pi = std::numbers::pi;

TEST_CASE("sweep grid") {
  const auto nodes = sweep_nodes(24, 0.05);
  CHECK(nodes.size() == 253u);
  const double h = (pi - 0.15) / 24;
  for (auto [b1, b2] : nodes) {
    CHECK(b1 > 0.05);
    CHECK(b2 > 0.05);
    CHECK(pi - b1 - b2 > 0.05 - 1e-12);
    const double i = (b1 - 0.05) / h, j = (b2 - 0.05) / h;
    CHECK(std::abs(i - std::round(i)) < 1e-9);
    CHECK(std::abs(j - std::round(j)) < 1e-9);
  }
  std::set<std::pair<double, double>> unique(nodes.begin(), nodes.end());
  CHECK(unique.size() == nodes.size());
  CHECK_THROWS(sweep_nodes(2, 0.05));
  CHECK_THROWS(sweep_nodes(24, 1.2));
}

TEST_CASE("verdicts do not depend on the labeling") {
  SweepSettings s;
  for (auto [b1, b2] : {std::pair{1.0, 1.2}, {0.4, 2.2}, {0.3, 0.5}}) {
    const double b3 = pi - b1 - b2;
    const auto a = classify_triangle(from_angles(b1, b2), b1, b2, s);
    const auto b = classify_triangle(from_angles(b2, b3), b2, b3, s);
    const auto c = classify_triangle(from_angles(b3, b1), b3, b1, s);
    CHECK(a.verdict == b.verdict);
    CHECK(a.verdict == c.verdict);
    // from_angles fixes an edge length, so compare mu * diam^2
    auto inv = [](const SweepRecord& r) {
      const double d = from_angles(r.beta1, r.beta2).diameter();
      return r.mu2 * d * d;
    };
    CHECK(inv(a) == doctest::Approx(inv(b)).epsilon(1e-9));
    CHECK(inv(a) == doctest::Approx(inv(c)).epsilon(1e-9));
  }
}

TEST_CASE("obtuse nodes are NOCRIT and near-equilateral nodes AMBIGUOUS") {
  SweepSettings s;
  const auto obtuse = classify_triangle(from_angles(2.0, 0.6), 2.0, 0.6, s);
  CHECK(obtuse.verdict == Classification::nocrit);
  CHECK_FALSE(obtuse.crit.has_value());
  const auto eq = classify_triangle(from_angles(pi / 3 + 0.01, pi / 3 - 0.01), pi / 3 + 0.01,
                                    pi / 3 - 0.01, s);
  CHECK(eq.verdict == Classification::ambiguous);
}

TEST_CASE("sweep output is identical for any worker count") {
  SweepSettings s;
  s.nodes = {{1.0, 1.2}, {0.5, 0.7}, {2.1, 0.4}};
  s.workers = 1;
  const auto a = moduli_sweep(s);
  s.workers = 3;
  const auto b = moduli_sweep(s);
  std::ostringstream ca, cb;
  write_sweep_csv(ca, a, "test");
  write_sweep_csv(cb, b, "test");
  CHECK(ca.str() == cb.str());
  REQUIRE(a.size() == 3u);
  CHECK(a[0].beta1 == 1.0);
  CHECK(a[2].beta1 == 2.1);
}

TEST_CASE("reference points are inside the simplex") {
  const auto pts = reference_barycentric(100);
  CHECK(pts.size() == 100u);
  for (const auto& l : pts) {
    CHECK(l.minCoeff() > 0.0);
    CHECK(l.sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("continuation is sign coherent and covariant under a sign flip") {
  ContinuationSettings s;
  s.steps = 8;
  const auto t0 = from_angles(1.0, 1.15);
  Eigenpair start = find_mu2(t0, s.solver);
  const auto a = continuation(start, s);
  start.negate();
  const auto b = continuation(start, s);
  REQUIRE(a.size() == 9u);
  REQUIRE(b.size() == 9u);
  CHECK(a.back().t == 1.0);
  CHECK(a.back().eigenpair.mu == doctest::Approx(pi * pi).epsilon(1e-8));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].aligned);
    CHECK(a[i].eigenpair.mu == b[i].eigenpair.mu);
    const auto& ca = a[i].eigenpair.coeffs;
    const auto& cb = b[i].eigenpair.coeffs;
    CHECK((ca + cb).norm() <= 1e-12 * ca.norm());
    if (i > 0) CHECK(a[i].alignment > 0.5);
  }
}

TEST_CASE("isosceles family") {
  const auto t = isosceles(pi / 4);
  const Angles a = angles(t);
  CHECK(a[2] == doctest::Approx(pi / 4));
  CHECK(a[0] == doctest::Approx(a[1]));
  SweepSettings s;
  const auto crit = isosceles_sample(pi / 4, s);
  CHECK(crit.verdict == Classification::crit);
  CHECK(crit.base_midpoint_distance <= 1e-4);
  const auto none = isosceles_sample(2 * pi / 5, s);
  CHECK(none.verdict == Classification::nocrit);
  CHECK(std::abs(none.u_apex) < 1e-4);
}
