#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hotspots/eigensolver.hpp"
#include "hotspots/field.hpp"

using namespace hotspots;
constexpr double pi = std::numbers::pi;

TEST_CASE("right isosceles: mu = pi^2") {
  const Eigenpair ep = find_mu2(LabeledTriangle::right_isosceles());
  CHECK(std::abs(ep.mu - pi * pi) <= 1e-8 * pi * pi);
  CHECK(ep.sigma < 1e-5);
  CHECK_FALSE(ep.multiplicity_flag);
  CHECK(residual_certificate(ep).certified);
  // sign rule: u(v3) > u(v2)
  const EigenField f(ep);
  CHECK(f.value(Point(0, 1)) > f.value(Point(1, 0)));
}

TEST_CASE("half equilateral triangle shares the equilateral eigenvalue") {
  // 30-60-90 with hypotenuse L: mu_2 = 16 pi^2 / (9 L^2).
  const auto t = from_angles(pi / 2, pi / 3);
  const double L = t.edge_length(1);
  CHECK(L == doctest::Approx(t.diameter()));
  const Eigenpair ep = find_mu2(t);
  const double want = 16 * pi * pi / (9 * L * L);
  CHECK(std::abs(ep.mu - want) <= 1e-8 * want);
}

TEST_CASE("equilateral eigenvalue is flagged as double") {
  const auto t = from_angles(pi / 3, pi / 3);
  const double L = t.edge_length(0);
  const Eigenpair ep = find_mu2(t);
  const double want = 16 * pi * pi / (9 * L * L);
  CHECK(std::abs(ep.mu - want) <= 1e-6 * want);
  CHECK(ep.multiplicity_flag);
}

TEST_CASE("mu scales like 1 / s^2 and ignores rigid motions") {
  const auto t = from_angles(0.9, 1.25);
  const double mu = find_mu2(t).mu;
  const double mu2 = find_mu2(t.scaled(2.0).moved(0.6, Vec2(-1, 3))).mu;
  CHECK(std::abs(4 * mu2 - mu) <= 1e-7 * mu);
}

TEST_CASE("P1 finite elements bound mu from above and converge") {
  const auto t = from_angles(0.8, 1.1);
  const double mu = find_mu2(t).mu;
  const double coarse = fem_eigenvalue(t, 16).mu, fine = fem_eigenvalue(t, 32).mu;
  CHECK(coarse > fine);
  CHECK(fine > mu);
  CHECK((fine - mu) / mu < 0.02);
  // second order: halving h cuts the error by about four
  const double ratio = (coarse - mu) / (fine - mu);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("a window without a dip raises NoDipFound") {
  const auto t = LabeledTriangle::right_isosceles();
  try {
    find_mu2(t, {}, MuWindow{12.0, 15.0});
    FAIL("expected NoDipFound");
  } catch (const NoDipFound& e) {
    CHECK_FALSE(e.trace().empty());
  }
  CHECK_THROWS_AS(find_mu2(t, {}, MuWindow{5.0, 4.0}), SolverError);
}

TEST_CASE("sigma is small only near the eigenvalue") {
  const auto t = from_angles(1.0, 1.2);
  const Eigenpair ep = find_mu2(t);
  const BasisSpec b = BasisSpec::for_triangle(t, 12, 6, true);
  const SolverSettings s;
  const auto disc = Discretization::build(t, b, s);
  CHECK(sigma_min(t, ep.mu, b, disc, s).sigma < 1e-5);
  CHECK(sigma_min(t, 1.05 * ep.mu, b, disc, s).sigma > 1e-3);
}

TEST_CASE("a fixed seed gives bitwise identical eigenpairs") {
  const auto t = from_angles(0.7, 1.3);
  const Eigenpair a = find_mu2(t), b = find_mu2(t);
  CHECK(a.mu == b.mu);
  CHECK(a.coeffs == b.coeffs);
}

TEST_CASE("interior sample lies inside") {
  const auto t = from_angles(0.3, 2.4);
  for (const Point& p : interior_sample(t, 300, 5)) CHECK(t.contains(p, 1e-12));
}
