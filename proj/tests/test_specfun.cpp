#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hotspots/specfun.hpp"

using namespace hotspots::specfun;

namespace {

bool close(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::abs(want);
}

}  // namespace

// Reference values from a 30-digit arbitrary precision evaluation.
TEST_CASE("J_nu and its derivative against high precision values") {
  struct Row {
    double nu, x, j, dj;
  };
  const Row rows[] = {
      {0, 1, 0.76519768655796655145, -0.44005058574493351596},
      {0, 10.5, -0.23664819446234712622, 0.078850014227331488153},
      {1, 2.5, 0.49709410246427403801, -0.24722141745390761153},
      {2.5, 7.25, -0.29961810568713080816, -0.03133309751319261606},
      {0.75, 0.3, 0.25889668297249304989, 0.62494609573546015512},
      {7.3, 4.0, 0.010347026244276716239, 0.016247282299770602731},
      {12.0, 30.0, 0.14825335109966010021, -0.034242535302039496416},
      {40.5, 20.0, 5.0661960070771787909e-10, 8.9601649762974509393e-10},
      {150.0, 55.0, 8.5200617772012253253e-50, 2.1630092054814486196e-49},
      {3.0, 0.001, 2.0833332031250033853e-11, 6.24999934895835638e-8},
      {200, 60, 3.6353516029560498905e-82, 1.156265999415815392e-81},
  };
  for (const Row& r : rows) {
    INFO("nu = " << r.nu << ", x = " << r.x);
    const BesselEval b = bessel_j(r.nu, r.x);
    CHECK(close(b.value, r.j, 1e-11));
    CHECK(close(b.derivative, r.dj, 1e-10));
  }
}

TEST_CASE("half-integer orders match closed forms") {
  for (double x : {0.01, 0.5, 1.7, 6.0, 13.3, 29.0, 47.5}) {
    const double s = std::sqrt(2 / (std::numbers::pi * x));
    CHECK(close(bessel_j(0.5, x).value, s * std::sin(x), 1e-12) );
    CHECK(close(bessel_j(1.5, x).value, s * (std::sin(x) / x - std::cos(x)), 1e-11));
  }
}

TEST_CASE("three-term recurrence and derivative identity hold") {
  for (double nu : {0.6, 1.25, 3.0, 8.4, 25.0}) {
    for (double x : {0.8, 3.3, 9.0, 21.0, 40.0}) {
      const double jm = bessel_j(nu - 0.5, x).value, j = bessel_j(nu + 0.5, x).value,
                   jp = bessel_j(nu + 1.5, x).value;
      const double lhs = jm + jp, rhs = 2 * (nu + 0.5) / x * j;
      const double size = std::abs(jm) + std::abs(jp) + std::abs(rhs);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * size);
      const double d = bessel_j(nu + 0.5, x).derivative;
      CHECK(std::abs(d - 0.5 * (jm - jp)) <= 1e-12 * (std::abs(jm) + std::abs(jp)));
    }
  }
}

TEST_CASE("small argument limits") {
  CHECK(bessel_j(0, 0).value == 1.0);
  CHECK(bessel_j(2.3, 0).value == 0.0);
  CHECK(bessel_j(1, 0).derivative == doctest::Approx(0.5));
  CHECK(bessel_j(0, 0).derivative == 0.0);
  CHECK(bessel_j_reduced(7.5, 0) == 1.0);
  CHECK(bessel_j_reduced(3.0, 1e-6) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reduced and scaled forms agree with J_nu") {
  for (double nu : {0.0, 1.5, 4.2, 30.0}) {
    for (double x : {0.2, 2.0, 11.0, 35.0}) {
      const double j = bessel_j(nu, x).value;
      const double pref = std::exp(nu * std::log(x / 2) - std::lgamma(nu + 1));
      CHECK(close(bessel_j_reduced(nu, x) * pref, j, 1e-11));
      const double k = 3.0, r = x / k;
      CHECK(close(bessel_j_scaled(nu, r, k) * std::pow(r, nu), j, 1e-11));
    }
  }
  // far below the range where J_nu underflows
  const double tiny = bessel_j_scaled(2.5, 1e-140, 4.0);
  CHECK(close(tiny, std::pow(2.0, 2.5) / std::tgamma(3.5), 1e-12));
}

TEST_CASE("ln_gamma") {
  CHECK(close(ln_gamma(0.37), 0.87694681948487930234, 1e-13));
  CHECK(close(ln_gamma(150.25), 601.26150403249972598, 1e-14));
  CHECK(std::abs(ln_gamma(1.0)) <= 1e-15);
  CHECK_THROWS(ln_gamma(0.0));
}

TEST_CASE("arguments outside the envelope throw") {
  CHECK_THROWS_AS(bessel_j(-1.0, 1.0), EnvelopeError);
  CHECK_THROWS_AS(bessel_j(201.0, 1.0), EnvelopeError);
  CHECK_THROWS_AS(bessel_j(3.0, 61.0), EnvelopeError);
  CHECK_THROWS_AS(bessel_j(3.0, -0.5), EnvelopeError);
}
