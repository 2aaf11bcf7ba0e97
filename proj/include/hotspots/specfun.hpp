#pragma once

#include <stdexcept>

namespace hotspots::specfun {

class EnvelopeError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Operating envelope of bessel_j.
inline constexpr double kMaxOrder = 200.0;
inline constexpr double kMaxArgument = 60.0;

struct BesselEval {
  double value = 0;
  double derivative = 0;  // d/dx J_nu(x)
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// J_nu(x) and J'_nu(x) for 0 <= nu <= 200, 0 <= x <= 60.
///
/// Ascending series for small arguments, Steed's continued fractions
/// otherwise. At x = 0 with 0 < nu < 1 the derivative is +inf.
BesselEval bessel_j(double nu, double x);

/// Reduced Bessel function h_nu(x) = Gamma(nu + 1) (2 / x)^nu J_nu(x).
///
/// h_nu is an entire even function of x with h_nu(0) = 1. It stays O(1) for
/// orders far beyond where J_nu itself underflows, which is what the corner
/// basis needs: J_nu(k r) = (k r / 2)^nu / Gamma(nu + 1) * h_nu(k r).
/// Valid for any nu >= 0 and 0 <= x <= 60.
double bessel_j_reduced(double nu, double x);

/// g-style corner function J_nu(k r) / r^nu, evaluated from the series in r^2
/// so it stays accurate as r -> 0.
double bessel_j_scaled(double nu, double r, double k);

}  // namespace hotspots::specfun
