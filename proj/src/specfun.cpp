#include "hotspots/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hotspots::specfun {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      c_ += (sum_ - t) + v;
    else
      c_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

private:
  double sum_ = 0;
  double c_ = 0;
};

// Series terms (-x^2/4)^m Gamma(nu+1) / (m! Gamma(m+nu+1)) peak at roughly
// exp(x^2 / (4 (nu + 1))); keep that below ~e^4 or stay at small x.
bool series_is_accurate(double nu, double x) { return x <= 12.0 || x * x <= 16.0 * (nu + 1.0); }

double reduced_series(double nu, double x) {
  const double q = 0.25 * x * x;
  CompensatedSum sum;
  sum.add(1.0);
  double term = 1.0;
  for (int m = 1; m < kMaxIter; ++m) {
    term *= -q / (m * (m + nu));
    sum.add(term);
    if (std::abs(term) < 1e-17 * std::abs(sum.value()) && m * (m + nu) > q) break;
  }
  return sum.value();
}

// Steed's method (continued fractions CF1 and CF2 plus the Wronskian) for
// x >= 2. Returns J_nu(x) and J'_nu(x).
BesselEval steed(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / std::numbers::pi;

  // CF1: f_nu = J'_nu / J_nu.
  int isign = 1;
  double h = std::max(nu * xi, 1e-30);
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i < kMaxIter; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < 1e-30) d = 1e-30;
    c = b - 1.0 / c;
    if (std::abs(c) < 1e-30) c = 1e-30;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i >= kMaxIter) throw EnvelopeError("bessel_j: CF1 failed to converge");

  // Downward recurrence from nu to mu, rescaling to stay in range.
  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  double rjl1 = rjl;
  double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
    if (std::abs(rjl) > 1e250) {
      rjl *= 1e-250;
      rjpl *= 1e-250;
      rjl1 *= 1e-250;
      rjp1 *= 1e-250;
    }
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  // CF2: p + iq = (J'_mu + i Y'_mu) / (J_mu + i Y_mu).
  double a = 0.25 - mu2;
  double p = -0.5 * xi;
  double q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact;
  double ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den;
  double di = -bi / den;
  double dlr = cr * dr - ci * di;
  double dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 2; i < kMaxIter; ++i) {
    a += 2 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < 1e-30) dr = 1e-30;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < 1e-30) cr = 1e-30;
    den = dr * dr + di * di;
    dr /= den;
    di = -di / den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
  }
  if (i >= kMaxIter) throw EnvelopeError("bessel_j: CF2 failed to converge");

  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  const double scale = rjmu / rjl;
  return {rjl1 * scale, rjp1 * scale};
}

void check_envelope(double nu, double x, const char* who) {
  if (!(nu >= 0.0 && nu <= kMaxOrder) || !(x >= 0.0 && x <= kMaxArgument))
    throw EnvelopeError(std::string(who) + ": (nu, x) = (" + std::to_string(nu) + ", " +
                        std::to_string(x) + ") outside the operating envelope");
}

// (x/2)^p / Gamma(g) evaluated in log space.
double power_over_gamma(double half_x, double p, double g) {
  return std::exp(p * std::log(half_x) - std::lgamma(g));
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("ln_gamma: argument must be positive, got " + std::to_string(x));
  return std::lgamma(x);
}

double bessel_j_reduced(double nu, double x) {
  if (!(nu >= 0.0) || !std::isfinite(nu) || !(x >= 0.0 && x <= kMaxArgument))
    throw EnvelopeError("bessel_j_reduced: (nu, x) = (" + std::to_string(nu) + ", " +
                        std::to_string(x) + ") outside the operating envelope");
  if (series_is_accurate(nu, x)) return reduced_series(nu, x);
  const BesselEval j = steed(nu, x);
  return j.value * std::exp(std::lgamma(nu + 1.0) - nu * std::log(0.5 * x));
}

BesselEval bessel_j(double nu, double x) {
  check_envelope(nu, x, "bessel_j");
  if (x == 0.0) {
    BesselEval out;
    out.value = nu == 0.0 ? 1.0 : 0.0;
    if (nu == 0.0 || nu > 1.0)
      out.derivative = 0.0;
    else if (nu == 1.0)
      out.derivative = 0.5;
    else
      out.derivative = std::numeric_limits<double>::infinity();
    return out;
  }
  if (!series_is_accurate(nu, x)) return steed(nu, x);

  const double hx = 0.5 * x;
  const double h0 = reduced_series(nu, x);
  const double h1 = reduced_series(nu + 1.0, x);
  BesselEval out;
  out.value = power_over_gamma(hx, nu, nu + 1.0) * h0;
  // J'_nu = (nu / x) J_nu - J_{nu+1}
  const double upper = power_over_gamma(hx, nu + 1.0, nu + 2.0) * h1;
  out.derivative = (nu == 0.0 ? 0.0 : 0.5 * power_over_gamma(hx, nu - 1.0, nu) * h0) - upper;
  return out;
}

double bessel_j_scaled(double nu, double r, double k) {
  if (!(r >= 0.0) || !(k >= 0.0)) throw EnvelopeError("bessel_j_scaled: negative radius or k");
  const double x = k * r;
  check_envelope(nu, x, "bessel_j_scaled");
  if (k == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return power_over_gamma(0.5 * k, nu, nu + 1.0) * bessel_j_reduced(nu, x);
}

}  // namespace hotspots::specfun
