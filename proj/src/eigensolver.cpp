#include "hotspots/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "hotspots/field.hpp"
#include "hotspots/specfun.hpp"

namespace hotspots {

namespace {

constexpr double kPlastic = 1.32471795724474602596;  // R2 sequence generator

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool adjacent(int block_vertex, int edge) {
  return edge == block_vertex || edge == (block_vertex + 2) % 3;
}

}  // namespace

std::vector<Point> interior_sample(const LabeledTriangle& t, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double shift_u = unit_double(rng);
  const double shift_v = unit_double(rng);
  const double a1 = 1.0 / kPlastic;
  const double a2 = 1.0 / (kPlastic * kPlastic);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 1; pts.size() < static_cast<std::size_t>(count); ++i) {
    double u = std::fmod(shift_u + a1 * i, 1.0);
    double v = std::fmod(shift_v + a2 * i, 1.0);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    if (u + v >= 1.0 || u <= 0.0 || v <= 0.0) continue;
    pts.push_back(t.from_barycentric(1.0 - u - v, u, v));
  }
  return pts;
}

Discretization Discretization::build(const LabeledTriangle& t, const BasisSpec& basis,
                                     const SolverSettings& settings) {
  Discretization d;
  d.exclusion_radius = settings.exclusion_radius * t.diameter();
  d.seed = settings.seed;
  const int total = basis.total_terms();
  const double per_edge_terms = std::max(static_cast<double>(settings.terms), total / 3.0);
  const int per_edge =
      std::max(2, static_cast<int>(std::lround(settings.boundary_factor * per_edge_terms)));
  for (int e = 0; e < 3; ++e) {
    const EdgeFrame f = edge_frame(t, e);
    for (int j = 0; j < per_edge; ++j) {
      const double s =
          0.5 * f.length * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / per_edge));
      if (s < d.exclusion_radius || f.length - s < d.exclusion_radius) continue;
      d.boundary.push_back({f.at(s), f.normal, e});
    }
  }
  if (static_cast<int>(d.boundary.size()) < 2 * total)
    throw SolverError("discretization: fewer than two boundary points per basis term");
  const int interior =
      std::max(total, static_cast<int>(std::lround(settings.interior_factor * total)));
  d.interior = interior_sample(t, interior, settings.seed);
  return d;
}

MpsSystem assemble(const LabeledTriangle& t, double mu, const BasisSpec& basis,
                   const Discretization& disc) {
  if (!(mu > 0)) throw SolverError("assemble: mu must be positive");
  const double k = std::sqrt(mu);
  const double diam = t.diameter();
  const int cols = basis.total_terms();
  const auto nb = static_cast<Eigen::Index>(disc.boundary.size());
  const auto ni = static_cast<Eigen::Index>(disc.interior.size());
  MpsSystem sys;
  sys.boundary.resize(nb, cols);
  sys.interior.resize(ni, cols);

  std::vector<TermSample> terms;
  for (Eigen::Index i = 0; i < nb; ++i) {
    const BoundaryNode& node = disc.boundary[static_cast<std::size_t>(i)];
    evaluate_basis(basis, k, node.point, TermDerivatives::gradient, terms);
    for (int c = 0; c < cols; ++c)
      sys.boundary(i, c) = diam * terms[static_cast<std::size_t>(c)].grad.dot(node.normal);
    // cos(n nu theta) has zero theta-derivative on both sides of its own sector.
    for (int b = 0; b < 3; ++b)
      if (adjacent(b, node.edge))
        sys.boundary.block(i, basis.offset(b), 1, basis.blocks[static_cast<std::size_t>(b)].terms)
            .setZero();
  }
  for (Eigen::Index i = 0; i < ni; ++i) {
    evaluate_basis(basis, k, disc.interior[static_cast<std::size_t>(i)], TermDerivatives::value,
                   terms);
    for (int c = 0; c < cols; ++c) sys.interior(i, c) = terms[static_cast<std::size_t>(c)].value;
  }

  sys.column_norms.resize(cols);
  for (int c = 0; c < cols; ++c) {
    double norm = std::sqrt(sys.boundary.col(c).squaredNorm() + sys.interior.col(c).squaredNorm());
    if (!(norm > 0) || !std::isfinite(norm)) norm = 1.0;
    sys.column_norms[c] = norm;
    sys.boundary.col(c) /= norm;
    sys.interior.col(c) /= norm;
  }
  return sys;
}

SigmaResult sigma_min(const LabeledTriangle& t, double mu, const BasisSpec& basis,
                      const Discretization& disc, const SolverSettings& settings) {
  const MpsSystem sys = assemble(t, mu, basis, disc);
  const Eigen::Index nb = sys.boundary.rows();
  Eigen::MatrixXd stacked(nb + sys.interior.rows(), sys.boundary.cols());
  stacked << sys.boundary, sys.interior;

  Eigen::BDCSVD<Eigen::MatrixXd> outer(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = outer.singularValues();
  int rank = 0;
  while (rank < s.size() && s[rank] > settings.rank_tol * s[0]) ++rank;
  SigmaResult out;
  out.condition = s[s.size() - 1] > 0 ? s[0] / s[s.size() - 1] : INFINITY;
  out.rank = rank;
  if (rank < 2)
    throw RankCollapse("sigma_min: stacked basis has numerical rank " + std::to_string(rank),
                       out.condition);

  const Eigen::MatrixXd qb = outer.matrixU().topLeftCorner(nb, rank);
  Eigen::BDCSVD<Eigen::MatrixXd> inner(qb, Eigen::ComputeThinV);
  const Eigen::VectorXd& sb = inner.singularValues();
  out.sigma = sb[rank - 1];
  out.sigma2 = sb[rank - 2];
  out.sigma_gap = out.sigma2 - out.sigma;

  const Eigen::VectorXd w = inner.matrixV().col(rank - 1);
  Eigen::VectorXd scaled =
      outer.matrixV().leftCols(rank) * (w.array() / s.head(rank).array()).matrix();
  out.coeffs = (scaled.array() / sys.column_norms.array()).matrix();
  out.coeffs /= out.coeffs.norm();
  return out;
}

std::vector<ScanSample> sigma_scan(const LabeledTriangle& t, const SolverSettings& settings,
                                   double lo, double hi, int samples) {
  const BasisSpec basis = BasisSpec::for_triangle(t, settings.terms, settings.center_order, settings.image_blocks);
  const Discretization disc = Discretization::build(t, basis, settings);
  std::vector<ScanSample> trace;
  for (int i = 0; i < samples; ++i) {
    const double mu = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
    trace.push_back({mu, sigma_min(t, mu, basis, disc, settings).sigma});
  }
  return trace;
}

double Eigenpair::wavenumber() const { return std::sqrt(mu); }

double Eigenpair::bessel_coefficient(int block, int n) const {
  const VertexBlock& b = basis.blocks[static_cast<std::size_t>(block)];
  const double a = b.order(n);
  // phi_n = J_a(k r) cos(a theta) / L_a with L_a = (k R / 2)^a / Gamma(a + 1).
  const double log_l = n == 0 ? 0.0
                              : a * std::log(0.5 * wavenumber() * b.ref_radius) -
                                    specfun::ln_gamma(a + 1.0);
  return coeffs[basis.offset(block) + n] * std::exp(-log_l);
}

namespace {

class SigmaProbe {
public:
  SigmaProbe(const LabeledTriangle& t, const SolverSettings& settings)
      : t_(t),
        settings_(settings),
        basis_(BasisSpec::for_triangle(t, settings.terms, settings.center_order, settings.image_blocks)),
        disc_(Discretization::build(t, basis_, settings)) {}

  SigmaResult at(double mu) const { return sigma_min(t_, mu, basis_, disc_, settings_); }
  double sigma(double mu) const { return at(mu).sigma; }
  const BasisSpec& basis() const { return basis_; }
  const Discretization& disc() const { return disc_; }

private:
  const LabeledTriangle& t_;
  const SolverSettings& settings_;
  BasisSpec basis_;
  Discretization disc_;
};

// Golden-section search for a minimum of sigma on [a, b].
double golden_minimum(const SigmaProbe& probe, double a, double b, double rel_width) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = probe.sigma(c);
  double fd = probe.sigma(d);
  while (b - a > rel_width * std::abs(0.5 * (a + b))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = probe.sigma(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = probe.sigma(d);
    }
  }
  return fc <= fd ? c : d;
}

std::vector<std::size_t> local_minima(const std::vector<ScanSample>& trace) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < trace.size(); ++i)
    if (trace[i].sigma <= trace[i - 1].sigma && trace[i].sigma <= trace[i + 1].sigma)
      out.push_back(i);
  return out;
}

// A second eigenvalue just below `found` shows up as a small sigma2 there.
// Look for its dip in [lo, found) on a grid scaled by the estimated split.
std::optional<double> smaller_dip(const SigmaProbe& probe, double lo, double found,
                                  const SigmaResult& at_found, const SolverSettings& settings) {
  const double span = found - lo;
  if (!(span > 0)) return std::nullopt;
  const double slope = (probe.sigma(lo) - at_found.sigma) / span;
  if (!(slope > 0)) return std::nullopt;
  const double split = at_found.sigma2 / slope;
  if (split > 2.0 * span) return std::nullopt;
  const double a = std::max(lo, found - 3.0 * split);
  const double b = found - 0.01 * split;
  if (!(b > a)) return std::nullopt;
  constexpr int kSamples = 24;
  std::vector<ScanSample> trace;
  for (int i = 0; i < kSamples; ++i) {
    const double mu = a + (b - a) * i / (kSamples - 1);
    trace.push_back({mu, probe.sigma(mu)});
  }
  for (std::size_t i : local_minima(trace)) {
    const double mu =
        golden_minimum(probe, trace[i - 1].mu, trace[i + 1].mu, settings.refine_width);
    if (probe.sigma(mu) < settings.sigma_tol) return mu;
  }
  return std::nullopt;
}

int sign_of_vertex_pattern(const EigenField& field, double tol) {
  const LabeledTriangle& t = field.triangle();
  const double u1 = field.value(t.vertex(0));
  const double u2 = field.value(t.vertex(1));
  const double u3 = field.value(t.vertex(2));
  if (std::abs(u3 - u2) > tol) return u3 > u2 ? 1 : -1;
  if (std::abs(u1) > tol) return u1 > 0 ? 1 : -1;
  return u3 >= 0 ? 1 : -1;
}

}  // namespace

Eigenpair find_mu2(const LabeledTriangle& t, const SolverSettings& settings,
                   std::optional<MuWindow> window) {
  SigmaProbe probe(t, settings);
  double fem = 0;
  double lo = 0, hi = 0;
  if (window) {
    lo = window->lo;
    hi = window->hi;
    if (!(lo > 0 && hi > lo)) throw SolverError("find_mu2: invalid scan window");
  } else {
    fem = fem_bracket(t, settings.fem_refinement);
    lo = settings.scan_lo * fem;
    hi = settings.scan_hi * fem;
  }
  const double reference = window ? 0.5 * (lo + hi) : fem;
  const int steps =
      std::max(8, static_cast<int>(std::ceil((hi - lo) * settings.scan_resolution / reference)));
  std::vector<ScanSample> trace;
  trace.reserve(static_cast<std::size_t>(steps + 1));
  for (int i = 0; i <= steps; ++i) {
    const double mu = lo + (hi - lo) * i / steps;
    trace.push_back({mu, probe.sigma(mu)});
  }

  std::optional<double> mu2;
  for (std::size_t i : local_minima(trace)) {
    double mu = golden_minimum(probe, trace[i - 1].mu, trace[i + 1].mu, settings.refine_width);
    const SigmaResult r = probe.at(mu);
    if (r.sigma >= settings.sigma_tol) continue;
    if (auto below = smaller_dip(probe, trace[i - 1].mu, mu, r, settings)) mu = *below;
    mu2 = mu;
    break;
  }
  if (!mu2) {
    std::ostringstream msg;
    msg << "find_mu2: no sigma dip below " << settings.sigma_tol << " in [" << lo << ", " << hi
        << "]";
    throw NoDipFound(msg.str(), std::move(trace));
  }

  const SigmaResult r = probe.at(*mu2);
  Eigenpair ep{t,
               *mu2,
               r.coeffs,
               probe.basis(),
               r.sigma,
               r.sigma2,
               r.sigma_gap,
               r.sigma_gap < 10.0 * r.sigma || r.sigma2 < settings.sigma_tol,
               settings.seed,
               1.0,
               fem,
               settings};

  // Unit discrete L2 norm (root mean square) over the interior sample.
  EigenField raw(ep);
  double sum_sq = 0;
  for (const Point& p : probe.disc().interior) sum_sq += std::pow(raw.value(p), 2);
  const double rms = std::sqrt(sum_sq / static_cast<double>(probe.disc().interior.size()));
  ep.coeffs /= rms;

  EigenField normalized(ep);
  double scale = 0;
  for (const Point& p : probe.disc().interior) scale = std::max(scale, std::abs(normalized.value(p)));
  for (const Point& v : t.vertices()) scale = std::max(scale, std::abs(normalized.value(v)));
  ep.scale = scale;
  if (sign_of_vertex_pattern(normalized, 1e-6 * scale) < 0) ep.negate();
  return ep;
}

Certificate residual_certificate(const Eigenpair& ep, int samples_per_edge) {
  const EigenField field(ep);
  const LabeledTriangle& t = ep.triangle;
  const double diam = t.diameter();
  const double excl = ep.settings.exclusion_radius * diam;

  double max_u = 0;
  for (const Point& p : interior_sample(t, 4 * ep.basis.total_terms(), ep.seed + 1))
    max_u = std::max(max_u, std::abs(field.value(p)));

  Certificate c;
  double max_dn = 0;
  for (int e = 0; e < 3; ++e) {
    const EdgeFrame f = edge_frame(t, e);
    for (int j = 0; j < samples_per_edge; ++j) {
      const double s = excl + (f.length - 2 * excl) * (j + 0.5) / samples_per_edge;
      max_dn = std::max(max_dn, std::abs(field.gradient(f.at(s)).dot(f.normal)));
    }
  }
  c.normal_residual = diam * max_dn / max_u;

  double helm = 0;
  for (const Point& p : interior_sample(t, 100, ep.seed + 2)) {
    const FieldSample s = field.sample(p);
    helm = std::max(helm, std::abs(s.hessian.trace() + ep.mu * s.u));
  }
  c.helmholtz_residual = helm / (ep.mu * ep.scale);
  c.certified = ep.sigma <= ep.settings.sigma_tol && c.normal_residual <= ep.settings.residual_tol;
  return c;
}

}  // namespace hotspots
