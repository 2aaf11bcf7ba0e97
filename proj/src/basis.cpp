#include "hotspots/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hotspots/specfun.hpp"

namespace hotspots {

Vec2 VertexBlock::to_local(const Point& p) const { return frame().transpose() * (p - origin); }

Eigen::Matrix2d VertexBlock::frame() const {
  Eigen::Matrix2d f;
  f.col(0) = axis;
  f.col(1) = orientation * Vec2(-axis.y(), axis.x());
  return f;
}

Point VertexBlock::reflect(const Point& p) const {
  return p - 2.0 * mirror_normal.dot(p - mirror_point) * mirror_normal;
}

int BasisSpec::total_terms() const { return center_offset(static_cast<int>(centers.size())); }

int BasisSpec::offset(int block) const {
  int n = 0;
  for (int i = 0; i < block; ++i) n += blocks[static_cast<std::size_t>(i)].terms;
  return n;
}

int BasisSpec::image_offset(int image) const {
  int n = offset(3);
  for (int i = 0; i < image; ++i) n += images[static_cast<std::size_t>(i)].terms;
  return n;
}

int BasisSpec::center_offset(int center) const {
  int n = image_offset(static_cast<int>(images.size()));
  for (int i = 0; i < center; ++i) n += centers[static_cast<std::size_t>(i)].terms();
  return n;
}

namespace {

// Centers at mid-width above evenly spaced points of the longest edge; one per
// `kCenterSpacing` inradii of edge length.
std::vector<Point> center_points(const LabeledTriangle& t) {
  int e = 0;
  for (int i = 1; i < 3; ++i)
    if (t.edge_length(i) > t.edge_length(e)) e = i;
  const EdgeFrame f = edge_frame(t, e);
  const double inradius = 2.0 * t.area() / (t.edge_length(0) + t.edge_length(1) + t.edge_length(2));
  const int count = std::clamp(static_cast<int>(std::ceil(f.length / (kCenterSpacing * inradius))), 1,
                               kMaxCenters);
  const Point apex = t.vertex((e + 2) % 3);
  const double height = -f.normal.dot(apex - f.start);
  const double foot = (apex - f.start).dot(f.direction);
  std::vector<Point> out;
  for (int j = 0; j < count; ++j) {
    const double s = f.length * (j + 0.5) / count;
    // Width of the triangle along the inward normal at arc length s.
    const double w = s < foot ? height * s / foot : height * (f.length - s) / (f.length - foot);
    out.push_back(f.at(s) - 0.5 * w * f.normal);
  }
  return out;
}

}  // namespace

BasisSpec BasisSpec::for_triangle(const LabeledTriangle& t, int terms, int center_order,
                                  bool images) {
  const Angles beta = angles(t);
  BasisSpec spec;
  for (int i = 0; i < 3; ++i) {
    VertexBlock& b = spec.blocks[static_cast<std::size_t>(i)];
    b.vertex = i;
    b.beta = beta[static_cast<std::size_t>(i)];
    b.nu = std::numbers::pi / b.beta;
    // Terms proportional to the angle: every block reaches the same top order 3 * terms.
    const int share = static_cast<int>(std::ceil(terms * b.beta * 3.0 / std::numbers::pi));
    const int cap = static_cast<int>(std::floor(kMaxBlockOrder / b.nu)) + 1;
    b.terms = std::max(kMinBlockTerms, std::min(share, cap));
    b.orientation = t.orientation();
    b.origin = t.vertex(i);
    b.axis = (t.vertex((i + 1) % 3) - t.vertex(i)).normalized();
    b.ref_radius = std::max(t.edge_length(i), t.edge_length((i + 2) % 3));
  }
  for (int i = 0; images && i < 3; ++i) {
    const int e = (i + 1) % 3;  // opposite edge
    const EdgeFrame f = edge_frame(t, e);
    const Point v = t.vertex(i);
    const double height = -f.normal.dot(v - f.start);
    const double foot = (v - f.start).dot(f.direction);
    // The reflected triangle must lie inside the vertex's own sector.
    if (foot <= 0 || foot >= f.length || height >= kImageHeightRatio * f.length) continue;
    VertexBlock image = spec.blocks[static_cast<std::size_t>(i)];
    image.mirrored = true;
    image.mirror_point = f.start;
    image.mirror_normal = f.normal;
    spec.images.push_back(image);
  }
  if (center_order > 0) {
    for (const Point& c : center_points(t)) {
      CenterBlock block;
      block.center = c;
      block.order = center_order;
      block.ref_radius = 0;
      for (const auto& v : t.vertices())
        block.ref_radius = std::max(block.ref_radius, (v - c).norm());
      spec.centers.push_back(block);
    }
  }
  return spec;
}

bool BasisSpec::matches(const LabeledTriangle& t, double tol) const {
  const double d = t.diameter();
  const BasisSpec fresh = for_triangle(t, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    const VertexBlock& a = blocks[i];
    const VertexBlock& b = fresh.blocks[i];
    if (a.vertex != static_cast<int>(i) || a.orientation != b.orientation) return false;
    if ((a.origin - b.origin).norm() > tol * d) return false;
    if ((a.axis - b.axis).norm() > tol) return false;
    if (std::abs(a.beta - b.beta) > tol || std::abs(a.nu - b.nu) > tol * a.nu) return false;
    if (std::abs(a.ref_radius - b.ref_radius) > tol * d) return false;
    if (a.terms < kMinBlockTerms) return false;
  }
  return true;
}

namespace {

// Harmonic factor P with its local gradient and Hessian.
struct Harmonic {
  double value = 0;
  Vec2 grad = Vec2::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
};

// Re(z^a) / R^a or Im(z^a) / R^a in polar form, with derivatives from
// d/dz z^a = a z^(a-1).
Harmonic harmonic(double a, double rho, double theta, double inv_r, bool imaginary,
                  TermDerivatives level) {
  auto part = [imaginary](double ang) {
    return imaginary ? Vec2(std::sin(ang), std::cos(ang)) : Vec2(std::cos(ang), -std::sin(ang));
  };
  Harmonic h;
  const double pa = a == 0.0 ? 1.0 : std::pow(rho, a);
  h.value = pa * (imaginary ? std::sin(a * theta) : std::cos(a * theta));
  if (level == TermDerivatives::value || a == 0.0) return h;
  // For the real part: (P_x, P_y) = (Re, -Im)(a z^(a-1)); imaginary: (Im, Re).
  h.grad = a * inv_r * std::pow(rho, a - 1.0) * part((a - 1.0) * theta);
  if (level != TermDerivatives::hessian || a == 1.0) return h;
  const Vec2 q = a * (a - 1.0) * inv_r * inv_r * std::pow(rho, a - 2.0) * part((a - 2.0) * theta);
  h.hessian << q.x(), q.y(), q.y(), -q.x();
  return h;
}

// Multiplies P by G(r) = h_a(k r) and returns global derivatives.
void with_radial(const Harmonic& p, double a, double k, const Vec2& local,
                 const Eigen::Matrix2d& frame, TermDerivatives level, TermSample& s) {
  const double x = k * local.norm();
  const double g0 = specfun::bessel_j_reduced(a, x);
  s.value = p.value * g0;
  if (level == TermDerivatives::value) return;

  // grad G = g1 * (x, y), Hess G = g1 I + g2 (x, y)(x, y)^T; both smooth at r = 0.
  const double g1 = -k * k * specfun::bessel_j_reduced(a + 1.0, x) / (2.0 * (a + 1.0));
  const Vec2 grad_g = g1 * local;
  s.grad = frame * (g0 * p.grad + p.value * grad_g);
  if (level != TermDerivatives::hessian) return;

  const double g2 =
      std::pow(k, 4) * specfun::bessel_j_reduced(a + 2.0, x) / (4.0 * (a + 1.0) * (a + 2.0));
  const Eigen::Matrix2d hess_g = g1 * Eigen::Matrix2d::Identity() + g2 * local * local.transpose();
  const Eigen::Matrix2d hess_local = g0 * p.hessian + p.grad * grad_g.transpose() +
                                     grad_g * p.grad.transpose() + p.value * hess_g;
  s.hessian = frame * hess_local * frame.transpose();
}

}  // namespace

void evaluate_block(const VertexBlock& block, double k, const Point& p, TermDerivatives level,
                    TermSample* out) {
  // An image block sees the reflected point; R = I - 2 n n^T maps derivatives back.
  const Eigen::Matrix2d reflection =
      block.mirrored ? Eigen::Matrix2d(Eigen::Matrix2d::Identity() -
                                       2.0 * block.mirror_normal * block.mirror_normal.transpose())
                     : Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d frame = reflection * block.frame();
  const Point q = block.mirrored ? block.reflect(p) : p;
  const Vec2 local = block.frame().transpose() * (q - block.origin);
  const double rho = local.norm() / block.ref_radius;
  const double theta = std::atan2(local.y(), local.x());
  const double inv_r = 1.0 / block.ref_radius;
  for (int n = 0; n < block.terms; ++n) {
    const double a = block.order(n);
    with_radial(harmonic(a, rho, theta, inv_r, false, level), a, k, local, frame, level, out[n]);
  }
}

void evaluate_block(const CenterBlock& block, double k, const Point& p, TermDerivatives level,
                    TermSample* out) {
  const Eigen::Matrix2d frame = Eigen::Matrix2d::Identity();
  const Vec2 local = p - block.center;
  const double rho = local.norm() / block.ref_radius;
  const double theta = std::atan2(local.y(), local.x());
  const double inv_r = 1.0 / block.ref_radius;
  if (block.order <= 0) return;
  with_radial(harmonic(0.0, rho, theta, inv_r, false, level), 0.0, k, local, frame, level, out[0]);
  for (int m = 1; m <= block.order; ++m) {
    const double a = m;
    with_radial(harmonic(a, rho, theta, inv_r, false, level), a, k, local, frame, level,
                out[2 * m - 1]);
    with_radial(harmonic(a, rho, theta, inv_r, true, level), a, k, local, frame, level,
                out[2 * m]);
  }
}

void evaluate_basis(const BasisSpec& basis, double k, const Point& p, TermDerivatives level,
                    std::vector<TermSample>& out) {
  out.resize(static_cast<std::size_t>(basis.total_terms()));
  for (int b = 0; b < 3; ++b)
    evaluate_block(basis.blocks[static_cast<std::size_t>(b)], k, p, level,
                   out.data() + basis.offset(b));
  for (std::size_t i = 0; i < basis.images.size(); ++i)
    evaluate_block(basis.images[i], k, p, level,
                   out.data() + basis.image_offset(static_cast<int>(i)));
  for (std::size_t c = 0; c < basis.centers.size(); ++c)
    evaluate_block(basis.centers[c], k, p, level,
                   out.data() + basis.center_offset(static_cast<int>(c)));
}

}  // namespace hotspots
