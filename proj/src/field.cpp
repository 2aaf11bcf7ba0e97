#include "hotspots/field.hpp"

#include <algorithm>
#include <cmath>

namespace hotspots {

EigenField::EigenField(Eigenpair ep) : ep_(std::move(ep)) {
  const double d = ep_.triangle.diameter();
  outside_tol_ = 1e-9 * d;
  hessian_exclusion_ = ep_.settings.exclusion_radius * d;
}

void EigenField::check_inside(const Point& p) const {
  if (!ep_.triangle.contains(p, outside_tol_))
    throw OutsideDomain("evaluation point (" + std::to_string(p.x()) + ", " +
                        std::to_string(p.y()) + ") lies outside the triangle");
}

FieldSample EigenField::evaluate(const Point& p, TermDerivatives level) const {
  check_inside(p);
  FieldSample out;
  out.point = p;
  const double k = ep_.wavenumber();
  thread_local std::vector<TermSample> terms;
  evaluate_basis(ep_.basis, k, p, level, terms);
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double c = ep_.coeffs[static_cast<Eigen::Index>(j)];
    out.u += c * terms[j].value;
    if (level != TermDerivatives::value) out.grad += c * terms[j].grad;
    if (level == TermDerivatives::hessian) out.hessian += c * terms[j].hessian;
  }
  if (level == TermDerivatives::hessian) {
    for (const VertexBlock& block : ep_.basis.blocks)
      if (block.nu < 2.0 && (p - block.origin).norm() < hessian_exclusion_)
        out.hessian_available = false;
  }
  return out;
}

FieldSample EigenField::sample(const Point& p) const {
  return evaluate(p, TermDerivatives::hessian);
}

double EigenField::value(const Point& p) const { return evaluate(p, TermDerivatives::value).u; }

Vec2 EigenField::gradient(const Point& p) const {
  return evaluate(p, TermDerivatives::gradient).grad;
}

FieldSample eval(const Eigenpair& ep, const Point& p) { return EigenField(ep).sample(p); }

double rotational_derivative(const Eigenpair& ep, const Point& anchor, const Point& p) {
  const Vec2 g = EigenField(ep).gradient(p);
  return -(p.y() - anchor.y()) * g.x() + (p.x() - anchor.x()) * g.y();
}

double directional_derivative(const Eigenpair& ep, const Vec2& direction, const Point& p) {
  return EigenField(ep).gradient(p).dot(direction);
}

std::vector<GridRow> sample_grid(const ScalarField& field, const LabeledTriangle& t, int nx,
                                 int ny) {
  Point lo = t.vertex(0), hi = t.vertex(0);
  for (const auto& v : t.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::vector<GridRow> rows;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point p(lo.x() + (hi.x() - lo.x()) * i / std::max(1, nx - 1),
                    lo.y() + (hi.y() - lo.y()) * j / std::max(1, ny - 1));
      if (!t.contains(p)) continue;
      const Vec2 g = field.gradient(p);
      rows.push_back({p.x(), p.y(), field.value(p), g.x(), g.y()});
    }
  }
  return rows;
}

}  // namespace hotspots
