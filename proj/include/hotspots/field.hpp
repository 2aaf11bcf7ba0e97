#pragma once

#include <vector>

#include <Eigen/Core>

#include "hotspots/eigensolver.hpp"
#include "hotspots/geometry.hpp"

namespace hotspots {

class OutsideDomain : public GeometryError {
public:
  using GeometryError::GeometryError;
};

/// Pointwise value, gradient and Hessian of a scalar field.
struct FieldSample {
  Point point;
  double u = 0;
  Vec2 grad = Vec2::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  bool hessian_available = true;
};

/// Scalar field on a triangle. The analysis routines only see this surface,
/// so closed-form fields can be planted in tests.
class ScalarField {
public:
  virtual ~ScalarField() = default;
  virtual FieldSample sample(const Point& p) const = 0;
  virtual double value(const Point& p) const { return sample(p).u; }
  virtual Vec2 gradient(const Point& p) const { return sample(p).grad; }
};

/// Eigenfunction u = sum_b sum_n c_bn phi_bn of a solved eigenpair.
class EigenField : public ScalarField {
public:
  explicit EigenField(Eigenpair ep);

  FieldSample sample(const Point& p) const override;
  double value(const Point& p) const override;
  Vec2 gradient(const Point& p) const override;

  const Eigenpair& eigenpair() const { return ep_; }
  const LabeledTriangle& triangle() const { return ep_.triangle; }

private:
  void check_inside(const Point& p) const;
  FieldSample evaluate(const Point& p, TermDerivatives level) const;

  Eigenpair ep_;
  double outside_tol_;
  double hessian_exclusion_;
};

/// u, grad u and the Hessian at p. Throws OutsideDomain more than 1e-9 * diameter outside.
FieldSample eval(const Eigenpair& ep, const Point& p);

/// R_p0 u = -(y - p0y) u_x + (x - p0x) u_y.
double rotational_derivative(const Eigenpair& ep, const Point& anchor, const Point& p);

/// grad u . direction.
double directional_derivative(const Eigenpair& ep, const Vec2& direction, const Point& p);

struct GridRow {
  double x, y, u, ux, uy;
};

/// Field on an nx-by-ny lattice over the bounding box; points outside the triangle skipped.
std::vector<GridRow> sample_grid(const ScalarField& field, const LabeledTriangle& t, int nx,
                                 int ny);

}  // namespace hotspots
