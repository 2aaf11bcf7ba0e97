#include "hotspots/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <gsl/gsl_integration.h>

#include <Eigen/Eigenvalues>

#include "hotspots/basis.hpp"
#include "hotspots/specfun.hpp"

namespace hotspots {

FieldView FieldView::of(const EigenField& f) {
  const Eigenpair& ep = f.eigenpair();
  return FieldView(f, ep.triangle, ep.mu, ep.scale, ep.multiplicity_flag);
}

const char* to_string(Morse m) {
  switch (m) {
    case Morse::index0: return "index0";
    case Morse::index1: return "index1";
    case Morse::index2: return "index2";
    case Morse::degenerate: return "degenerate";
    case Morse::unavailable: return "unavailable";
  }
  return "?";
}

const char* to_string(Locus l) { return l == Locus::edge ? "edge" : "interior"; }

const char* to_string(Classification c) {
  switch (c) {
    case Classification::crit: return "CRIT";
    case Classification::nocrit: return "NOCRIT";
    case Classification::ambiguous: return "AMBIGUOUS";
  }
  return "?";
}

Morse classify_hessian(const Eigen::Matrix2d& hessian, double mu_u, double degeneracy) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(hessian, Eigen::EigenvaluesOnly);
  const Eigen::Vector2d lambda = eig.eigenvalues();
  const double largest = lambda.cwiseAbs().maxCoeff();
  const double smallest = lambda.cwiseAbs().minCoeff();
  if (!(smallest >= degeneracy * std::max(largest, std::abs(mu_u)))) return Morse::degenerate;
  const int negative = (lambda[0] < 0) + (lambda[1] < 0);
  return negative == 0 ? Morse::index0 : negative == 1 ? Morse::index1 : Morse::index2;
}

void classify_critical_point(CriticalPointReport& report, double mu, double degeneracy) {
  report.morse = report.hessian_available
                     ? classify_hessian(report.hessian, mu * report.u, degeneracy)
                     : Morse::unavailable;
}

namespace {

double tangential(const ScalarField& f, const EdgeFrame& e, double s) {
  return f.gradient(e.at(s)).dot(e.direction);
}

// Root of the tangential derivative inside a sign-change bracket [a, b].
double edge_root(const ScalarField& f, const EdgeFrame& e, double a, double b, double ga,
                 bool& newton_ok) {
  while (b - a > 1e-8 * e.length) {
    const double m = 0.5 * (a + b);
    const double gm = tangential(f, e, m);
    if (gm == 0) return m;
    if ((gm < 0) == (ga < 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  double s = 0.5 * (a + b);
  newton_ok = false;
  for (int it = 0; it < 30; ++it) {
    const FieldSample fs = f.sample(e.at(s));
    const double g = fs.grad.dot(e.direction);
    const double dg = e.direction.dot(fs.hessian * e.direction);
    if (!fs.hessian_available || dg == 0) break;
    const double next = s - g / dg;
    if (next < a || next > b) break;
    const bool done = std::abs(next - s) <= 1e-15 * e.length;
    s = next;
    if (done) {
      newton_ok = true;
      break;
    }
  }
  if (!newton_ok) {
    // Bisection only, to the resolution of the arithmetic.
    for (int it = 0; it < 80 && b - a > 4 * std::numeric_limits<double>::epsilon() * e.length;
         ++it) {
      const double m = 0.5 * (a + b);
      const double gm = tangential(f, e, m);
      if ((gm < 0) == (ga < 0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    s = 0.5 * (a + b);
  }
  return s;
}

double altitude(const LabeledTriangle& t, int vertex) {
  return 2.0 * t.area() / t.edge_length((vertex + 1) % 3);
}

double shortest_adjacent(const LabeledTriangle& t, int vertex) {
  return std::min(t.edge_length(vertex), t.edge_length((vertex + 2) % 3));
}

}  // namespace

std::vector<CriticalPointReport> boundary_critical_points(const FieldView& view,
                                                          const AnalysisSettings& s) {
  const ScalarField& f = *view.field;
  const double diam = view.diameter();
  const double delta = s.vertex_exclusion * diam;
  std::vector<CriticalPointReport> out;
  for (int e = 0; e < 3; ++e) {
    const EdgeFrame frame = edge_frame(view.triangle, e);
    const int n = std::max(2, s.edge_samples);
    std::vector<double> arc(static_cast<std::size_t>(n)), g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      arc[j] = delta + (frame.length - 2 * delta) * j / (n - 1);
      g[j] = tangential(f, frame, arc[j]);
    }
    std::vector<std::pair<double, bool>> roots;
    for (int j = 0; j + 1 < n; ++j) {
      if (g[j] == 0) {
        roots.emplace_back(arc[j], true);
      } else if ((g[j] < 0) != (g[j + 1] < 0) && g[j + 1] != 0) {
        bool newton_ok = true;
        roots.emplace_back(edge_root(f, frame, arc[j], arc[j + 1], g[j], newton_ok), newton_ok);
      }
    }
    if (g[n - 1] == 0) roots.emplace_back(arc[n - 1], true);

    Eigen::Matrix2d basis;
    basis.col(0) = frame.direction;
    basis.col(1) = -frame.normal;
    for (const auto& [arc_s, newton_ok] : roots) {
      const FieldSample fs = f.sample(frame.at(arc_s));
      CriticalPointReport r;
      r.location = fs.point;
      r.locus = Locus::edge;
      r.edge = e;
      r.arc_length = arc_s;
      r.u = fs.u;
      r.grad_residual = fs.grad.norm() * diam / view.scale;
      r.hessian_available = fs.hessian_available;
      r.hessian = basis.transpose() * fs.hessian * basis;
      r.det_hessian = r.hessian.determinant();
      r.mixed_residual = std::abs(r.hessian(0, 1)) / (view.mu * view.scale);
      r.newton_converged = newton_ok;
      classify_critical_point(r, view.mu, s.degeneracy);
      out.push_back(r);
    }
  }
  return out;
}

std::vector<CriticalPointReport> interior_critical_points(const FieldView& view,
                                                          const AnalysisSettings& s) {
  const ScalarField& f = *view.field;
  const LabeledTriangle& t = view.triangle;
  const double diam = view.diameter();
  const double margin = s.vertex_exclusion * diam;
  const int n = std::max(1, s.seed_grid);
  std::vector<CriticalPointReport> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n; ++j) {
      const double l1 = (i + 1.0 / 3.0) / n;
      const double l2 = (j + 1.0 / 3.0) / n;
      Point p = t.from_barycentric(l1, l2, 1.0 - l1 - l2);
      bool converged = false;
      for (int it = 0; it < 50; ++it) {
        const FieldSample fs = f.sample(p);
        if (!fs.hessian_available) break;
        const double det = fs.hessian.determinant();
        if (!(std::abs(det) > 0)) break;
        Vec2 step = -fs.hessian.inverse() * fs.grad;
        const double len = step.norm();
        if (len > 0.1 * diam) step *= 0.1 * diam / len;
        p += step;
        if (t.boundary_distance(p) < -1e-9 * diam) break;
        if (len <= 1e-14 * diam) {
          converged = true;
          break;
        }
      }
      if (!converged || t.boundary_distance(p) <= margin) continue;
      const bool duplicate = std::any_of(out.begin(), out.end(), [&](const auto& r) {
        return (r.location - p).norm() < 1e-6 * diam;
      });
      if (duplicate) continue;
      const FieldSample fs = f.sample(p);
      CriticalPointReport r;
      r.location = p;
      r.locus = Locus::interior;
      r.u = fs.u;
      r.grad_residual = fs.grad.norm() * diam / view.scale;
      r.hessian_available = fs.hessian_available;
      r.hessian = fs.hessian;
      r.det_hessian = fs.hessian.determinant();
      classify_critical_point(r, view.mu, s.degeneracy);
      out.push_back(r);
    }
  }
  return out;
}

VertexCoefficients bessel_coefficients(const FieldView& view, int vertex, int n_max,
                                       double r_probe, int nodes) {
  const LabeledTriangle& t = view.triangle;
  if (vertex < 0 || vertex > 2) throw CoefficientError("bessel_coefficients: vertex out of range");
  if (n_max < 0) throw CoefficientError("bessel_coefficients: negative n_max");
  const double shortest = shortest_adjacent(t, vertex);
  if (r_probe < 1e-3 * shortest * (1 - 1e-12) || r_probe > 0.2 * shortest * (1 + 1e-12))
    throw CoefficientError("bessel_coefficients: probe radius outside [1e-3, 0.2] x edge");
  if (r_probe >= altitude(t, vertex))
    throw CoefficientError("bessel_coefficients: probe arc leaves the triangle");

  const VertexBlock block = BasisSpec::for_triangle(t, 1).blocks[static_cast<std::size_t>(vertex)];
  const double k = std::sqrt(view.mu);
  const double x = k * r_probe;
  std::vector<double> factor(static_cast<std::size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    const double order = block.order(n);
    if (order > specfun::kMaxOrder)
      throw CoefficientError("bessel_coefficients: order beyond the Bessel envelope");
    factor[n] = specfun::bessel_j(order, x).value;
    if (!(factor[n] > 1e-12))
      throw CoefficientError("bessel_coefficients: Bessel factor J_" + std::to_string(order) +
                             "(k r) too small; increase the probe radius");
  }

  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes)),
            &gsl_integration_glfixed_table_free);
  if (!table) throw CoefficientError("bessel_coefficients: quadrature table allocation failed");

  const Eigen::Matrix2d frame = block.frame();
  std::vector<double> integral(static_cast<std::size_t>(n_max + 1), 0.0);
  for (int j = 0; j < nodes; ++j) {
    double theta = 0, w = 0;
    gsl_integration_glfixed_point(0.0, block.beta, static_cast<std::size_t>(j), &theta, &w,
                                  table.get());
    const Point p = block.origin + frame * Vec2(r_probe * std::cos(theta), r_probe * std::sin(theta));
    const double u = view.field->value(p);
    for (int n = 0; n <= n_max; ++n) integral[n] += w * u * std::cos(block.order(n) * theta);
  }

  VertexCoefficients out;
  out.vertex = vertex;
  out.radius = r_probe;
  out.nodes = nodes;
  for (int n = 0; n <= n_max; ++n)
    out.c.push_back((n == 0 ? 1.0 : 2.0) / block.beta * integral[n] / factor[n]);
  out.c0_direct = view.field->value(t.vertex(vertex));
  out.c0_consistent = std::abs(out.c[0] - out.c0_direct) <= 1e-6 * view.scale;
  return out;
}

namespace {

// Boundary position by arc length over the whole perimeter, starting at v1.
struct BoundaryWalk {
  const LabeledTriangle& t;
  std::array<EdgeFrame, 3> edges;
  double perimeter = 0;

  explicit BoundaryWalk(const LabeledTriangle& tri)
      : t(tri), edges{edge_frame(tri, 0), edge_frame(tri, 1), edge_frame(tri, 2)} {
    for (const auto& e : edges) perimeter += e.length;
  }

  std::pair<int, double> locate(double sigma) const {
    sigma = std::clamp(sigma, 0.0, perimeter);
    for (int e = 0; e < 2; ++e) {
      if (sigma <= edges[e].length) return {e, sigma};
      sigma -= edges[e].length;
    }
    return {2, std::min(sigma, edges[2].length)};
  }
  Point at(double sigma) const {
    const auto [e, s] = locate(sigma);
    return edges[e].at(s);
  }
};

struct BoundaryZero {
  Point point;
  int vertex = -1;
  int edge = -1;
  double arc_length = 0;
  bool used = false;
};

// Arc-length position of p on edge e.
double arc_on_edge(const EdgeFrame& e, const Point& p) {
  return std::clamp((p - e.start).dot(e.direction), 0.0, e.length);
}

int edge_of(const LabeledTriangle& t, const Point& p) {
  int best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 3; ++e) {
    const EdgeFrame f = edge_frame(t, e);
    const double d = std::abs(f.normal.dot(p - f.start));
    if (d < dist) {
      dist = d;
      best = e;
    }
  }
  return best;
}

// Zero of u on edge e near arc length s0, by Newton along the edge with a
// bisection fallback over [lo, hi].
double edge_zero(const ScalarField& f, const EdgeFrame& e, double s0, double lo, double hi) {
  auto u = [&](double s) { return f.value(e.at(s)); };
  double s = s0;
  for (int it = 0; it < 30; ++it) {
    const double val = u(s);
    const double d = f.gradient(e.at(s)).dot(e.direction);
    if (d == 0) break;
    const double next = std::clamp(s - val / d, lo, hi);
    if (std::abs(next - s) < 1e-15 * e.length) return next;
    s = next;
  }
  double ua = u(lo);
  double a = lo, b = hi;
  if ((ua < 0) == (u(hi) < 0)) return s;
  for (int it = 0; it < 100 && b - a > 1e-15 * e.length; ++it) {
    const double m = 0.5 * (a + b);
    const double um = u(m);
    if ((um < 0) == (ua < 0)) {
      a = m;
      ua = um;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

struct TraceResult {
  std::vector<Point> points;
  Point end = Point::Zero();
  bool stalled = false;
};

TraceResult trace_level_set(const FieldView& view, const BoundaryZero& start,
                            const std::vector<BoundaryZero>& zeros, const AnalysisSettings& s) {
  const ScalarField& f = *view.field;
  const LabeledTriangle& t = view.triangle;
  const double diam = view.diameter();
  const double h0 = s.nodal_step * diam;
  const double u_tol = 1e-13 * view.scale;
  TraceResult out;
  out.points.push_back(start.point);
  const EdgeFrame e0 = edge_frame(t, start.edge);
  Vec2 g = f.gradient(start.point);
  if (g.norm() * diam < 1e-12 * view.scale) {
    out.stalled = true;
    out.end = start.point;
    return out;
  }
  Vec2 dir = perp(g).normalized();
  if (dir.dot(-e0.normal) < 0) dir = -dir;
  Point p = start.point;
  double h = h0;
  const int max_steps = static_cast<int>(20.0 * t.diameter() * 3 / h0) + 100;
  for (int step = 0; step < max_steps; ++step) {
    const Point pred = p + h * dir;
    Point q = pred;
    bool exited = t.boundary_distance(pred) < 0;
    bool ok = true;
    if (!exited) {
      for (int it = 0; it < 12; ++it) {
        const double val = f.value(q);
        const Vec2 gq = f.gradient(q);
        const double gg = gq.squaredNorm();
        if (gg == 0) {
          ok = false;
          break;
        }
        q -= val * gq / gg;
        if (t.boundary_distance(q) < 0) {
          exited = true;
          break;
        }
        if (std::abs(val) < u_tol) break;
      }
      if (ok && !exited && (std::abs(f.value(q)) > 1e-9 * view.scale || (q - p).norm() > 2 * h))
        ok = false;
    }
    if (exited) {
      // Boundary crossing on the segment p -> pred, then onto the zero of u on that edge.
      double a = 0, b = 1;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        if (t.boundary_distance(p + m * (pred - p)) >= 0)
          a = m;
        else
          b = m;
      }
      Point cross_pt = p + a * (pred - p);
      for (const BoundaryZero& z : zeros) {
        if (z.vertex >= 0 && (z.point - cross_pt).norm() <= 2 * h) {
          out.points.push_back(z.point);
          out.end = z.point;
          return out;
        }
      }
      const int e = edge_of(t, cross_pt);
      const EdgeFrame fe = edge_frame(t, e);
      const double s0 = arc_on_edge(fe, cross_pt);
      const double span = 2 * h;
      const double sz = edge_zero(f, fe, s0, std::max(0.0, s0 - span), std::min(fe.length, s0 + span));
      out.points.push_back(fe.at(sz));
      out.end = fe.at(sz);
      return out;
    }
    if (!ok) {
      h *= 0.5;
      if (h < s.nodal_min_step * diam) {
        out.stalled = true;
        out.end = p;
        return out;
      }
      continue;
    }
    Vec2 gq = f.gradient(q);
    Vec2 next_dir = perp(gq).normalized();
    if (next_dir.dot(dir) < 0) next_dir = -next_dir;
    dir = next_dir;
    p = q;
    out.points.push_back(p);
    h = std::min(h0, 2 * h);
  }
  out.stalled = true;
  out.end = p;
  return out;
}

}  // namespace

NodalArc nodal_arc(const FieldView& view, const AnalysisSettings& s) {
  const ScalarField& f = *view.field;
  const LabeledTriangle& t = view.triangle;
  const double diam = view.diameter();
  const BoundaryWalk walk(t);

  std::vector<BoundaryZero> zeros;
  for (int v = 0; v < 3; ++v) {
    if (std::abs(f.value(t.vertex(v))) < s.nodal_zero * view.scale) {
      BoundaryZero z;
      z.point = t.vertex(v);
      z.vertex = v;
      zeros.push_back(z);
    }
  }
  const int m = std::max(8, s.nodal_samples);
  std::vector<double> sigma(static_cast<std::size_t>(m)), val(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    sigma[j] = (j + 0.5) * walk.perimeter / m;
    val[j] = f.value(walk.at(sigma[j]));
  }
  for (int j = 0; j < m; ++j) {
    const int jn = (j + 1) % m;
    if ((val[j] < 0) == (val[jn] < 0)) continue;
    double a = sigma[j], b = jn == 0 ? sigma[0] + walk.perimeter : sigma[jn];
    double ua = val[j];
    auto u_at = [&](double x) { return f.value(walk.at(std::fmod(x, walk.perimeter))); };
    for (int it = 0; it < 100 && b - a > 1e-14 * walk.perimeter; ++it) {
      const double mid = 0.5 * (a + b);
      const double um = u_at(mid);
      if ((um < 0) == (ua < 0)) {
        a = mid;
        ua = um;
      } else {
        b = mid;
      }
    }
    const double at = std::fmod(0.5 * (a + b), walk.perimeter);
    const Point p = walk.at(at);
    const bool at_vertex = std::any_of(zeros.begin(), zeros.end(), [&](const BoundaryZero& z) {
      return z.vertex >= 0 && (z.point - p).norm() < 1e-4 * diam;
    });
    if (at_vertex) continue;
    BoundaryZero z;
    z.point = p;
    const auto [e, arc] = walk.locate(at);
    z.edge = e;
    z.arc_length = arc;
    zeros.push_back(z);
  }

  NodalArc out;
  out.boundary_zeros = static_cast<int>(zeros.size());
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (zeros[i].used || zeros[i].vertex >= 0) continue;
    zeros[i].used = true;
    TraceResult tr = trace_level_set(view, zeros[i], zeros, s);
    ++out.arc_count;
    out.stalled = out.stalled || tr.stalled;
    NodalEnd end;
    end.point = tr.end;
    std::size_t match = zeros.size();
    double best = 1e-3 * diam;
    for (std::size_t j = 0; j < zeros.size(); ++j) {
      if (zeros[j].used) continue;
      const double d = (zeros[j].point - tr.end).norm();
      if (d < best) {
        best = d;
        match = j;
      }
    }
    if (match < zeros.size()) {
      zeros[match].used = true;
      end.vertex = zeros[match].vertex;
      end.edge = zeros[match].edge;
      end.arc_length = zeros[match].arc_length;
    } else {
      end.edge = edge_of(t, tr.end);
      end.arc_length = arc_on_edge(edge_frame(t, end.edge), tr.end);
    }
    if (out.arc_count == 1) {
      out.points = std::move(tr.points);
      out.start.point = zeros[i].point;
      out.start.edge = zeros[i].edge;
      out.start.arc_length = zeros[i].arc_length;
      out.end = end;
    }
  }
  // Zeros at vertices that no traced arc reached pair up among themselves.
  const auto unused_vertices = std::count_if(zeros.begin(), zeros.end(), [](const BoundaryZero& z) {
    return !z.used && z.vertex >= 0;
  });
  out.arc_count += static_cast<int>((unused_vertices + 1) / 2);

  for (std::size_t i = 0; i < out.points.size(); ++i) {
    out.max_abs_u = std::max(out.max_abs_u, std::abs(f.value(out.points[i])) / view.scale);
    if (i > 0)
      out.max_step = std::max(out.max_step, (out.points[i] - out.points[i - 1]).norm() / diam);
  }
  return out;
}

ExtremumReport extremum_locus(const FieldView& view, const AnalysisSettings& s) {
  const ScalarField& f = *view.field;
  const LabeledTriangle& t = view.triangle;
  ExtremumReport r;
  std::array<double, 3> uv{};
  for (int v = 0; v < 3; ++v) uv[v] = f.value(t.vertex(v));
  r.max_vertex = static_cast<int>(std::max_element(uv.begin(), uv.end()) - uv.begin());
  r.min_vertex = static_cast<int>(std::min_element(uv.begin(), uv.end()) - uv.begin());
  const double vmax = uv[r.max_vertex], vmin = uv[r.min_vertex];

  double smax = -std::numeric_limits<double>::infinity();
  double smin = std::numeric_limits<double>::infinity();
  Point pmax = t.vertex(0), pmin = t.vertex(0);
  auto visit = [&](const Point& p) {
    const double u = f.value(p);
    if (u > smax) {
      smax = u;
      pmax = p;
    }
    if (u < smin) {
      smin = u;
      pmin = p;
    }
  };
  const int n = std::max(2, s.extremum_grid);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const int k = n - i - j;
      if (i == n || j == n || k == n) continue;  // the vertices themselves
      visit(t.from_barycentric(static_cast<double>(i) / n, static_cast<double>(j) / n,
                               static_cast<double>(k) / n));
    }
  }
  const int per_edge = std::max(1, s.extremum_boundary / 3);
  for (int e = 0; e < 3; ++e) {
    const EdgeFrame fe = edge_frame(t, e);
    for (int j = 0; j < per_edge; ++j) visit(fe.at(fe.length * (j + 0.5) / per_edge));
  }
  r.max_excess = (smax - vmax) / view.scale;
  r.min_excess = (vmin - smin) / view.scale;
  r.max_at_vertex = r.max_excess <= s.extremum_tol;
  r.min_at_vertex = r.min_excess <= s.extremum_tol;
  r.max = std::max(vmax, smax);
  r.min = std::min(vmin, smin);
  r.argmax = smax > vmax ? pmax : t.vertex(r.max_vertex);
  r.argmin = smin < vmin ? pmin : t.vertex(r.min_vertex);
  return r;
}

std::array<bool, 3> strict_vertex_extrema(const FieldView& view, const AnalysisSettings& s) {
  const LabeledTriangle& t = view.triangle;
  const BasisSpec spec = BasisSpec::for_triangle(t, 1);
  std::array<bool, 3> out{};
  for (int v = 0; v < 3; ++v) {
    const VertexBlock& b = spec.blocks[static_cast<std::size_t>(v)];
    const double r = std::min(s.ring_radius * view.diameter(), 0.5 * altitude(t, v));
    const double uv = view.field->value(t.vertex(v));
    bool all_below = true, all_above = true;
    const int m = std::max(4, s.ring_samples);
    for (int j = 0; j < m; ++j) {
      const double theta = b.beta * (j + 0.5) / m;
      const Point p = b.origin + b.frame() * Vec2(r * std::cos(theta), r * std::sin(theta));
      const double u = view.field->value(p);
      all_below = all_below && u < uv;
      all_above = all_above && u > uv;
    }
    out[v] = all_below || all_above;
  }
  return out;
}

namespace {

// c0 and, where the Bessel factor allows, c1 at two radii.
VertexCoefficientSummary vertex_summary(const FieldView& view, int v, const AnalysisSettings& s) {
  const LabeledTriangle& t = view.triangle;
  const double shortest = shortest_adjacent(t, v);
  const double cap = std::min(0.2 * shortest, 0.9 * altitude(t, v));
  const double floor = 1e-3 * shortest;
  VertexCoefficientSummary out;
  out.c0 = view.field->value(t.vertex(v));
  out.magnitude = std::abs(out.c0);
  if (cap < 2 * floor) return out;

  const VertexBlock block = BasisSpec::for_triangle(t, 1).blocks[static_cast<std::size_t>(v)];
  const double k = std::sqrt(view.mu);
  // Grow the radius until J_nu(k r) is comfortably above the field's error level.
  double r = std::min(s.probe_radius * shortest, cap);
  while (2 * r <= cap && block.nu <= specfun::kMaxOrder &&
         specfun::bessel_j(block.nu, k * r).value < 1e-4)
    r *= 2;
  auto extract = [&](double radius, int n_max) {
    return bessel_coefficients(view, v, n_max, radius, s.quadrature_nodes);
  };
  auto magnitude = [](const VertexCoefficients& c) {
    double m = std::abs(c.c[0]);
    if (c.c.size() > 1) m = std::max(m, std::abs(c.c[1]));
    return m;
  };
  for (int n_max : {1, 0}) {
    try {
      const VertexCoefficients first = extract(r, n_max);
      const double r2 = 2 * r <= cap ? 2 * r : 0.5 * r;
      const VertexCoefficients second = extract(r2, n_max);
      out.radius = r;
      if (n_max == 1) out.c1 = first.c[1];
      const double m1 = magnitude(first), m2 = magnitude(second);
      out.two_radius_gap = std::abs(m1 - m2) / std::max(m1, std::numeric_limits<double>::min());
      out.magnitude = std::min(m1, m2);
      return out;
    } catch (const CoefficientError&) {
      continue;
    }
  }
  return out;
}

}  // namespace

std::vector<CriticalPointReport> vertex_critical_points(const FieldView& view,
                                                        const AnalysisSettings& s) {
  const LabeledTriangle& t = view.triangle;
  const double diam = view.diameter();
  const double delta = s.vertex_exclusion * diam;
  const double r_min = s.vertex_model_floor * diam;
  const double k = std::sqrt(view.mu);
  std::vector<CriticalPointReport> out;
  for (int v = 0; v < 3; ++v) {
    const VertexCoefficientSummary c = vertex_summary(view, v, s);
    // u(v) indistinguishable from zero: the sign of c0 is noise.
    if (!c.c1 || std::abs(c.c0) < s.vertex_zero * view.scale) continue;
    const VertexBlock block = BasisSpec::for_triangle(t, 1).blocks[static_cast<std::size_t>(v)];
    if (block.nu > specfun::kMaxOrder) continue;
    const double nu = block.nu, c0 = c.c0, c1 = *c.c1;
    // theta = 0 runs along edge v, theta = beta along edge v + 2 (reversed);
    // cos(nu theta) is +1 and -1 there.
    for (const double side : {1.0, -1.0}) {
      auto radial = [&](double r) {
        return -c0 * specfun::bessel_j(1.0, k * r).value +
               side * c1 * specfun::bessel_j(nu, k * r).derivative;
      };
      const int grid = s.vertex_model_grid;
      const double span = std::log(delta / r_min);
      double prev_r = r_min, prev_g = radial(r_min);
      std::optional<std::pair<double, double>> bracket;
      for (int j = 1; j <= grid; ++j) {
        const double r = r_min * std::exp(span * j / grid);
        const double g = radial(r);
        if (g != 0 && prev_g != 0 && (g < 0) != (prev_g < 0)) bracket = {prev_r, r};
        prev_r = r;
        prev_g = g;
      }
      if (!bracket) continue;
      auto [a, b] = *bracket;
      double ga = radial(a);
      for (int it = 0; it < 400 && b - a > 1e-14 * b; ++it) {
        const double m = std::sqrt(a * b);
        const double gm = radial(m);
        if ((gm < 0) == (ga < 0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      const double r = std::sqrt(a * b);
      const int e = side > 0 ? v : (v + 2) % 3;
      const EdgeFrame frame = edge_frame(t, e);
      const double arc_s = side > 0 ? r : frame.length - r;
      const Point p = t.vertex(v) + r * (side > 0 ? frame.direction : Vec2(-frame.direction));

      // Edge-frame Hessian of the expansion: u_tt = u_rr and, with u_r = 0,
      // u_nn = u_thetatheta / r^2.
      const double x = k * r;
      const specfun::BesselEval j0 = specfun::bessel_j(0.0, x);
      const specfun::BesselEval jn = specfun::bessel_j(nu, x);
      const double jn_over_r2 = specfun::bessel_j_scaled(nu, r, k) * std::pow(r, nu - 2);
      const double j0_dd = -j0.derivative / x - j0.value;
      const double jn_dd = -jn.derivative / x - jn.value + nu * nu * jn_over_r2 / (k * k);
      CriticalPointReport rep;
      rep.location = p;
      rep.locus = Locus::edge;
      rep.edge = e;
      rep.arc_length = arc_s;
      rep.u = c0 * j0.value + side * c1 * jn.value;
      rep.grad_residual = std::abs(radial(r)) * k * diam / view.scale;
      rep.hessian_available = true;
      rep.hessian << k * k * (c0 * j0_dd + side * c1 * jn_dd), 0, 0,
          -side * c1 * nu * nu * jn_over_r2;
      rep.det_hessian = rep.hessian.determinant();
      rep.mixed_residual = 0;
      rep.near_vertex = true;
      rep.vertex = v;
      rep.vertex_distance = r;
      classify_critical_point(rep, view.mu, s.degeneracy);
      out.push_back(rep);
    }
  }
  return out;
}

HotSpotsVerdict hot_spots_verdict(const FieldView& view, const AnalysisSettings& s) {
  HotSpotsVerdict v;
  v.reports = boundary_critical_points(view, s);
  for (auto& r : interior_critical_points(view, s)) v.reports.push_back(r);
  for (auto& r : vertex_critical_points(view, s)) v.reports.push_back(r);
  v.crit_count = static_cast<int>(v.reports.size());
  v.extrema = extremum_locus(view, s);
  v.extremum_at_vertices = v.extrema.max_at_vertex && v.extrema.min_at_vertex;
  v.nodal = nodal_arc(view, s);
  v.nodal_arc_ok = v.nodal.arc_count == 1 && !v.nodal.stalled;
  v.strict_extrema = strict_vertex_extrema(view, s);

  v.coeff_ok = true;
  v.two_radius_ok = true;
  for (int i = 0; i < 3; ++i) {
    VertexCoefficientSummary& c = v.coefficients[static_cast<std::size_t>(i)];
    c = vertex_summary(view, i, s);
    if (!(c.magnitude > s.coeff_floor * view.scale)) v.coeff_ok = false;
    if (c.radius > 0 && c.two_radius_gap > 1e-5) v.two_radius_ok = false;
    if (std::abs(c.c0) < s.vertex_zero * view.scale) ++v.vertex_zero_count;
  }

  auto flag = [&](const std::string& m) {
    if (std::find(v.margins.begin(), v.margins.end(), m) == v.margins.end()) v.margins.push_back(m);
  };
  if (view.multiplicity_flag) flag("multiplicity");
  for (const auto& r : v.reports) {
    if (r.grad_residual > s.grad_tol) flag("grad residual");
    if (r.morse == Morse::degenerate || r.morse == Morse::unavailable) flag("degenerate hessian");
    if (r.locus == Locus::edge && r.mixed_residual > s.mixed_tol) flag("mixed term");
  }
  for (const auto& c : v.coefficients) {
    const double u = std::abs(c.c0) / view.scale;
    if (u >= s.vertex_zero && u < s.vertex_gap) flag("vertex gap");
  }
  if (!v.coeff_ok) flag("coefficient floor");
  if (!v.nodal_arc_ok) flag("nodal arc");
  if (!v.extremum_at_vertices) flag("extremum off vertices");

  if (!v.margins.empty()) {
    v.classification = Classification::ambiguous;
  } else if (v.crit_count == 0) {
    v.classification = Classification::nocrit;
  } else if (v.crit_count == 1 && v.reports[0].locus == Locus::edge &&
             v.reports[0].morse == Morse::index1) {
    v.classification = Classification::crit;
  } else {
    v.classification = Classification::ambiguous;
    flag("critical structure");
  }
  return v;
}

}  // namespace hotspots
