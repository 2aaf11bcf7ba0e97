#include "hotspots/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "hotspots/analysis.hpp"
#include "hotspots/specfun.hpp"
#include "hotspots/sweep.hpp"

namespace hotspots {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool near_isosceles(const Angles& a, double tol) {
  return std::abs(a[0] - a[1]) < tol || std::abs(a[1] - a[2]) < tol || std::abs(a[0] - a[2]) < tol;
}

struct Solved {
  LabeledTriangle triangle;
  std::optional<Eigenpair> ep;
  Certificate cert;
  std::optional<HotSpotsVerdict> verdict;
  std::string error;
};

struct Suite {
  explicit Suite(const RunConfig& c) : cfg(c) {}

  const RunConfig& cfg;
  std::optional<std::vector<Solved>> random50;
  std::optional<Eigenpair> right;

  const Eigenpair& right_isosceles() {
    if (!right) right = find_mu2(LabeledTriangle::right_isosceles(), cfg.solver);
    return *right;
  }

  const std::vector<Solved>& random_set() {
    if (random50) return *random50;
    random50.emplace();
    for (const auto& t : seeded_triangles(50, cfg.solver.seed, cfg.sweep_margin)) {
      Solved s{t, std::nullopt, {}, std::nullopt, {}};
      try {
        s.ep = find_mu2(t, cfg.solver);
        s.cert = residual_certificate(*s.ep);
        const EigenField f(*s.ep);
        s.verdict = hot_spots_verdict(FieldView::of(f), cfg.analysis);
      } catch (const std::exception& e) {
        s.error = e.what();
      }
      random50->push_back(std::move(s));
    }
    return *random50;
  }
};

// Point-to-segment distance.
double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Vec2 d = b - a;
  const double s = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + s * d)).norm();
}

double polyline_distance(const Point& p, const std::vector<Point>& line) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i)
    best = std::min(best, segment_distance(p, line[i], line[i + 1]));
  if (line.size() == 1) best = (p - line[0]).norm();
  return best;
}

CriterionResult c1_right_isosceles(Suite& suite) {
  CriterionResult r{1, "right isosceles exactness", false, {}, 0};
  const auto t0 = Clock::now();
  const Eigenpair ep = find_mu2(LabeledTriangle::right_isosceles(), suite.cfg.solver);
  const double runtime = seconds_since(t0);
  suite.right = ep;
  const double pi2 = kPi * kPi;
  const double mu_err = std::abs(ep.mu - pi2) / pi2;
  const EigenField f(ep);
  double uu = 0, gg = 0, ug = 0;
  const int n = 60;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const Point p(static_cast<double>(i) / n, static_cast<double>(j) / n);
      const double u = f.value(p), g = std::cos(kPi * p.x()) - std::cos(kPi * p.y());
      uu += u * u;
      gg += g * g;
      ug += u * g;
    }
  const double corr = ug / std::sqrt(uu * gg);
  r.pass = mu_err <= 1e-8 && corr >= 1 - 1e-8 && runtime < 5.0;
  r.detail = "mu rel err " + fmt("%.2e", mu_err) + ", 1 - correlation " + fmt("%.1e", 1 - corr) +
             ", solve " + fmt("%.2f", runtime) + " s";
  return r;
}

CriterionResult c2_scaling(Suite& suite) {
  CriterionResult r{2, "scaling covariance", true, {}, 0};
  double worst = 0;
  for (const auto& t : seeded_triangles(5, suite.cfg.solver.seed + 2, suite.cfg.sweep_margin)) {
    const double mu = find_mu2(t, suite.cfg.solver).mu;
    for (double s : {0.5, 2.0, 3.7}) {
      const double mus = find_mu2(t.scaled(s), suite.cfg.solver).mu;
      worst = std::max(worst, std::abs(mus * s * s - mu) / mu);
    }
  }
  r.pass = worst <= 1e-7;
  r.detail = "worst rel err " + fmt("%.2e", worst) + " over 5 triangles x 3 scales";
  return r;
}

CriterionResult c3_equilateral(Suite& suite) {
  CriterionResult r{3, "equilateral cross-check", false, {}, 0};
  const Eigenpair ep = find_mu2(from_angles(kPi / 3, kPi / 3), suite.cfg.solver);
  const double lame = 16 * kPi * kPi / 9;  // unit side
  const double err = std::abs(ep.mu - lame) / lame;
  r.pass = err <= 1e-6 && ep.multiplicity_flag;
  r.detail = "mu " + fmt("%.12f", ep.mu) + " vs " + fmt("%.12f", lame) + ", rel err " +
             fmt("%.2e", err) + ", multiplicity flag " + (ep.multiplicity_flag ? "raised" : "not raised");
  return r;
}

CriterionResult c4_fem(Suite& suite) {
  CriterionResult r{4, "FEM oracle agreement", true, {}, 0};
  double worst = 0;
  for (const auto& t : seeded_triangles(20, suite.cfg.solver.seed + 4, suite.cfg.sweep_margin)) {
    const double mps = find_mu2(t, suite.cfg.solver).mu;
    const double fem = fem_eigenvalue(t, 48).mu;
    worst = std::max(worst, std::abs(mps - fem) / mps);
  }
  r.pass = worst <= 0.03;
  r.detail = "worst |mu_MPS - mu_FEM| / mu = " + fmt("%.3e", worst) + " over 20 triangles";
  return r;
}

CriterionResult c5_critical_points(Suite& suite) {
  CriterionResult r{5, "critical point structure", true, {}, 0};
  int failures = 0, interior = 0, with_point = 0, uncertified = 0;
  double worst_grad = 0;
  for (const auto& s : suite.random_set()) {
    if (!s.verdict) {
      ++failures;
      continue;
    }
    if (!s.cert.certified) ++uncertified;
    const auto& reps = s.verdict->reports;
    if (reps.size() > 1) ++failures;
    if (!reps.empty()) ++with_point;
    for (const auto& p : reps) {
      worst_grad = std::max(worst_grad, p.grad_residual);
      if (p.locus != Locus::edge) ++interior;
      if (p.locus != Locus::edge || !(p.det_hessian < 0) || p.morse != Morse::index1 ||
          p.grad_residual > 1e-7)
        ++failures;
    }
  }
  // Detector completeness on a closed-form field.
  const PlantedSaddle planted;
  const LabeledTriangle pt = planted_triangle();
  const FieldView view(planted, pt, kPi * kPi, 2.0);
  const auto found = interior_critical_points(view, suite.cfg.analysis);
  const double planted_err = found.size() == 1 ? found[0].location.norm() : 1.0;
  const bool planted_ok = found.size() == 1 && planted_err <= 1e-8 && found[0].morse == Morse::index1;
  r.pass = failures == 0 && interior == 0 && uncertified == 0 && planted_ok;
  r.detail = std::to_string(with_point) + "/50 with one edge point, " + std::to_string(failures) +
             " violations, " + std::to_string(interior) + " interior, " +
             std::to_string(uncertified) + " uncertified, max grad residual " +
             fmt("%.1e", worst_grad) + "; planted saddle error " + fmt("%.1e", planted_err);
  return r;
}

CriterionResult c6_extrema(Suite& suite) {
  CriterionResult r{6, "extrema at vertices", true, {}, 0};
  int bad = 0, obtuse = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : suite.random_set()) {
    if (!s.verdict) {
      ++bad;
      continue;
    }
    const ExtremumReport& e = s.verdict->extrema;
    worst = std::max({worst, e.max_excess, e.min_excess});
    if (!(e.max_at_vertex && e.min_at_vertex)) ++bad;
    const ShapeClass shape = classify(s.triangle);
    if (shape.obtuse_vertex) {
      ++obtuse;
      if (e.max_vertex == *shape.obtuse_vertex || e.min_vertex == *shape.obtuse_vertex) ++bad;
    }
  }
  r.pass = bad == 0;
  r.detail = std::to_string(bad) + " failures over 50 (" + std::to_string(obtuse) +
             " obtuse), worst non-vertex excess " + fmt("%.1e", worst) + " x scale";
  return r;
}

CriterionResult c7_sweep(Suite& suite) {
  CriterionResult r{7, "moduli sweep", false, {}, 0};
  SweepSettings s = suite.cfg.sweep_settings();
  s.resolution = 24;
  const auto records = moduli_sweep(s);
  const double h = (kPi - 3 * s.margin) / s.resolution;
  int obtuse = 0, obtuse_crit = 0, acute = 0, acute_crit = 0, ambiguous = 0;
  for (const auto& rec : records) {
    const Angles a{rec.beta1, rec.beta2, kPi - rec.beta1 - rec.beta2};
    const double largest = std::max({a[0], a[1], a[2]});
    if (rec.verdict == Classification::ambiguous) ++ambiguous;
    if (largest > kPi / 2 + 1e-12) {
      ++obtuse;
      if (rec.verdict == Classification::crit) ++obtuse_crit;
      continue;
    }
    bool equi = true;
    for (double b : a) equi = equi && std::abs(b - kPi / 3) <= s.near_equilateral;
    if (equi || near_isosceles(a, 1.5 * h)) continue;
    ++acute;
    if (rec.verdict == Classification::crit) ++acute_crit;
  }
  const double frac = acute > 0 ? static_cast<double>(acute_crit) / acute : 0.0;
  r.pass = records.size() == 253 && obtuse_crit == 0 && frac >= 0.9;
  r.detail = std::to_string(records.size()) + " nodes; obtuse CRIT " + std::to_string(obtuse_crit) +
             "/" + std::to_string(obtuse) + "; acute CRIT " + std::to_string(acute_crit) + "/" +
             std::to_string(acute) + " (" + fmt("%.1f", 100 * frac) + "%); AMBIGUOUS " +
             std::to_string(ambiguous);
  return r;
}

CriterionResult c8_isosceles(Suite& suite) {
  CriterionResult r{8, "isosceles threshold", false, {}, 0};
  const SweepSettings s = suite.cfg.sweep_settings();
  const IsoscelesScan scan = isosceles_scan(0.6, 1.4, 16, s);
  const double thr_err = scan.threshold ? std::abs(*scan.threshold - kPi / 3) : 1.0;
  const IsoscelesSample odd = isosceles_sample(2 * kPi / 5, s);
  const IsoscelesSample even = isosceles_sample(kPi / 4, s);
  r.pass = scan.threshold && thr_err <= 0.01 && scan.monotone && std::abs(odd.u_apex) < 1e-4 &&
           odd.verdict == Classification::nocrit && even.verdict == Classification::crit &&
           even.crit && even.base_midpoint_distance <= 1e-4;
  r.detail = std::string("threshold ") + (scan.threshold ? fmt("%.5f", *scan.threshold) : "none") +
             " (|err| " + fmt("%.1e", thr_err) + ")" + (scan.monotone ? "" : " non-monotone") +
             "; apex 2pi/5 " + to_string(odd.verdict) + " |u(apex)| " + fmt("%.1e", std::abs(odd.u_apex)) +
             "; apex pi/4 " + to_string(even.verdict) + " midpoint offset " +
             fmt("%.1e", even.base_midpoint_distance) + " x diam";
  return r;
}

CriterionResult c9_coefficients(Suite& suite) {
  CriterionResult r{9, "vertex coefficients", true, {}, 0};
  int bad = 0;
  double weakest = std::numeric_limits<double>::infinity();
  for (const auto& s : suite.random_set()) {
    if (!s.verdict || !s.cert.certified) continue;
    if (!s.verdict->coeff_ok || s.verdict->vertex_zero_count > 1) ++bad;
    for (const auto& c : s.verdict->coefficients) weakest = std::min(weakest, c.magnitude / s.ep->scale);
  }
  // Closed-form values at the right isosceles triangle.
  const Eigenpair& ep = suite.right_isosceles();
  const EigenField f(ep);
  const FieldView view = FieldView::of(f);
  const double s = f.value(Point(0, 1)) / 2;
  const double r0 = 0.05;
  const VertexCoefficients v0 = bessel_coefficients(view, 0, 1, r0);
  const VertexCoefficients v1 = bessel_coefficients(view, 1, 0, r0);
  const double e1 = std::abs(v0.c[1] + 4 * s) / (4 * std::abs(s));
  const double e0 = std::abs(v1.c[0] + 2 * s) / (2 * std::abs(s));
  r.pass = bad == 0 && e1 <= 1e-6 && e0 <= 1e-6 && std::abs(v0.c[0]) <= 1e-6 * ep.scale;
  r.detail = std::to_string(bad) + " failing triangles, smallest max(|c0|,|c1|) " +
             fmt("%.2e", weakest) + " x scale; right isosceles c1(v1)/(-4s)-1 " + fmt("%.1e", e1) +
             ", c0(v2)/(-2s)-1 " + fmt("%.1e", e0);
  return r;
}

CriterionResult c10_nodal(Suite& suite) {
  CriterionResult r{10, "nodal arc", true, {}, 0};
  int bad = 0, certified = 0;
  for (const auto& s : suite.random_set()) {
    if (!s.verdict || !s.cert.certified) continue;
    ++certified;
    if (!s.verdict->nodal_arc_ok || s.verdict->nodal.max_abs_u > 1e-6) ++bad;
  }
  const Eigenpair& ep = suite.right_isosceles();
  const EigenField f(ep);
  const NodalArc arc = nodal_arc(FieldView::of(f), suite.cfg.analysis);
  const Point a(0, 0), b(0.5, 0.5);
  double haus = 0;
  for (const Point& p : arc.points) haus = std::max(haus, segment_distance(p, a, b));
  for (int i = 0; i <= 200; ++i) haus = std::max(haus, polyline_distance(a + (b - a) * (i / 200.0), arc.points));
  r.pass = bad == 0 && arc.arc_count == 1 && haus <= 1e-6;
  r.detail = std::to_string(certified - bad) + "/" + std::to_string(certified) +
             " certified triangles with one arc; right isosceles Hausdorff to the diagonal " +
             fmt("%.1e", haus);
  return r;
}

CriterionResult c11_continuation(Suite& suite) {
  CriterionResult r{11, "continuation and trajectory", false, {}, 0};
  ContinuationSettings s = suite.cfg.continuation_settings();
  s.steps = 100;
  const auto path = continuation(from_angles(0.9, 0.9), s);
  double jump = 0;
  bool aligned = true;
  for (std::size_t i = 1; i < path.size(); ++i) {
    jump = std::max(jump, std::abs(path[i].eigenpair.mu - path[i - 1].eigenpair.mu) /
                              path[i - 1].eigenpair.mu);
    aligned = aligned && path[i].aligned;
  }
  const EigenField end(path.back().eigenpair);
  double uu = 0, gg = 0, ug = 0;
  const int n = 60;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const Point p(static_cast<double>(i) / n, static_cast<double>(j) / n);
      const double u = end.value(p), g = std::cos(kPi * p.x()) - std::cos(kPi * p.y());
      uu += u * u;
      gg += g * g;
      ug += u * g;
    }
  const double corr = std::abs(ug) / std::sqrt(uu * gg);
  const TrajectoryReport tr = crit_trajectory(path);
  const bool vanish_ok = !tr.disappears || tr.last_min_vertex_u < 0.05;
  r.pass = jump < 0.05 && corr >= 1 - 1e-6 && vanish_ok && aligned;
  r.detail = "max mu jump " + fmt("%.2e", jump) + ", endpoint 1 - correlation " + fmt("%.1e", 1 - corr) +
             (aligned ? "" : ", alignment flagged") + "; critical point present at " +
             std::to_string(tr.points.size()) + "/" + std::to_string(path.size()) + " samples" +
             (tr.disappears ? ", last at t=" + fmt("%.2f", *tr.last_t) + " with min |u(v)|/scale " +
                                  fmt("%.3f", tr.last_min_vertex_u)
                            : "");
  return r;
}

CriterionResult c12_kernels(Suite& suite) {
  CriterionResult r{12, "numerical kernels", false, {}, 0};
  const Eigenpair ep = find_mu2(from_angles(1.0, 1.2), suite.cfg.solver);
  const EigenField f(ep);
  const LabeledTriangle& t = ep.triangle;
  const double diam = t.diameter(), k = std::sqrt(ep.mu);

  const auto pts = interior_sample(t, 400, suite.cfg.solver.seed + 12);
  double grad_err = 0;
  int used = 0;
  const double h = 1e-5 * diam;
  for (const Point& p : pts) {
    if (used == 50) break;
    if (t.boundary_distance(p) < 2e-2 * diam) continue;
    const Vec2 g = f.gradient(p);
    const Vec2 fd((f.value(p + Vec2(h, 0)) - f.value(p - Vec2(h, 0))) / (2 * h),
                  (f.value(p + Vec2(0, h)) - f.value(p - Vec2(0, h))) / (2 * h));
    grad_err = std::max(grad_err, (g - fd).norm() / std::max(g.norm(), 0.1 * k * ep.scale));
    ++used;
  }
  double trace_err = 0;
  int traced = 0;
  for (const Point& p : pts) {
    if (traced == 100) break;
    if (t.boundary_distance(p) < 1e-2 * diam) continue;
    const FieldSample s = f.sample(p);
    trace_err = std::max(trace_err, std::abs(s.hessian.trace() + ep.mu * s.u) / ep.scale);
    ++traced;
  }
  double rec_err = 0;
  for (double nu : {1.0, 1.5, 2.25, 3.7, 8.0, 20.5, 60.0, 150.0})
    for (double x : {0.05, 0.7, 3.0, 9.5, 17.0, 33.0, 58.0}) {
      const double a = specfun::bessel_j(nu - 1, x).value, b = specfun::bessel_j(nu + 1, x).value;
      const double c = 2 * nu / x * specfun::bessel_j(nu, x).value;
      const double size = std::max({std::abs(a), std::abs(b), std::abs(c)});
      if (size < 1e-280) continue;
      rec_err = std::max(rec_err, std::abs(a + b - c) / size);
    }
  double gap = 0;
  const EigenField rf(suite.right_isosceles());
  for (const EigenField* field : {&f, &rf}) {
    const FieldView view = FieldView::of(*field);
    for (int v = 0; v < 3; ++v) {
      const double shortest = std::min(view.triangle.edge_length(v), view.triangle.edge_length((v + 2) % 3));
      const double r1 = suite.cfg.analysis.probe_radius * shortest;
      const VertexCoefficients a = bessel_coefficients(view, v, 1, r1);
      const VertexCoefficients b = bessel_coefficients(view, v, 1, 2 * r1);
      const double ma = std::max(std::abs(a.c[0]), std::abs(a.c[1]));
      const double mb = std::max(std::abs(b.c[0]), std::abs(b.c[1]));
      gap = std::max(gap, std::abs(ma - mb) / ma);
    }
  }
  r.pass = grad_err <= 1e-6 && trace_err <= 1e-6 && rec_err <= 1e-9 && gap <= 1e-5;
  r.detail = "gradient vs differences " + fmt("%.1e", grad_err) + ", |tr H + mu u|/scale " +
             fmt("%.1e", trace_err) + ", Bessel recurrence " + fmt("%.1e", rec_err) +
             ", two-radius gap " + fmt("%.1e", gap);
  return r;
}

}  // namespace

std::vector<LabeledTriangle> seeded_triangles(int count, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LabeledTriangle> out;
  while (static_cast<int>(out.size()) < count) {
    const double b1 = kPi * unit(rng), b2 = kPi * unit(rng);
    if (b1 <= margin || b2 <= margin || kPi - b1 - b2 <= margin) continue;
    const double angle = 2 * kPi * unit(rng);
    const Vec2 shift(unit(rng) - 0.5, unit(rng) - 0.5);
    const double scale = 0.5 + 1.5 * unit(rng);
    out.push_back(from_angles(b1, b2).scaled(scale).moved(angle, shift));
  }
  return out;
}

FieldSample PlantedSaddle::sample(const Point& p) const {
  FieldSample s;
  s.point = p;
  const double cx = std::cos(kPi * p.x()), cy = std::cos(kPi * p.y());
  s.u = cx - cy;
  s.grad = Vec2(-kPi * std::sin(kPi * p.x()), kPi * std::sin(kPi * p.y()));
  s.hessian << -kPi * kPi * cx, 0, 0, kPi * kPi * cy;
  return s;
}

LabeledTriangle planted_triangle() { return {Point(-0.8, -0.6), Point(0.9, -0.5), Point(0.1, 0.9)}; }

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const std::vector<int>& which,
                                            const std::function<void(const CriterionResult&)>& report) {
  using Runner = CriterionResult (*)(Suite&);
  static constexpr std::array<Runner, 12> runners = {
      c1_right_isosceles, c2_scaling, c3_equilateral, c4_fem,          c5_critical_points, c6_extrema,
      c7_sweep,           c8_isosceles, c9_coefficients, c10_nodal, c11_continuation,   c12_kernels};
  static constexpr std::array<const char*, 12> names = {
      "right isosceles exactness", "scaling covariance",       "equilateral cross-check",
      "FEM oracle agreement",      "critical point structure", "extrema at vertices",
      "moduli sweep",              "isosceles threshold",      "vertex coefficients",
      "nodal arc",                 "continuation and trajectory", "numerical kernels"};
  Suite suite(cfg);
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 12; ++id) {
    if (!which.empty() && std::find(which.begin(), which.end(), id) == which.end()) continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = runners[static_cast<std::size_t>(id - 1)](suite);
    } catch (const std::exception& e) {
      r = CriterionResult{id, names[static_cast<std::size_t>(id - 1)], false,
                          std::string("error: ") + e.what(), 0};
    }
    r.seconds = seconds_since(t0);
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << "): " << r.detail
    << " [" << fmt("%.1f", r.seconds) << " s]";
  return s.str();
}

}  // namespace hotspots
