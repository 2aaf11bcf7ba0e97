#include "hotspots/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "hotspots/field.hpp"

namespace hotspots {

namespace {

constexpr double kPi = std::numbers::pi;

int worker_count(int requested, std::size_t jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return std::min<int>(n, static_cast<int>(std::max<std::size_t>(jobs, 1)));
}

template <class Job>
void run_pool(std::size_t jobs, int workers, Job&& job) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) job(i);
  };
  const int n = worker_count(workers, jobs);
  if (n == 1) {
    loop();
    return;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < n; ++w) pool.emplace_back(loop);
}

double nearest_vertex(const LabeledTriangle& t, const Point& p, int* which = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double d = (t.vertex(i) - p).norm();
    if (d < best) {
      best = d;
      if (which) *which = i;
    }
  }
  return best;
}

bool near_equilateral(const LabeledTriangle& t, double tol) {
  const Angles a = angles(t);
  for (int i = 0; i < 3; ++i)
    if (std::abs(a[i] - kPi / 3) > tol) return false;
  return true;
}

}  // namespace

std::vector<std::pair<double, double>> sweep_nodes(int resolution, double margin) {
  if (resolution < 3) throw std::invalid_argument("sweep resolution must be at least 3");
  if (!(margin >= 0 && 3 * margin < kPi)) throw std::invalid_argument("sweep margin out of range");
  const double h = (kPi - 3 * margin) / resolution;
  std::vector<std::pair<double, double>> nodes;
  for (int i = 1; i <= resolution - 2; ++i)
    for (int j = 1; i + j <= resolution - 1; ++j)
      nodes.emplace_back(margin + i * h, margin + j * h);
  return nodes;
}

SweepRecord classify_triangle(const LabeledTriangle& t, double beta1, double beta2,
                              const SweepSettings& settings) {
  SweepRecord rec;
  rec.beta1 = beta1;
  rec.beta2 = beta2;
  const ShapeClass shape = classify(t);
  if (shape.kind == ShapeKind::obtuse) rec.flags.push_back("obtuse");
  if (shape.kind == ShapeKind::right) rec.flags.push_back("right");
  if (shape.is_isosceles) rec.flags.push_back("isosceles");
  const bool equi = near_equilateral(t, settings.near_equilateral);
  if (equi) rec.flags.push_back("near equilateral");
  try {
    const Eigenpair ep = find_mu2(t, settings.solver);
    rec.mu2 = ep.mu;
    rec.sigma = ep.sigma;
    const Certificate cert = residual_certificate(ep);
    rec.normal_residual = cert.normal_residual;
    rec.helmholtz_residual = cert.helmholtz_residual;
    const EigenField field(ep);
    for (int i = 0; i < 3; ++i)
      rec.u_vertex[static_cast<std::size_t>(i)] = field.value(t.vertex(i)) / ep.scale;
    if (ep.multiplicity_flag) rec.flags.push_back("multiplicity");
    if (!cert.certified) {
      rec.flags.push_back("uncertified");
      return rec;
    }
    if (equi) return rec;
    const HotSpotsVerdict v = hot_spots_verdict(FieldView::of(field), settings.analysis);
    for (int i = 0; i < 3; ++i)
      rec.c1[static_cast<std::size_t>(i)] = v.coefficients[static_cast<std::size_t>(i)].c1;
    rec.verdict = v.classification;
    if (!v.reports.empty()) rec.crit = v.reports.front().location;
    for (const auto& m : v.margins) rec.flags.push_back("margin: " + m);
  } catch (const std::exception& e) {
    rec.verdict = Classification::ambiguous;
    rec.flags.push_back(std::string("error: ") + e.what());
  }
  return rec;
}

std::vector<SweepRecord> moduli_sweep(const SweepSettings& settings) {
  const auto nodes =
      settings.nodes.empty() ? sweep_nodes(settings.resolution, settings.margin) : settings.nodes;
  std::vector<SweepRecord> out(nodes.size());
  run_pool(nodes.size(), settings.workers, [&](std::size_t i) {
    const auto [b1, b2] = nodes[i];
    out[i] = classify_triangle(from_angles(b1, b2), b1, b2, settings);
  });
  return out;
}

std::vector<Eigen::Vector3d> reference_barycentric(int count) {
  // R2 sequence folded into the simplex, kept off the boundary.
  constexpr double g = 1.32471795724474602596;
  const double a1 = 1 / g, a2 = 1 / (g * g);
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double x = std::fmod(0.5 + a1 * (i + 1), 1.0);
    double y = std::fmod(0.5 + a2 * (i + 1), 1.0);
    if (x + y > 1) {
      x = 1 - x;
      y = 1 - y;
    }
    Eigen::Vector3d l(x, y, 1 - x - y);
    l = 0.02 / 3 + 0.98 * l.array();
    pts.push_back(l);
  }
  return pts;
}

namespace {

Eigen::VectorXd reference_values(const Eigenpair& ep, const std::vector<Eigen::Vector3d>& ref) {
  const EigenField f(ep);
  Eigen::VectorXd v(static_cast<Eigen::Index>(ref.size()));
  for (std::size_t i = 0; i < ref.size(); ++i)
    v[static_cast<Eigen::Index>(i)] =
        f.value(ep.triangle.from_barycentric(ref[i][0], ref[i][1], ref[i][2]));
  return v;
}

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return 0;
  return a.dot(b) / (na * nb);
}

Eigenpair warm_solve(const LabeledTriangle& t, double mu_prev, const ContinuationSettings& s) {
  try {
    return find_mu2(t, s.solver, MuWindow{(1 - s.window) * mu_prev, (1 + s.window) * mu_prev});
  } catch (const NoDipFound&) {
    return find_mu2(t, s.solver);
  }
}

void fill_record(PathRecord& rec, const ContinuationSettings& s) {
  const Eigenpair& ep = rec.eigenpair;
  const EigenField field(ep);
  const LabeledTriangle& t = ep.triangle;
  rec.min_vertex_u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double u = std::abs(field.value(t.vertex(i))) / ep.scale;
    if (u < rec.min_vertex_u) {
      rec.min_vertex_u = u;
      rec.min_vertex = i;
    }
  }
  try {
    const HotSpotsVerdict v = hot_spots_verdict(FieldView::of(field), s.analysis);
    rec.verdict = v.classification;
    rec.crit_count = v.crit_count;
    if (!v.reports.empty()) rec.crit = v.reports.front().location;
    const ShapeClass shape = classify(t);
    if (shape.obtuse_vertex)
      rec.c1_obtuse = v.coefficients[static_cast<std::size_t>(*shape.obtuse_vertex)].c1;
  } catch (const std::exception&) {
    rec.verdict = Classification::ambiguous;
  }
}

}  // namespace

std::vector<PathRecord> continuation(const LabeledTriangle& t0, const ContinuationSettings& s) {
  return continuation(find_mu2(t0, s.solver), s);
}

std::vector<PathRecord> continuation(const Eigenpair& start, const ContinuationSettings& s) {
  if (s.steps < 1) throw std::invalid_argument("continuation needs at least one step");
  const LabeledTriangle t0 = start.triangle;
  const auto ref = reference_barycentric(100);
  std::vector<PathRecord> path;
  path.reserve(static_cast<std::size_t>(s.steps) + 1);

  path.emplace_back(0.0, start);
  Eigenpair* prev_ep = &path.back().eigenpair;
  Eigen::VectorXd prev_vals = reference_values(*prev_ep, ref);

  for (int k = 1; k <= s.steps; ++k) {
    const double tk = static_cast<double>(k) / s.steps;
    Eigenpair ep = warm_solve(straight_line_path(t0, tk), prev_ep->mu, s);
    Eigen::VectorXd vals = reference_values(ep, ref);
    double corr = correlation(prev_vals, vals);
    if (std::abs(corr) < s.min_alignment) {
      // Bisect once and align through the midpoint.
      const double tm = (static_cast<double>(k) - 0.5) / s.steps;
      Eigenpair mid = warm_solve(straight_line_path(t0, tm), prev_ep->mu, s);
      Eigen::VectorXd mvals = reference_values(mid, ref);
      const double c1 = correlation(prev_vals, mvals);
      if (c1 < 0) mvals = -mvals;
      const double c2 = correlation(mvals, vals);
      corr = std::copysign(std::min(std::abs(c1), std::abs(c2)), c2);
    }
    if (corr < 0) {
      ep.negate();
      vals = -vals;
      corr = -corr;
    }
    path.emplace_back(tk, std::move(ep));
    path.back().alignment = corr;
    path.back().aligned = corr >= s.min_alignment;
    prev_ep = &path.back().eigenpair;
    prev_vals = std::move(vals);
  }

  run_pool(path.size(), 0, [&](std::size_t i) { fill_record(path[i], s); });
  return path;
}

TrajectoryReport crit_trajectory(const std::vector<PathRecord>& path) {
  TrajectoryReport rep;
  std::optional<Point> prev;
  double prev_t = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const PathRecord& r = path[i];
    const double diam = r.eigenpair.triangle.diameter();
    if (r.crit) {
      if (prev) {
        const double step = r.t - prev_t;
        const double d = (*r.crit - *prev).norm();
        rep.max_displacement = std::max(rep.max_displacement, d / diam);
        if (d > 10 * step * diam) rep.continuous = false;
      } else if (!rep.points.empty()) {
        rep.continuous = false;  // reappeared after vanishing
      }
      if (r.crit_count > 1) rep.ambiguous_link = true;
      rep.points.emplace_back(r.t, *r.crit);
      prev = r.crit;
      prev_t = r.t;
      rep.last_t = r.t;
      int v = -1;
      rep.last_vertex_distance = nearest_vertex(r.eigenpair.triangle, *r.crit, &v) / diam;
      rep.last_vertex = v;
      const EigenField f(r.eigenpair);
      rep.last_vertex_u = std::abs(f.value(r.eigenpair.triangle.vertex(v))) / r.eigenpair.scale;
      rep.last_min_vertex_u = r.min_vertex_u;
    } else {
      prev.reset();
    }
  }
  rep.disappears = !rep.points.empty() && !path.empty() && !path.back().crit;
  return rep;
}

LabeledTriangle isosceles(double apex) {
  if (!(apex > 0 && apex < kPi)) throw GeometryError("apex angle must lie in (0, pi)");
  const double base = (kPi - apex) / 2;
  return from_angles(base, base);
}

IsoscelesSample isosceles_sample(double apex, const SweepSettings& settings) {
  IsoscelesSample s;
  s.apex = apex;
  const LabeledTriangle t = isosceles(apex);
  try {
    const Eigenpair ep = find_mu2(t, settings.solver);
    const EigenField field(ep);
    s.u_apex = field.value(t.vertex(2)) / ep.scale;
    const HotSpotsVerdict v = hot_spots_verdict(FieldView::of(field), settings.analysis);
    s.verdict = v.classification;
    if (!v.reports.empty()) {
      s.crit = v.reports.front().location;
      const Point mid = 0.5 * (t.vertex(0) + t.vertex(1));
      s.base_midpoint_distance = (*s.crit - mid).norm() / t.diameter();
    }
  } catch (const std::exception&) {
    s.verdict = Classification::ambiguous;
  }
  return s;
}

IsoscelesScan isosceles_scan(double lo, double hi, int steps, const SweepSettings& settings) {
  if (!(lo < hi) || steps < 1) throw std::invalid_argument("isosceles scan needs lo < hi and steps >= 1");
  IsoscelesScan scan;
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(lo + (hi - lo) * i / steps);
  scan.samples.resize(grid.size());
  run_pool(grid.size(), settings.workers,
           [&](std::size_t i) { scan.samples[i] = isosceles_sample(grid[i], settings); });

  // CRIT below the threshold, NOCRIT above.
  bool seen_nocrit = false;
  for (const auto& s : scan.samples) {
    if (s.verdict == Classification::nocrit) seen_nocrit = true;
    if (s.verdict == Classification::crit && seen_nocrit) scan.monotone = false;
  }
  std::optional<std::size_t> last_crit;
  for (std::size_t i = 0; i + 1 < scan.samples.size(); ++i)
    if (scan.samples[i].verdict == Classification::crit &&
        scan.samples[i + 1].verdict == Classification::nocrit)
      last_crit = i;
  if (!last_crit) return scan;

  double a = scan.samples[*last_crit].apex, b = scan.samples[*last_crit + 1].apex;
  while (b - a > 1e-3) {
    const double m = 0.5 * (a + b);
    IsoscelesSample s = isosceles_sample(m, settings);
    const Classification c = s.verdict;
    scan.samples.push_back(std::move(s));
    if (c == Classification::crit) {
      a = m;
    } else if (c == Classification::nocrit) {
      b = m;
    } else {
      break;
    }
  }
  std::sort(scan.samples.begin(), scan.samples.end(),
            [](const IsoscelesSample& x, const IsoscelesSample& y) { return x.apex < y.apex; });
  if (b - a <= 1e-3) scan.threshold = 0.5 * (a + b);
  return scan;
}

}  // namespace hotspots
