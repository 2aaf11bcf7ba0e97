#include "hotspots/svg.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hotspots {

namespace {

Point crossing(const Point& p, const Point& q, double fp, double fq, double level) {
  const double s = (level - fp) / (fq - fp);
  return p + s * (q - p);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '-' && !out.empty() && out.back() == '-') {
      out += ' ';  // "--" is not allowed inside comments
    }
    out += ch;
  }
  return out;
}

}  // namespace

std::vector<Segment> marching_squares(const Eigen::MatrixXd& values, double x0, double y0,
                                      double dx, double dy, double level) {
  std::vector<Segment> out;
  for (Eigen::Index i = 0; i + 1 < values.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < values.cols(); ++j) {
      // Corners counter-clockwise from the lower left.
      const std::array<double, 4> f = {values(i, j), values(i + 1, j), values(i + 1, j + 1),
                                       values(i, j + 1)};
      if (std::isnan(f[0]) || std::isnan(f[1]) || std::isnan(f[2]) || std::isnan(f[3])) continue;
      const double x = x0 + static_cast<double>(i) * dx, y = y0 + static_cast<double>(j) * dy;
      const std::array<Point, 4> p = {Point(x, y), Point(x + dx, y), Point(x + dx, y + dy),
                                      Point(x, y + dy)};
      int code = 0;
      for (int c = 0; c < 4; ++c)
        if (f[static_cast<std::size_t>(c)] > level) code |= 1 << c;
      if (code == 0 || code == 15) continue;
      auto edge = [&](int e) {
        const auto a = static_cast<std::size_t>(e), b = static_cast<std::size_t>((e + 1) % 4);
        return crossing(p[a], p[b], f[a], f[b], level);
      };
      // Edge e joins corner e and corner e + 1.
      std::vector<int> crossed;
      for (int e = 0; e < 4; ++e) {
        const bool a = code & (1 << e), b = code & (1 << ((e + 1) % 4));
        if (a != b) crossed.push_back(e);
      }
      if (crossed.size() == 2) {
        out.push_back({edge(crossed[0]), edge(crossed[1])});
      } else if (crossed.size() == 4) {
        // Saddle cell: decide by the centre value.
        const double centre = 0.25 * (f[0] + f[1] + f[2] + f[3]);
        const bool c0_high = code & 1;
        if ((centre > level) == c0_high) {
          out.push_back({edge(0), edge(1)});
          out.push_back({edge(2), edge(3)});
        } else {
          out.push_back({edge(3), edge(0)});
          out.push_back({edge(1), edge(2)});
        }
      }
    }
  }
  return out;
}

std::string contour_svg(const ScalarField& field, const LabeledTriangle& t, double scale,
                        const HotSpotsVerdict* verdict, const std::string& header,
                        const ContourOptions& options) {
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const Point& v : t.vertices()) {
    xmin = std::min(xmin, v.x());
    xmax = std::max(xmax, v.x());
    ymin = std::min(ymin, v.y());
    ymax = std::max(ymax, v.y());
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double pad = 0.05 * span;
  const int n = std::max(options.grid, 8);
  const double dx = (xmax - xmin) / n, dy = (ymax - ymin) / n;
  Eigen::MatrixXd values(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const Point p(xmin + i * dx, ymin + j * dy);
      values(i, j) = t.contains(p, 1e-12 * span) ? field.value(p) / scale
                                                  : std::numeric_limits<double>::quiet_NaN();
    }
  }

  const double w = options.width;
  const double px = w / (span + 2 * pad);
  const double height = (ymax - ymin + 2 * pad) * px;
  auto X = [&](const Point& p) { return (p.x() - xmin + pad) * px; };
  auto Y = [&](const Point& p) { return height - (p.y() - ymin + pad) * px; };

  std::ostringstream s;
  s.precision(6);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- " << escape(header) << " -->\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << w << ' ' << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (const Point& v : t.vertices()) s << X(v) << ',' << Y(v) << ' ';
  s << "\"/>\n";

  const int levels = std::max(options.levels, 1);
  for (int l = 1; l < levels; ++l) {
    const double level = -1.0 + 2.0 * l / levels;
    if (std::abs(level) < 1e-12) continue;
    const auto segs = marching_squares(values, xmin, ymin, dx, dy, level);
    if (segs.empty()) continue;
    s << "<path fill=\"none\" stroke=\"" << (level > 0 ? "#c0392b" : "#2e86c1")
      << "\" stroke-width=\"0.8\" d=\"";
    for (const auto& sg : segs) s << 'M' << X(sg.a) << ' ' << Y(sg.a) << 'L' << X(sg.b) << ' ' << Y(sg.b);
    s << "\"/>\n";
  }
  if (verdict && !verdict->nodal.points.empty()) {
    s << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (const Point& p : verdict->nodal.points) s << X(p) << ',' << Y(p) << ' ';
    s << "\"/>\n";
  } else {
    const auto segs = marching_squares(values, xmin, ymin, dx, dy, 0.0);
    s << "<path fill=\"none\" stroke=\"black\" stroke-width=\"2\" d=\"";
    for (const auto& sg : segs) s << 'M' << X(sg.a) << ' ' << Y(sg.a) << 'L' << X(sg.b) << ' ' << Y(sg.b);
    s << "\"/>\n";
  }
  if (verdict) {
    for (const auto& r : verdict->reports)
      s << "<circle cx=\"" << X(r.location) << "\" cy=\"" << Y(r.location)
        << "\" r=\"5\" fill=\"#27ae60\" stroke=\"black\"/>\n";
    s << "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"13\">"
      << to_string(verdict->classification) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string moduli_svg(const std::vector<SweepRecord>& records, int resolution, double margin,
                       const std::string& header, int width) {
  constexpr double pi = std::numbers::pi;
  const double h = (pi - 3 * margin) / std::max(resolution, 1);
  const double pad = 0.08 * pi;
  const double px = width / (pi + 2 * pad);
  auto X = [&](double b1) { return (b1 + pad) * px; };
  auto Y = [&](double b2) { return width - (b2 + pad) * px; };

  std::ostringstream s;
  s.precision(6);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- " << escape(header) << " -->\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << width
    << "\" viewBox=\"0 0 " << width << ' ' << width << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& r : records) {
    const char* colour = r.verdict == Classification::crit     ? "#e67e22"
                         : r.verdict == Classification::nocrit ? "#5dade2"
                                                               : "#bdc3c7";
    s << "<rect x=\"" << X(r.beta1 - h / 2) << "\" y=\"" << Y(r.beta2 + h / 2) << "\" width=\""
      << h * px << "\" height=\"" << h * px << "\" fill=\"" << colour << "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }
  // Simplex outline, right-angle loci and isosceles loci.
  s << "<polygon fill=\"none\" stroke=\"black\" points=\"" << X(0) << ',' << Y(0) << ' ' << X(pi) << ','
    << Y(0) << ' ' << X(0) << ',' << Y(pi) << "\"/>\n";
  auto line = [&](double a1, double a2, double b1, double b2, const char* dash) {
    s << "<line x1=\"" << X(a1) << "\" y1=\"" << Y(a2) << "\" x2=\"" << X(b1) << "\" y2=\"" << Y(b2)
      << "\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"" << dash << "\"/>\n";
  };
  line(pi / 2, 0, pi / 2, pi / 2, "6 3");
  line(0, pi / 2, pi / 2, pi / 2, "6 3");
  line(pi / 2, 0, 0, pi / 2, "6 3");
  line(0, 0, pi / 2, pi / 2, "2 3");
  line(0, pi, pi / 3, pi / 3, "2 3");
  line(pi, 0, pi / 3, pi / 3, "2 3");
  s << "<text x=\"" << X(pi / 2) << "\" y=\"" << Y(-0.05 * pi)
    << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">beta1</text>\n";
  s << "<text x=\"" << X(-0.05 * pi) << "\" y=\"" << Y(pi / 2)
    << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">beta2</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace hotspots
