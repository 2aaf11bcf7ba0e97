#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "hotspots/config.hpp"
#include "hotspots/io.hpp"
#include "hotspots/svg.hpp"

using namespace hotspots;
constexpr double pi = std::numbers::pi;

namespace {

const Eigenpair& pair() {
  static const Eigenpair ep = find_mu2(from_angles(0.8, 1.2));
  return ep;
}

}  // namespace

TEST_CASE("flat config with sections and comments") {
  const auto kv = parse_flat_config(
      "# top\nsolver.terms = 14\n[analysis]\ngrad_tol = 2e-7  # inline\n\n[sweep]\nresolution=30\n");
  CHECK(kv.at("solver.terms") == "14");
  CHECK(kv.at("analysis.grad_tol") == "2e-7");
  CHECK(kv.at("sweep.resolution") == "30");
  CHECK_THROWS_AS(parse_flat_config("no equals sign\n"), ConfigError);
}

TEST_CASE("config keys round trip through text") {
  RunConfig a;
  a.set("solver.terms", "16");
  a.set("solver.image_blocks", "false");
  a.set("analysis.grad_tol", "3e-7");
  a.set("path.steps", "60");
  RunConfig b;
  for (const auto& [k, v] : parse_flat_config(a.to_text())) b.set(k, v);
  CHECK(b.to_text() == a.to_text());
  CHECK(b.hash() == a.hash());
  CHECK(b.solver.terms == 16);
  CHECK_FALSE(b.solver.image_blocks);
}

TEST_CASE("bad keys and values are rejected") {
  RunConfig c;
  CHECK_THROWS_AS(c.set("solver.nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(c.set("solver.terms", "twelve"), ConfigError);
  CHECK_THROWS_AS(c.set("solver.terms", "12x"), ConfigError);
  CHECK_THROWS_AS(c.set("solver.image_blocks", "maybe"), ConfigError);
  c.set("solver.sigma_tol", "-1");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  RunConfig d;
  d.set("sweep.margin", "0.01");
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("hash tracks result-affecting keys only") {
  RunConfig a, b;
  b.set("sweep.workers", "7");
  b.set("output.dir", "/tmp/elsewhere");
  CHECK(a.hash() == b.hash());
  b.set("solver.seed", "99");
  CHECK(a.hash() != b.hash());
  CHECK(a.hash_hex().size() == 16u);
  CHECK(output_header(a).find(a.hash_hex()) != std::string::npos);
}

TEST_CASE("HOTSPOTS_SEED overrides the seed") {
  RunConfig c;
  ::setenv("HOTSPOTS_SEED", "424242", 1);
  apply_environment(c);
  ::unsetenv("HOTSPOTS_SEED");
  CHECK(c.solver.seed == 424242u);
}

TEST_CASE("eigenpair JSON round trip reproduces the field") {
  const Eigenpair& ep = pair();
  const Json j = eigenpair_to_json(ep);
  const Eigenpair back = eigenpair_from_json(parse_json(j.dump()));
  CHECK(back.mu == ep.mu);
  CHECK(back.coeffs == ep.coeffs);
  const EigenField f(ep), g(back);
  const Point p = ep.triangle.from_barycentric(0.3, 0.3, 0.4);
  CHECK(f.value(p) == g.value(p));
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed and stale eigenpairs") {
  CHECK_THROWS_AS(parse_json("{\"vertices\": [1, 2"), FormatError);
  Json j = eigenpair_to_json(pair());
  Json missing = j;
  missing.erase("coeffs");
  CHECK_THROWS_AS(eigenpair_from_json(missing), FormatError);
  Json moved = j;
  moved["vertices"][2][0] = moved["vertices"][2][0].get<double>() + 0.01;
  CHECK_THROWS_AS(eigenpair_from_json(moved), StaleEigenpair);
  Json shorter = j;
  shorter["coeffs"].erase(shorter["coeffs"].size() - 1);
  CHECK_THROWS_AS(eigenpair_from_json(shorter), StaleEigenpair);
  CHECK_THROWS_AS(triangle_from_json(Json::parse(R"({"vertices": [[0,0],[1,0],[2,0]]})")), FormatError);
}

TEST_CASE("marching squares on a linear field") {
  // f(x, y) = x on [0, 1]^2, level 0.37: one vertical segment per row of cells.
  const int n = 10;
  Eigen::MatrixXd v(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) v(i, j) = i / double(n);
  const auto segs = marching_squares(v, 0, 0, 0.1, 0.1, 0.37);
  CHECK(segs.size() == static_cast<std::size_t>(n));
  for (const auto& s : segs) {
    CHECK(s.a.x() == doctest::Approx(0.37));
    CHECK(s.b.x() == doctest::Approx(0.37));
  }
  v(3, 4) = std::nan("");
  CHECK(marching_squares(v, 0, 0, 0.1, 0.1, 0.37).size() < static_cast<std::size_t>(n));
}

TEST_CASE("marching squares saddle cell yields two segments") {
  Eigen::MatrixXd v(2, 2);
  v << 1, -1, -1, 1;
  CHECK(marching_squares(v, 0, 0, 1, 1, 0.0).size() == 2u);
}

TEST_CASE("SVG output carries the header") {
  const Eigenpair& ep = pair();
  const EigenField f(ep);
  ContourOptions o;
  o.grid = 40;
  const std::string svg = contour_svg(f, ep.triangle, ep.scale, nullptr, "hdr -- x", o);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("hdr - - x") != std::string::npos);
  SweepRecord r;
  r.beta1 = 1.0;
  r.beta2 = 1.0;
  r.verdict = Classification::crit;
  const std::string m = moduli_svg({r, r}, 24, 0.05, "h", 400);
  std::size_t cells = 0;
  for (std::size_t pos = m.find("#e67e22"); pos != std::string::npos; pos = m.find("#e67e22", pos + 1))
    ++cells;
  CHECK(cells == 2u);
}

TEST_CASE("CSV files start with the header line") {
  SweepRecord r;
  r.beta1 = 1.0;
  r.beta2 = pi / 4;
  std::ostringstream out;
  write_sweep_csv(out, {r}, "hotspots config_hash=0 seed=1");
  const std::string s = out.str();
  CHECK(s.rfind("# hotspots config_hash=0 seed=1\n", 0) == 0);
  CHECK(s.find("beta1,beta2,mu2") != std::string::npos);
}
