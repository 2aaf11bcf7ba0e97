#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hotspots/basis.hpp"

using namespace hotspots;

namespace {

std::vector<TermSample> terms_at(const BasisSpec& b, double k, const Point& p) {
  std::vector<TermSample> out;
  evaluate_basis(b, k, p, TermDerivatives::hessian, out);
  return out;
}

}  // namespace

TEST_CASE("term counts and offsets are consistent") {
  const auto t = from_angles(0.5, 1.9);
  const BasisSpec b = BasisSpec::for_triangle(t, 12, 6, true);
  int total = 0;
  for (const auto& blk : b.blocks) {
    CHECK(blk.terms >= kMinBlockTerms);
    CHECK(blk.order(blk.terms - 1) <= kMaxBlockOrder);
    total += blk.terms;
  }
  for (const auto& img : b.images) total += img.terms;
  for (const auto& c : b.centers) total += c.terms();
  CHECK(total == b.total_terms());
  CHECK(b.offset(0) == 0);
  CHECK(b.offset(1) == b.blocks[0].terms);
  CHECK(b.matches(t));
  CHECK_FALSE(b.matches(t.scaled(1.01)));
  // the widest angle gets the most terms
  CHECK(b.blocks[1].terms >= b.blocks[0].terms);
}

TEST_CASE("every term solves the Helmholtz equation") {
  const auto t = from_angles(0.7, 1.1).moved(0.4, Vec2(0.2, -0.3));
  const BasisSpec b = BasisSpec::for_triangle(t, 10, 4, true);
  const double k = 5.3;
  for (const Eigen::Vector3d& l : {Eigen::Vector3d(0.2, 0.3, 0.5), Eigen::Vector3d(0.6, 0.2, 0.2),
                                   Eigen::Vector3d(0.1, 0.1, 0.8)}) {
    const Point p = t.from_barycentric(l[0], l[1], l[2]);
    const auto s = terms_at(b, k, p);
    REQUIRE(static_cast<int>(s.size()) == b.total_terms());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double size = s[i].hessian.cwiseAbs().maxCoeff() + k * k * std::abs(s[i].value);
      INFO("term " << i);
      CHECK(std::abs(s[i].hessian.trace() + k * k * s[i].value) <= 1e-10 * size + 1e-300);
    }
  }
}

TEST_CASE("gradients and Hessians match finite differences") {
  const auto t = from_angles(1.0, 1.2);
  const BasisSpec b = BasisSpec::for_triangle(t, 8, 3, false);
  const double k = 4.1, h = 1e-6;
  const Point p = t.from_barycentric(0.3, 0.45, 0.25);
  const auto s = terms_at(b, k, p);
  for (int d = 0; d < 2; ++d) {
    Vec2 e = Vec2::Zero();
    e[d] = h;
    const auto sp = terms_at(b, k, p + e), sm = terms_at(b, k, p - e);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double fd = (sp[i].value - sm[i].value) / (2 * h);
      const double scale = s[i].grad.norm() + k * std::abs(s[i].value);
      CHECK(std::abs(fd - s[i].grad[d]) <= 1e-7 * scale);
      const Vec2 fdg = (sp[i].grad - sm[i].grad) / (2 * h);
      const double hs = s[i].hessian.cwiseAbs().maxCoeff() + k * scale;
      CHECK((fdg - s[i].hessian.col(d)).norm() <= 1e-6 * hs);
    }
  }
}

TEST_CASE("vertex terms satisfy the Neumann condition on both adjacent edges") {
  const auto t = from_angles(0.9, 1.3).moved(1.1, Vec2(1, 2));
  const BasisSpec b = BasisSpec::for_triangle(t, 12);
  const double k = 6.0;
  for (int v = 0; v < 3; ++v) {
    const VertexBlock& blk = b.blocks[static_cast<std::size_t>(v)];
    std::vector<TermSample> out(static_cast<std::size_t>(blk.terms));
    for (int e : {v, (v + 2) % 3}) {
      const EdgeFrame f = edge_frame(t, e);
      for (double s : {0.1, 0.35, 0.8}) {
        evaluate_block(blk, k, f.at(s * f.length), TermDerivatives::gradient, out.data());
        for (const auto& term : out) {
          const double size = term.grad.norm() + k * std::abs(term.value);
          CHECK(std::abs(term.grad.dot(f.normal)) <= 1e-11 * size + 1e-300);
        }
      }
    }
  }
}

TEST_CASE("first vertex term is the radial Bessel function") {
  const auto t = from_angles(1.0, 0.8);
  const BasisSpec b = BasisSpec::for_triangle(t, 6);
  const VertexBlock& blk = b.blocks[2];
  std::vector<TermSample> out(static_cast<std::size_t>(blk.terms));
  const double k = 3.0;
  const Point p = t.from_barycentric(0.2, 0.2, 0.6);
  evaluate_block(blk, k, p, TermDerivatives::value, out.data());
  CHECK(out[0].value == doctest::Approx(std::cyl_bessel_j(0.0, k * (p - t.vertex(2)).norm())).epsilon(1e-13));
}
