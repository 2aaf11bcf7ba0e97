#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hotspots/eigensolver.hpp"

namespace hotspots {

namespace {

// Node (i, j) of the similar subdivision sits at v1 + i/n (v2 - v1) + j/n (v3 - v1).
int node_index(int i, int j, int n) {
  // Rows j = 0..n hold n + 1 - j nodes each.
  return j * (n + 1) - j * (j - 1) / 2 + i;
}

}  // namespace

FemResult fem_eigenvalue(const LabeledTriangle& t, int n) {
  if (n < 8 || n > 64) throw SolverError("fem refinement must lie in [8, 64]");
  const int nodes = (n + 1) * (n + 2) / 2;

  // Every cell is congruent to t / n (half of them point-reflected), so the
  // element matrices are shared.
  const Point a = t.vertex(0) / n;
  const Point b = t.vertex(1) / n;
  const Point c = t.vertex(2) / n;
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  const std::array<Point, 3> p{a, b, c};
  Eigen::Matrix3d ke, me;
  for (int r = 0; r < 3; ++r) {
    const Vec2 er = p[static_cast<std::size_t>((r + 2) % 3)] - p[static_cast<std::size_t>((r + 1) % 3)];
    for (int s = 0; s < 3; ++s) {
      const Vec2 es = p[static_cast<std::size_t>((s + 2) % 3)] - p[static_cast<std::size_t>((s + 1) % 3)];
      ke(r, s) = er.dot(es) / (4.0 * area);
      me(r, s) = area / 12.0 * (r == s ? 2.0 : 1.0);
    }
  }

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(static_cast<std::size_t>(9 * n * n));
  mt.reserve(static_cast<std::size_t>(9 * n * n));
  auto add_cell = [&](const std::array<int, 3>& ids) {
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) {
        kt.emplace_back(ids[static_cast<std::size_t>(r)], ids[static_cast<std::size_t>(s)], ke(r, s));
        mt.emplace_back(ids[static_cast<std::size_t>(r)], ids[static_cast<std::size_t>(s)], me(r, s));
      }
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + j < n; ++i) {
      add_cell({node_index(i, j, n), node_index(i + 1, j, n), node_index(i, j + 1, n)});
      // The reflected cell maps local vertices a, b, c to (i+1, j+1), (i, j+1), (i+1, j).
      if (i + j + 2 <= n)
        add_cell({node_index(i + 1, j + 1, n), node_index(i, j + 1, n), node_index(i + 1, j, n)});
    }
  }
  Eigen::SparseMatrix<double> kmat(nodes, nodes), mmat(nodes, nodes);
  kmat.setFromTriplets(kt.begin(), kt.end());
  mmat.setFromTriplets(mt.begin(), mt.end());

  // Shift-invert with a small positive shift; the constant mode is removed by
  // M-orthogonal projection after every solve.
  const double shift = 1.0 / (t.diameter() * t.diameter());
  Eigen::SparseMatrix<double> shifted = kmat + shift * mmat;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw SolverError("fem: factorization failed");

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(nodes);
  const Eigen::VectorXd m_ones = mmat * ones;
  const double total_mass = ones.dot(m_ones);
  auto deflate = [&](Eigen::MatrixXd& x) {
    for (int col = 0; col < x.cols(); ++col) x.col(col) -= (m_ones.dot(x.col(col)) / total_mass) * ones;
  };

  constexpr int block = 4;
  Eigen::MatrixXd x(nodes, block);
  // Deterministic start: low-order polynomials in the node coordinates.
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i + j <= n; ++i) {
      const double u = static_cast<double>(i) / n, v = static_cast<double>(j) / n;
      const int id = node_index(i, j, n);
      x(id, 0) = u - 0.3;
      x(id, 1) = v - 0.3;
      x(id, 2) = u * v;
      x(id, 3) = u * u - v * v;
    }
  deflate(x);

  double previous = 0;
  for (int iter = 1; iter <= 2000; ++iter) {
    Eigen::MatrixXd y = solver.solve(mmat * x);
    deflate(y);
    // Rayleigh-Ritz on span(y).
    const Eigen::MatrixXd ky = y.transpose() * (kmat * y);
    const Eigen::MatrixXd my = y.transpose() * (mmat * y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(ky, my);
    if (ritz.info() != Eigen::Success) throw SolverError("fem: Rayleigh-Ritz failed");
    x = y * ritz.eigenvectors();
    const double lowest = ritz.eigenvalues()(0);
    if (iter > 2 && std::abs(lowest - previous) <= 1e-13 * std::abs(lowest))
      return {lowest, iter, nodes};
    previous = lowest;
  }
  throw SolverError("fem: inverse iteration did not converge");
}

}  // namespace hotspots
