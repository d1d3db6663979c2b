#include "formsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace formsim::graph {

CommModel::CommModel(double range, double decay_slope)
    : range_R(range), sigma(decay_slope) {
  if (!(range_R > 0.0)) throw std::domain_error("CommModel: range_R must be > 0");
  if (!(sigma > 0.0)) throw std::domain_error("CommModel: sigma must be > 0");
}

double adjacency_weight(double r_ij, const CommModel& comm) {
  if (!(r_ij >= 0.0)) throw std::domain_error("adjacency_weight: r_ij must be >= 0");
  if (r_ij >= comm.range_R) return 0.0;
  return std::exp(-comm.sigma * r_ij / comm.range_R);
}

std::vector<int> neighbors(int i, const std::vector<Eigen::Vector2d>& positions,
                           const CommModel& comm) {
  const int n = static_cast<int>(positions.size());
  if (n == 0) throw std::domain_error("neighbors: positions must be nonempty");
  if (i < 0 || i >= n) throw std::out_of_range("neighbors: agent index out of range");
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    if ((positions[i] - positions[j]).norm() < comm.range_R) out.push_back(j);
  }
  return out;
}

WeightedAdjacency build_adjacency(const std::vector<Eigen::Vector2d>& positions,
                                  const CommModel& comm) {
  const int n = static_cast<int>(positions.size());
  if (n < 2) throw std::domain_error("build_adjacency: need at least 2 positions");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = adjacency_weight((positions[i] - positions[j]).norm(), comm);
      w(i, j) = a;
      w(j, i) = a;
    }
  }
  return WeightedAdjacency{std::move(w)};
}

LaplacianMatrix laplacian(const WeightedAdjacency& adj) {
  const int n = adj.order();
  Eigen::MatrixXd l = -adj.weights;
  for (int i = 0; i < n; ++i) l(i, i) = adj.weights.row(i).sum();
  return LaplacianMatrix{std::move(l)};
}

namespace {

double offdiagonal_frobenius(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  double s = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(s);
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::MatrixXd> symmetric_eigendecomposition(
    const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("symmetric_eigendecomposition: square matrix required");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("symmetric_eigendecomposition: matrix is not symmetric");

  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd a = 0.5 * (m + m.transpose());  // fold roundoff asymmetry
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  constexpr double kOffTol = 1e-12;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiagonal_frobenius(a) < kOffTol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Sort pairs ascending; stable on ties for a deterministic ordering.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int lhs, int rhs) { return a(lhs, lhs) < a(rhs, rhs); });

  Eigen::VectorXd vals(n);
  Eigen::MatrixXd vecs(n, n);
  for (int k = 0; k < n; ++k) {
    vals(k) = a(order[k], order[k]);
    vecs.col(k) = v.col(order[k]);
  }
  return {std::move(vals), std::move(vecs)};
}

SpectralSummary spectral_summary(const LaplacianMatrix& L) {
  if (L.order() < 2)
    throw std::invalid_argument("spectral_summary: order >= 2 required");
  auto [vals, vecs] = symmetric_eigendecomposition(L.entries);

  Eigen::VectorXd fiedler = vecs.col(1).normalized();
  // Canonical sign: largest-magnitude component positive.
  int imax = 0;
  for (int k = 1; k < fiedler.size(); ++k)
    if (std::abs(fiedler(k)) > std::abs(fiedler(imax))) imax = k;
  if (fiedler(imax) < 0.0) fiedler = -fiedler;

  const double lambda2 = vals(1);
  return SpectralSummary{std::move(vals), std::move(vecs), lambda2, std::move(fiedler)};
}

bool is_connected(const LaplacianMatrix& L, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("is_connected: tol must be > 0");
  return spectral_summary(L).fiedler_value > tol;
}

}  // namespace formsim::graph
