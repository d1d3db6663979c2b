#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace formsim::graph {

// Exponential communication model: link quality decays as exp(-sigma*r/R)
// with distance r and the link is lost from range_R on.
struct CommModel {
  double range_R;  // communication range [m]
  double sigma;    // decay slope (dimensionless)

  CommModel(double range, double decay_slope);
};

// Pairwise link weights: symmetric, zero diagonal, entries in [0, 1].
struct WeightedAdjacency {
  Eigen::MatrixXd weights;

  int order() const { return static_cast<int>(weights.rows()); }
};

// L = D - A of an undirected weighted graph: symmetric, zero row sums,
// nonpositive off-diagonals, positive semi-definite.
struct LaplacianMatrix {
  Eigen::MatrixXd entries;

  int order() const { return static_cast<int>(entries.rows()); }
};

// Eigenstructure of a Laplacian; lambda_2 (the algebraic connectivity) is
// positive exactly when the graph is connected.
struct SpectralSummary {
  Eigen::VectorXd eigenvalues;     // ascending
  Eigen::MatrixXd eigenvectors;    // column k belongs to eigenvalues[k]
  double fiedler_value;            // eigenvalues[1]
  Eigen::VectorXd fiedler_vector;  // unit norm
};

// Link weight for a pair at distance r_ij >= 0. Exactly zero at and beyond
// range_R (the connection is treated as lost at the boundary).
double adjacency_weight(double r_ij, const CommModel& comm);

// Indices j != i with ||p_i - p_j|| < range_R, ascending.
std::vector<int> neighbors(int i, const std::vector<Eigen::Vector2d>& positions,
                           const CommModel& comm);

// Weight matrix over all pairs; requires at least two positions.
WeightedAdjacency build_adjacency(const std::vector<Eigen::Vector2d>& positions,
                                  const CommModel& comm);

LaplacianMatrix laplacian(const WeightedAdjacency& adj);

// Cyclic Jacobi diagonalization of a symmetric matrix with deterministic
// rotation order: sweeps stop when the off-diagonal Frobenius norm drops
// below 1e-12 (at most 100 sweeps). Returns eigenvalues ascending and the
// matching orthonormal eigenvectors as columns. Rejects inputs whose
// asymmetry exceeds 1e-9.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> symmetric_eigendecomposition(
    const Eigen::MatrixXd& m);

// Full spectrum of a Laplacian of order >= 2, plus lambda_2 and its
// eigenvector (sign fixed so the largest-magnitude component is positive).
SpectralSummary spectral_summary(const LaplacianMatrix& L);

// True iff lambda_2(L) > tol.
bool is_connected(const LaplacianMatrix& L, double tol = 1e-6);

}  // namespace formsim::graph
