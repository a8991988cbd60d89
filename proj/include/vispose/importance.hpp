#pragma once

#include "vispose/mesh.hpp"

namespace vispose {

// Directed k-NN graph over keypoints with its column-stochastic transition
// matrix T = (1/k) A^T and, once precomputed, the dense PPR propagation
// matrix T_ppr = (1-c) (I - cT)^-1. Immutable after construction.
struct KnnGraph {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> neighbors;  // out-edges, k per node
  Eigen::MatrixXd transition;               // n x n, columns sum to 1
  Eigen::MatrixXd ppr;                      // empty until precompute_ppr
  double damping = 0.0;                     // c used for ppr

  bool has_ppr() const { return ppr.size() > 0; }
  bool has_edge(int from, int to) const;
};

/// Edges from every point to its k nearest neighbors (Euclidean), distance
/// ties broken by lower index. Duplicate points are an error.
KnnGraph build_knn_graph(const std::vector<Vec3>& points, int k);

/// Dense solve of (I - cT) X = (1-c) I, cached on the graph. The solve
/// residual is checked against 1e-8.
KnnGraph precompute_ppr(KnnGraph graph, double damping);

/// Restart vector: uniform over the visible keypoints, zero elsewhere.
/// Zero visible keypoints is an error; callers fall back to even sampling.
Eigen::VectorXd restart_vector(const std::vector<std::uint8_t>& visibility);

/// r = T_ppr s; closed-form personalized PageRank.
Eigen::VectorXd importance(const KnnGraph& graph, const Eigen::VectorXd& restart);

/// Fixed-point iteration r <- c T r + (1-c) s from r = s until the L1 change
/// drops below tol. Independent oracle for the closed form.
Eigen::VectorXd power_iteration_ppr(const KnnGraph& graph, const Eigen::VectorXd& restart,
                                    double damping, double tol = 1e-12,
                                    int max_iters = 10000);

/// Adjacency as plain text, one "i j" pair per line, for external inspection.
std::string edge_list_text(const KnnGraph& graph);

}  // namespace vispose
