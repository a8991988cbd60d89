#include "vispose/importance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace vispose {

bool KnnGraph::has_edge(int from, int to) const {
  const auto& nb = neighbors[from];
  return std::find(nb.begin(), nb.end(), to) != nb.end();
}

KnnGraph build_knn_graph(const std::vector<Vec3>& points, int k) {
  const int n = static_cast<int>(points.size());
  if (k < 1 || k >= n) {
    throw std::invalid_argument("build_knn_graph: need 1 <= k < n");
  }
  KnnGraph g;
  g.n = n;
  g.k = k;
  g.neighbors.assign(n, {});
  g.transition = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dist[j] = {(points[i] - points[j]).squaredNorm(), j};
      if (j != i && dist[j].first == 0.0) {
        throw DataError("build_knn_graph: duplicate points");
      }
    }
    dist[i].first = std::numeric_limits<double>::infinity();  // no self-edge
    // (distance, index) order breaks ties by lower index
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    auto& nb = g.neighbors[i];
    nb.reserve(k);
    for (int m = 0; m < k; ++m) {
      nb.push_back(dist[m].second);
      // T = (1/k) A^T: walker at i moves to each out-neighbor with prob 1/k
      g.transition(dist[m].second, i) += 1.0 / k;
    }
  }
  return g;
}

KnnGraph precompute_ppr(KnnGraph graph, double damping) {
  if (damping <= 0.0 || damping >= 1.0) {
    throw std::invalid_argument("precompute_ppr: damping must be in (0, 1)");
  }
  const int n = graph.n;
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - damping * graph.transition;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  graph.ppr = lu.solve((1.0 - damping) * Eigen::MatrixXd::Identity(n, n));
  graph.damping = damping;

  const double residual =
      (system * graph.ppr - (1.0 - damping) * Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (residual > 1e-8) {
    throw NumericError("precompute_ppr: solver residual " + std::to_string(residual));
  }
  return graph;
}

Eigen::VectorXd restart_vector(const std::vector<std::uint8_t>& visibility) {
  const int n = static_cast<int>(visibility.size());
  int visible = 0;
  for (auto f : visibility) visible += (f != 0);
  if (visible == 0) {
    throw NumericError("empty restart support");
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (visibility[i]) s[i] = 1.0 / visible;
  }
  return s;
}

Eigen::VectorXd importance(const KnnGraph& graph, const Eigen::VectorXd& restart) {
  if (!graph.has_ppr()) {
    throw std::invalid_argument("importance: ppr matrix not precomputed");
  }
  if (restart.size() != graph.n) {
    throw std::invalid_argument("importance: dimension mismatch");
  }
  return graph.ppr * restart;
}

Eigen::VectorXd power_iteration_ppr(const KnnGraph& graph, const Eigen::VectorXd& restart,
                                    double damping, double tol, int max_iters) {
  if (tol <= 0.0) {
    throw std::invalid_argument("power_iteration_ppr: tol must be positive");
  }
  if (restart.size() != graph.n) {
    throw std::invalid_argument("power_iteration_ppr: dimension mismatch");
  }
  Eigen::VectorXd r = restart;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd next = damping * (graph.transition * r) + (1.0 - damping) * restart;
    const double change = (next - r).lpNorm<1>();
    r = std::move(next);
    if (change < tol) {
      return r;
    }
  }
  throw NumericError("power_iteration_ppr: no convergence");
}

std::string edge_list_text(const KnnGraph& graph) {
  std::ostringstream out;
  for (int i = 0; i < graph.n; ++i) {
    for (int j : graph.neighbors[i]) {
      out << i << " " << j << "\n";
    }
  }
  return out.str();
}

}  // namespace vispose
