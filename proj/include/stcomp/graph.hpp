#pragma once

// Undirected weighted communication graphs, their Laplacians, and the
// consensus projector H = (1/n) 1 1^T (x) I_d on stacked agent vectors.

#include <Eigen/Dense>

#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "stcomp/errors.hpp"

namespace stcomp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Edge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
};

class Graph {
 public:
  // `weights` must be square, symmetric, nonnegative with zero diagonal and
  // describe a connected graph on at least two nodes.
  explicit Graph(Matrix weights) : weights_(std::move(weights)) {
    const auto n = weights_.rows();
    if (n != weights_.cols()) {
      throw DimensionError("graph weight matrix must be square");
    }
    if (n < 2) {
      throw TopologyError("graph needs at least 2 nodes, got " + std::to_string(n));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights_(i, i) != 0.0) {
        throw TopologyError("graph weight matrix must have a zero diagonal");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w = weights_(i, j);
        if (!std::isfinite(w) || w < 0.0) {
          throw TopologyError("edge weights must be finite and nonnegative");
        }
        if (w != weights_(j, i)) {
          throw TopologyError("graph weight matrix must be symmetric");
        }
      }
    }
    if (!connected()) {
      throw TopologyError("graph is not connected");
    }
    laplacian_ = -weights_;
    laplacian_.diagonal() = weights_.rowwise().sum();
  }

  int size() const noexcept { return static_cast<int>(weights_.rows()); }
  const Matrix& weights() const noexcept { return weights_; }
  const Matrix& laplacian() const noexcept { return laplacian_; }

  int edge_count() const {
    int count = 0;
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < weights_.cols(); ++j) {
        if (weights_(i, j) > 0.0) ++count;
      }
    }
    return count;
  }

 private:
  // Breadth-first search from node 0.
  bool connected() const {
    const auto n = weights_.rows();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<Eigen::Index> frontier;
    frontier.push(0);
    seen[0] = true;
    Eigen::Index reached = 1;
    while (!frontier.empty()) {
      const auto i = frontier.front();
      frontier.pop();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (weights_(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = true;
          ++reached;
          frontier.push(j);
        }
      }
    }
    return reached == n;
  }

  Matrix weights_;
  Matrix laplacian_;
};

inline Graph build_ring(int n, double weight) {
  if (n < 3) {
    throw TopologyError("ring graph needs n >= 3, got " + std::to_string(n));
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw DomainError("ring edge weight must be positive");
  }
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    w(i, j) = weight;
    w(j, i) = weight;
  }
  return Graph(std::move(w));
}

inline Graph build_complete(int n, double weight) {
  if (n < 2) {
    throw TopologyError("complete graph needs n >= 2, got " + std::to_string(n));
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw DomainError("complete graph edge weight must be positive");
  }
  Matrix w = Matrix::Constant(n, n, weight);
  w.diagonal().setZero();
  return Graph(std::move(w));
}

// Undirected edge list, 0-indexed. Repeated edges are rejected.
inline Graph build_from_edges(int n, std::span<const Edge> edges) {
  if (n < 2) {
    throw TopologyError("graph needs at least 2 nodes, got " + std::to_string(n));
  }
  Matrix w = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw TopologyError("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                          ") references a node outside [0, " + std::to_string(n) + ")");
    }
    if (e.from == e.to) {
      throw TopologyError("self-loop at node " + std::to_string(e.from));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw TopologyError("edge weights must be positive");
    }
    if (w(e.from, e.to) != 0.0) {
      throw TopologyError("duplicate edge (" + std::to_string(e.from) + ", " +
                          std::to_string(e.to) + ")");
    }
    w(e.from, e.to) = e.weight;
    w(e.to, e.from) = e.weight;
  }
  return Graph(std::move(w));
}

struct LaplacianSpectrum {
  Matrix laplacian;
  Vector eigenvalues;  // ascending; eigenvalues(0) == 0 exactly

  double lambda2() const { return eigenvalues(1); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

inline constexpr double kZeroEigenvalueClamp = 1e-10;

inline LaplacianSpectrum laplacian_spectrum(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g.laplacian(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Laplacian eigendecomposition failed");
  }
  Vector ev = solver.eigenvalues();
  int zeros = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < kZeroEigenvalueClamp) {
      ev(i) = 0.0;
      ++zeros;
    }
  }
  if (zeros != 1) {
    throw TopologyError("Laplacian has " + std::to_string(zeros) +
                        " zero eigenvalues; graph is not connected");
  }
  return {g.laplacian(), std::move(ev)};
}

// Returns (L (x) I_d) xs for a stacked vector of n blocks of length d.
inline Vector apply_laplacian(const Matrix& laplacian, const Vector& xs, int d) {
  const auto n = laplacian.rows();
  if (d < 1 || xs.size() != n * d) {
    throw DimensionError("stacked vector length " + std::to_string(xs.size()) +
                         " does not match n*d = " + std::to_string(n * d));
  }
  Vector out(xs.size());
  Eigen::Map<const Matrix> blocks(xs.data(), d, n);
  Eigen::Map<Matrix>(out.data(), d, n).noalias() = blocks * laplacian;  // L symmetric
  return out;
}

// Replaces every agent block by the agent average (applies H).
inline Vector consensus_project(const Vector& xs, int n, int d) {
  if (n < 1 || d < 1 || xs.size() != static_cast<Eigen::Index>(n) * d) {
    throw DimensionError("consensus_project: expected length " + std::to_string(n * d) +
                         ", got " + std::to_string(xs.size()));
  }
  Eigen::Map<const Matrix> blocks(xs.data(), d, n);
  const Vector mean = blocks.rowwise().mean();
  Vector out(xs.size());
  Eigen::Map<Matrix>(out.data(), d, n) = mean.replicate(1, n);
  return out;
}

}  // namespace stcomp
