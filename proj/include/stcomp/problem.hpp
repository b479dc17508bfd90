#pragma once

// Distributed least-squares costs f_i(x) = 1/2 (H_i^T x - b_i)^2 with a known
// global minimizer s*.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "stcomp/errors.hpp"
#include "stcomp/graph.hpp"

namespace stcomp {

enum class RankPolicy { RequireFullRank, AllowDeficient };

class QuadraticProblem {
 public:
  // rows: n x d, row i is H_i^T. offsets: b (length n). optimum: s* (length d).
  QuadraticProblem(Matrix rows, Vector offsets, Vector optimum,
                   RankPolicy policy = RankPolicy::RequireFullRank)
      : rows_(std::move(rows)), offsets_(std::move(offsets)), optimum_(std::move(optimum)) {
    if (rows_.rows() < 1 || rows_.cols() < 1) {
      throw DimensionError("problem needs at least one agent and one dimension");
    }
    if (offsets_.size() != rows_.rows()) {
      throw DimensionError("offsets length " + std::to_string(offsets_.size()) +
                           " != agent count " + std::to_string(rows_.rows()));
    }
    if (optimum_.size() != rows_.cols()) {
      throw DimensionError("optimum length " + std::to_string(optimum_.size()) +
                           " != dimension " + std::to_string(rows_.cols()));
    }
    if (!rows_.allFinite() || !offsets_.allFinite() || !optimum_.allFinite()) {
      throw DomainError("problem data must be finite");
    }
    if (policy == RankPolicy::RequireFullRank) {
      Eigen::ColPivHouseholderQR<Matrix> qr(rows_);
      if (qr.rank() < rows_.cols()) {
        throw DomainError("stacked H has rank " + std::to_string(qr.rank()) + " < d = " +
                          std::to_string(rows_.cols()) + "; optimum is not unique");
      }
    }
    const double residual = (rows_ * optimum_ - offsets_).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, offsets_.cwiseAbs().maxCoeff());
    if (residual > 1e-10 * scale) {
      throw DomainError("H s* = b violated (residual " + std::to_string(residual) + ")");
    }
  }

  int agents() const noexcept { return static_cast<int>(rows_.rows()); }
  int dimension() const noexcept { return static_cast<int>(rows_.cols()); }
  const Matrix& rows() const noexcept { return rows_; }
  const Vector& offsets() const noexcept { return offsets_; }
  const Vector& optimum() const noexcept { return optimum_; }

 private:
  Matrix rows_;
  Vector offsets_;
  Vector optimum_;
};

// Draws H_i with i.i.d. N(0, scale^2) entries and sets b = H s*. Redraws until
// the stacked H has full column rank.
inline QuadraticProblem generate_problem(int n, int d, const Vector& optimum, std::uint64_t seed,
                                         double scale = 1.0) {
  if (d < 1) throw DomainError("dimension d must be >= 1");
  if (n < d) {
    throw DomainError("n = " + std::to_string(n) + " < d = " + std::to_string(d) +
                      "; stacked H cannot have rank d");
  }
  if (optimum.size() != d) {
    throw DimensionError("optimum length " + std::to_string(optimum.size()) + " != d = " +
                         std::to_string(d));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("problem scale must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix rows(n, d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) rows(i, j) = normal(rng);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(rows);
    if (qr.rank() < d) continue;
    Vector offsets = rows * optimum;
    return QuadraticProblem(std::move(rows), std::move(offsets), optimum);
  }
  throw std::runtime_error("generate_problem: no full-rank draw after 1000 attempts");
}

inline void check_agent(const QuadraticProblem& p, int i, const Vector& x) {
  if (i < 0 || i >= p.agents()) {
    throw DimensionError("agent index " + std::to_string(i) + " outside [0, " +
                         std::to_string(p.agents()) + ")");
  }
  if (x.size() != p.dimension()) {
    throw DimensionError("point length " + std::to_string(x.size()) + " != d = " +
                         std::to_string(p.dimension()));
  }
}

inline double local_cost(const QuadraticProblem& p, int i, const Vector& x) {
  check_agent(p, i, x);
  const double r = p.rows().row(i).dot(x) - p.offsets()(i);
  return 0.5 * r * r;
}

// grad f_i(x) = H_i (H_i^T x - b_i)
inline Vector local_gradient(const QuadraticProblem& p, int i, const Vector& x) {
  check_agent(p, i, x);
  const double r = p.rows().row(i).dot(x) - p.offsets()(i);
  return r * p.rows().row(i).transpose();
}

// Stacked gradient [grad f_1(x_1); ...; grad f_n(x_n)] without per-call checks.
inline Vector stacked_gradient(const QuadraticProblem& p, const Vector& xs) {
  const int n = p.agents();
  const int d = p.dimension();
  if (xs.size() != static_cast<Eigen::Index>(n) * d) {
    throw DimensionError("stacked state length " + std::to_string(xs.size()) + " != n*d = " +
                         std::to_string(n * d));
  }
  Eigen::Map<const Matrix> x(xs.data(), d, n);
  // residual_i = H_i^T x_i - b_i
  const Vector residual = (p.rows().transpose().cwiseProduct(x)).colwise().sum().transpose() -
                          p.offsets();
  Vector out(xs.size());
  Eigen::Map<Matrix>(out.data(), d, n) =
      p.rows().transpose() * residual.asDiagonal();
  return out;
}

// sum_i f_i(x)
inline double global_cost(const QuadraticProblem& p, const Vector& x) {
  if (x.size() != p.dimension()) throw DimensionError("point length mismatch");
  return 0.5 * (p.rows() * x - p.offsets()).squaredNorm();
}

struct ProblemConstants {
  double lipschitz = 0.0;         // L_f = max_i |H_i|^2
  double strong_convexity = 0.0;  // mu = lambda_min(H^T H)
  double mu_n = 0.0;              // mu / n
};

inline ProblemConstants constants(const QuadraticProblem& p) {
  ProblemConstants c;
  c.lipschitz = p.rows().rowwise().squaredNorm().maxCoeff();
  const Matrix gram = p.rows().transpose() * p.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  c.strong_convexity = std::max(0.0, solver.eigenvalues()(0));
  c.mu_n = c.strong_convexity / p.agents();
  return c;
}

// sum_i |x_i - s*|^2
inline double global_error(const QuadraticProblem& p, const Vector& xs) {
  const int n = p.agents();
  const int d = p.dimension();
  if (xs.size() != static_cast<Eigen::Index>(n) * d) {
    throw DimensionError("stacked state length " + std::to_string(xs.size()) + " != n*d = " +
                         std::to_string(n * d));
  }
  Eigen::Map<const Matrix> x(xs.data(), d, n);
  return (x.colwise() - p.optimum()).squaredNorm();
}

}  // namespace stcomp
