#pragma once

// Right-hand sides of the distributed primal-dual flows on stacked state.
//
// State layout is one flat vector of consecutive n*d blocks:
//   baseline, dsstc   x | v
//   dsetc             x | v | sigma | z
//   dsetc-filter      x | v | sigma
// Agent i occupies entries [i*d, (i+1)*d) inside every block.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>

#include "stcomp/compressor.hpp"
#include "stcomp/errors.hpp"
#include "stcomp/graph.hpp"
#include "stcomp/problem.hpp"

namespace stcomp {

enum class FlowKind { Baseline, Dsstc, Dsetc, DsetcFilter };

inline std::string_view to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::Baseline: return "baseline";
    case FlowKind::Dsstc: return "dsstc";
    case FlowKind::Dsetc: return "dsetc";
    case FlowKind::DsetcFilter: return "dsetc-filter";
  }
  return "unknown";
}

inline std::optional<FlowKind> parse_flow_kind(std::string_view name) {
  for (auto kind : {FlowKind::Baseline, FlowKind::Dsstc, FlowKind::Dsetc, FlowKind::DsetcFilter}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

inline int state_blocks(FlowKind kind) {
  switch (kind) {
    case FlowKind::Baseline:
    case FlowKind::Dsstc: return 2;
    case FlowKind::Dsetc: return 4;
    case FlowKind::DsetcFilter: return 3;
  }
  return 2;
}

inline bool needs_compressor(FlowKind kind) { return kind != FlowKind::Baseline; }

struct FlowParams {
  double alpha = 1.0;
  double beta = 0.5;
  double eta = 0.1;

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(eta > 0.0) || !std::isfinite(alpha) ||
        !std::isfinite(beta) || !std::isfinite(eta)) {
      throw DomainError("flow gains alpha, beta, eta must be positive and finite");
    }
  }
};

namespace detail {

inline void check_state(const Graph& g, const QuadraticProblem& p, const Vector& state,
                        int blocks) {
  if (g.size() != p.agents()) {
    throw DimensionError("graph has " + std::to_string(g.size()) + " nodes but problem has " +
                         std::to_string(p.agents()) + " agents");
  }
  const Eigen::Index block = static_cast<Eigen::Index>(p.agents()) * p.dimension();
  if (state.size() != blocks * block) {
    throw DimensionError("state length " + std::to_string(state.size()) + " != " +
                         std::to_string(blocks) + " blocks of " + std::to_string(block));
  }
}

inline void check_compressor(const QuadraticProblem& p, const Compressor& c) {
  if (c.dimension() != p.dimension()) {
    throw DimensionError("compressor dimension " + std::to_string(c.dimension()) +
                         " != problem dimension " + std::to_string(p.dimension()));
  }
}

// Applies C(., t) to every agent block of `xs`.
inline Vector compress_blocks(const Compressor& c, const Vector& xs, int n, int d, double t) {
  Vector out(xs.size());
  for (int i = 0; i < n; ++i) {
    c.compress_into(xs.segment(i * d, d), t, out.segment(i * d, d));
  }
  return out;
}

// Shared primal/dual update given the network drive term sum_j L_ij x_{j,c}.
inline void primal_dual(const QuadraticProblem& p, const FlowParams& params, const Vector& state,
                        const Vector& drive, Vector& out) {
  const Eigen::Index nd = drive.size();
  const auto x = state.segment(0, nd);
  const auto v = state.segment(nd, nd);
  out.segment(0, nd) = -params.alpha * drive - params.beta * v -
                       params.eta * stacked_gradient(p, x);
  out.segment(nd, nd) = params.beta * drive;
}

}  // namespace detail

// x_i' = -alpha sum_j L_ij x_j - beta v_i - eta grad f_i(x_i);  v_i' = beta sum_j L_ij x_j
inline Vector baseline_rhs(const Graph& g, const QuadraticProblem& p, const FlowParams& params,
                           const Vector& state, double /*t*/) {
  detail::check_state(g, p, state, 2);
  const int d = p.dimension();
  const Eigen::Index nd = state.size() / 2;
  Vector out(state.size());
  const Vector drive = apply_laplacian(g.laplacian(), state.segment(0, nd), d);
  detail::primal_dual(p, params, state, drive, out);
  return out;
}

// Baseline with every transmitted x_j replaced by C(x_j, t).
inline Vector dsstc_rhs(const Graph& g, const QuadraticProblem& p, const FlowParams& params,
                        const Compressor& c, const Vector& state, double t) {
  detail::check_state(g, p, state, 2);
  detail::check_compressor(p, c);
  const int n = p.agents();
  const int d = p.dimension();
  const Eigen::Index nd = state.size() / 2;
  const Vector messages = detail::compress_blocks(c, state.segment(0, nd), n, d, t);
  Vector out(state.size());
  detail::primal_dual(p, params, state, apply_laplacian(g.laplacian(), messages, d), out);
  return out;
}

// Error-compensated flow with filter sigma and integrator z:
//   q_i = C(x_i - sigma_i, t)
//   sigma_i' = q_i,  z_i' = q_i - sum_j L_ij q_j
//   drive_i = sigma_i - z_i + sum_j L_ij q_j
inline Vector dsetc_rhs(const Graph& g, const QuadraticProblem& p, const FlowParams& params,
                        const Compressor& c, const Vector& state, double t) {
  detail::check_state(g, p, state, 4);
  detail::check_compressor(p, c);
  const int n = p.agents();
  const int d = p.dimension();
  const Eigen::Index nd = state.size() / 4;
  const auto x = state.segment(0, nd);
  const auto sigma = state.segment(2 * nd, nd);
  const auto z = state.segment(3 * nd, nd);

  const Vector q = detail::compress_blocks(c, x - sigma, n, d, t);
  const Vector lq = apply_laplacian(g.laplacian(), q, d);
  const Vector drive = sigma - z + lq;

  Vector out(state.size());
  detail::primal_dual(p, params, state, drive, out);
  out.segment(2 * nd, nd) = q;
  out.segment(3 * nd, nd) = q - lq;
  return out;
}

// Filter form: x_{i,c} = sigma_i + C(x_i - sigma_i, t), sigma_i' = C(x_i - sigma_i, t).
inline Vector dsetc_filter_rhs(const Graph& g, const QuadraticProblem& p,
                               const FlowParams& params, const Compressor& c,
                               const Vector& state, double t) {
  detail::check_state(g, p, state, 3);
  detail::check_compressor(p, c);
  const int n = p.agents();
  const int d = p.dimension();
  const Eigen::Index nd = state.size() / 3;
  const auto x = state.segment(0, nd);
  const auto sigma = state.segment(2 * nd, nd);

  const Vector q = detail::compress_blocks(c, x - sigma, n, d, t);
  const Vector messages = sigma + q;

  Vector out(state.size());
  detail::primal_dual(p, params, state, apply_laplacian(g.laplacian(), messages, d), out);
  out.segment(2 * nd, nd) = q;
  return out;
}

// Warning text when a nonlinear compressor is placed directly on the node
// states; the convergence guarantee for that flow needs a linear compressor.
inline std::optional<std::string> linearity_warning(FlowKind kind, const Compressor& c) {
  if (kind == FlowKind::Dsstc && !c.is_linear()) {
    return "dsstc flow with nonlinear compressor '" + std::string(to_string(c.kind())) +
           "': convergence is only guaranteed for linear compressors";
  }
  return std::nullopt;
}

// A flow bound to its graph, problem, gains and compressor. Cheap to call;
// holds references, so the referenced objects must outlive it.
class Flow {
 public:
  Flow(FlowKind kind, const Graph& g, const QuadraticProblem& p, FlowParams params,
       std::optional<Compressor> c = std::nullopt)
      : kind_(kind), graph_(&g), problem_(&p), params_(params), compressor_(std::move(c)) {
    params_.validate();
    if (g.size() != p.agents()) {
      throw DimensionError("graph has " + std::to_string(g.size()) + " nodes but problem has " +
                           std::to_string(p.agents()) + " agents");
    }
    if (needs_compressor(kind_) && !compressor_) {
      throw DomainError(std::string("flow '") + std::string(to_string(kind_)) +
                        "' requires a compressor");
    }
    if (compressor_) detail::check_compressor(p, *compressor_);
    if (compressor_) warning_ = linearity_warning(kind_, *compressor_);
  }

  FlowKind kind() const noexcept { return kind_; }
  const Graph& graph() const noexcept { return *graph_; }
  const QuadraticProblem& problem() const noexcept { return *problem_; }
  const FlowParams& params() const noexcept { return params_; }
  const std::optional<Compressor>& compressor() const noexcept { return compressor_; }
  const std::optional<std::string>& warning() const noexcept { return warning_; }

  int agents() const noexcept { return problem_->agents(); }
  int dimension() const noexcept { return problem_->dimension(); }
  Eigen::Index block_size() const noexcept {
    return static_cast<Eigen::Index>(agents()) * dimension();
  }
  Eigen::Index state_size() const noexcept { return state_blocks(kind_) * block_size(); }

  // x(0) = x0, v(0) = 0, sigma(0) = z(0) = 0.
  Vector initial_state(const Vector& x0) const {
    if (x0.size() != block_size()) {
      throw DimensionError("x0 length " + std::to_string(x0.size()) + " != n*d = " +
                           std::to_string(block_size()));
    }
    Vector state = Vector::Zero(state_size());
    state.segment(0, block_size()) = x0;
    return state;
  }

  Vector operator()(const Vector& state, double t) const {
    switch (kind_) {
      case FlowKind::Baseline: return baseline_rhs(*graph_, *problem_, params_, state, t);
      case FlowKind::Dsstc: return dsstc_rhs(*graph_, *problem_, params_, *compressor_, state, t);
      case FlowKind::Dsetc: return dsetc_rhs(*graph_, *problem_, params_, *compressor_, state, t);
      case FlowKind::DsetcFilter:
        return dsetc_filter_rhs(*graph_, *problem_, params_, *compressor_, state, t);
    }
    return Vector();
  }

 private:
  FlowKind kind_;
  const Graph* graph_;
  const QuadraticProblem* problem_;
  FlowParams params_;
  std::optional<Compressor> compressor_;
  std::optional<std::string> warning_;
};

}  // namespace stcomp
