#pragma once

// Fixed-step forward-Euler integration of a Flow with trajectory logging,
// bandwidth accounting and post-hoc log-linear rate fitting.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "stcomp/compressor.hpp"
#include "stcomp/errors.hpp"
#include "stcomp/flow.hpp"
#include "stcomp/graph.hpp"
#include "stcomp/problem.hpp"

namespace stcomp {

struct SimConfig {
  double dt = 0.01;
  double horizon = 50.0;
  int log_every = 10;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("sim dt must be positive");
    if (!(horizon >= dt) || !std::isfinite(horizon)) {
      throw DomainError("sim horizon must be >= dt");
    }
    if (log_every < 1) throw DomainError("sim log_every must be >= 1");
  }

  long steps() const { return std::lround(horizon / dt); }
};

struct TrajectoryLog {
  std::vector<double> times;
  std::vector<double> errors;            // sum_i |x_i - s*|^2
  std::vector<double> consensus_errors;  // |x - Hx|^2
  std::vector<double> v_sums;            // |sum_i v_i|
  std::vector<std::uint64_t> cumulative_bits;
  bool diverged = false;

  std::size_t size() const noexcept { return times.size(); }
};

inline constexpr double kDivergenceThreshold = 1e12;

// Bits broadcast per agent per step; the uncompressed baseline sends d doubles.
inline std::uint64_t bits_per_message(const Flow& flow) {
  if (flow.compressor()) return message_cost(*flow.compressor()).bits;
  return message_cost(Compressor::identity(flow.dimension())).bits;
}

namespace detail {

inline void check_slot_alignment(const Flow& flow, double dt) {
  const auto& c = flow.compressor();
  if (!c || c->kind() != CompressorKind::ScalarizedCycling) return;
  const double ratio = c->slot() / dt;
  if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw DomainError("cycling slot " + std::to_string(c->slot()) +
                      " is not an integer multiple of dt " + std::to_string(dt));
  }
}

}  // namespace detail

// state_{k+1} = state_k + dt * rhs(state_k, k * dt). Logs step 0, every
// log_every-th step and the final step. Halts early once the error exceeds
// 1e12 or stops being finite.
inline TrajectoryLog integrate(const Flow& flow, const Vector& initial_state,
                               const SimConfig& cfg) {
  cfg.validate();
  detail::check_slot_alignment(flow, cfg.dt);
  if (initial_state.size() != flow.state_size()) {
    throw DimensionError("initial state length " + std::to_string(initial_state.size()) +
                         " != " + std::to_string(flow.state_size()));
  }
  if (!initial_state.allFinite()) throw DomainError("initial state is not finite");

  const auto& p = flow.problem();
  const int n = p.agents();
  const int d = p.dimension();
  const Eigen::Index nd = flow.block_size();
  const std::uint64_t bits_per_step = static_cast<std::uint64_t>(n) * bits_per_message(flow);
  const long steps = cfg.steps();

  TrajectoryLog log;
  const auto reserve = static_cast<std::size_t>(steps / cfg.log_every + 2);
  log.times.reserve(reserve);
  log.errors.reserve(reserve);
  log.consensus_errors.reserve(reserve);
  log.v_sums.reserve(reserve);
  log.cumulative_bits.reserve(reserve);

  auto record = [&](long k, const Vector& state, double error) {
    const Vector x = state.segment(0, nd);
    log.times.push_back(static_cast<double>(k) * cfg.dt);
    log.errors.push_back(error);
    log.consensus_errors.push_back((x - consensus_project(x, n, d)).squaredNorm());
    Eigen::Map<const Matrix> v(state.data() + nd, d, n);
    log.v_sums.push_back(v.rowwise().sum().norm());
    log.cumulative_bits.push_back(static_cast<std::uint64_t>(k) * bits_per_step);
  };

  Vector state = initial_state;
  record(0, state, global_error(p, state.segment(0, nd)));
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state += cfg.dt * flow(state, t);
    const long done = k + 1;
    const double error = global_error(p, state.segment(0, nd));
    if (!std::isfinite(error) || error > kDivergenceThreshold) {
      log.diverged = true;
      record(done, state, error);
      break;
    }
    if (done % cfg.log_every == 0 || done == steps) record(done, state, error);
  }
  return log;
}

// x(0) = x0 with every other block zero.
inline TrajectoryLog integrate(const Flow& flow, const SimConfig& cfg, const Vector& x0) {
  return integrate(flow, flow.initial_state(x0), cfg);
}

struct RateWindow {
  double start = 0.0;
  double end = 0.0;
};

struct RateFit {
  double rate = 0.0;       // -slope of ln(error) vs t, 1/seconds
  double r_squared = 0.0;  // in [0, 1]
  RateWindow window;       // window actually used (may be shrunk)
  int points = 0;
  bool saturated = false;  // constant series, or window shrunk at machine-precision zeros
};

inline constexpr int kMinFitPoints = 10;

// Least-squares line through (t, ln error) for logged points with t in
// [window.start, window.end]. Points after the first nonpositive error are
// dropped (the run reached exact zero); fewer than 10 usable points is an error.
inline RateFit fit_rate(const TrajectoryLog& log, RateWindow window) {
  if (!(window.end > window.start)) throw DomainError("fit window must have end > start");
  std::vector<double> ts;
  std::vector<double> ys;
  RateFit fit;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const double t = log.times[i];
    if (t < window.start - 1e-12 || t > window.end + 1e-12) continue;
    const double e = log.errors[i];
    if (!(e > 0.0) || !std::isfinite(e)) {
      fit.saturated = true;
      break;
    }
    ts.push_back(t);
    ys.push_back(std::log(e));
  }
  if (static_cast<int>(ts.size()) < kMinFitPoints) {
    throw DomainError("fit window [" + std::to_string(window.start) + ", " +
                      std::to_string(window.end) + "] has " + std::to_string(ts.size()) +
                      " usable points, need at least " + std::to_string(kMinFitPoints));
  }
  const double m = static_cast<double>(ts.size());
  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    y_mean += ys[i];
  }
  t_mean /= m;
  y_mean /= m;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double dt = ts[i] - t_mean;
    const double dy = ys[i] - y_mean;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.window = {ts.front(), ts.back()};
  fit.points = static_cast<int>(ts.size());
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  if (*lo == *hi || syy <= 1e-300) {
    fit.rate = 0.0;
    fit.r_squared = 0.0;
    fit.saturated = true;
  } else {
    fit.r_squared = std::clamp(sty * sty / (stt * syy), 0.0, 1.0);
  }
  return fit;
}

// CSV with header `t,error,consensus_error,v_sum_norm,cumulative_bits`, 17
// significant digits for floating-point columns.
inline void write_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "t,error,consensus_error,v_sum_norm,cumulative_bits\n";
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  for (std::size_t i = 0; i < log.size(); ++i) {
    os << log.times[i] << ',' << log.errors[i] << ',' << log.consensus_errors[i] << ','
       << log.v_sums[i] << ',' << log.cumulative_bits[i] << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

}  // namespace stcomp
