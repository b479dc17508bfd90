#pragma once

// Spatio-temporal compressors C(x_e, t): R^d x R_+ -> R^d.
//
// A compressor is an immutable value; time enters only through the argument
// of operator(), so compression is a pure function of (x_e, t).
//
//   identity             C(x, t) = x
//   scalarized-cycling   C(x, t) = x_i e_i, i = 1 + (floor(t / slot) mod d)
//   scalarized-custom    C(x, t) = psi(t) psi(t)^T x, psi cycling through a
//                        user schedule of (duration, unit direction) pairs
//   top-k                keeps the k entries of largest magnitude
//   uniform-quantizer    C(x) = (|x|_inf / 2) sgn(x), sgn(0) = 0

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stcomp/errors.hpp"
#include "stcomp/graph.hpp"

namespace stcomp {

enum class CompressorKind { Identity, ScalarizedCycling, ScalarizedCustom, TopK, UniformQuantizer };

inline std::string_view to_string(CompressorKind kind) {
  switch (kind) {
    case CompressorKind::Identity: return "identity";
    case CompressorKind::ScalarizedCycling: return "scalarized-cycling";
    case CompressorKind::ScalarizedCustom: return "scalarized-custom";
    case CompressorKind::TopK: return "top-k";
    case CompressorKind::UniformQuantizer: return "uniform-quantizer";
  }
  return "unknown";
}

inline std::optional<CompressorKind> parse_compressor_kind(std::string_view name) {
  for (auto kind : {CompressorKind::Identity, CompressorKind::ScalarizedCycling,
                    CompressorKind::ScalarizedCustom, CompressorKind::TopK,
                    CompressorKind::UniformQuantizer}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

struct DirectionSegment {
  double duration = 0.0;
  Vector direction;
};

// Slot and schedule boundaries are snapped with this relative slack so that
// t = k * dt lands in slot k even when k * dt / slot rounds just below k.
inline constexpr double kSlotSnap = 1e-9;
inline constexpr double kUnitTolerance = 1e-9;

struct MessageCost {
  std::uint64_t bits = 0;
};

class Compressor {
 public:
  static Compressor identity(int d) {
    check_dimension(d);
    Compressor c(CompressorKind::Identity, d);
    return c;
  }

  static Compressor cycling(int d, double slot) {
    check_dimension(d);
    if (!(slot > 0.0) || !std::isfinite(slot)) {
      throw DomainError("scalarized-cycling slot length must be positive");
    }
    Compressor c(CompressorKind::ScalarizedCycling, d);
    c.slot_ = slot;
    return c;
  }

  static Compressor custom(int d, std::vector<DirectionSegment> schedule) {
    check_dimension(d);
    if (schedule.empty()) throw DomainError("scalarized-custom schedule is empty");
    Compressor c(CompressorKind::ScalarizedCustom, d);
    for (std::size_t s = 0; s < schedule.size(); ++s) {
      const auto& seg = schedule[s];
      if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
        throw DomainError("schedule segment " + std::to_string(s) + " has nonpositive duration");
      }
      if (seg.direction.size() != d) {
        throw DimensionError("schedule segment " + std::to_string(s) + " direction has length " +
                             std::to_string(seg.direction.size()) + ", expected " +
                             std::to_string(d));
      }
      if (std::abs(seg.direction.norm() - 1.0) > kUnitTolerance) {
        throw DomainError("schedule segment " + std::to_string(s) +
                          " direction is not a unit vector");
      }
      c.period_ += seg.duration;
    }
    c.schedule_ = std::move(schedule);
    return c;
  }

  static Compressor top_k(int d, int k, double r = 1.0) {
    check_dimension(d);
    if (k < 1 || k > d) {
      throw DomainError("top-k needs 1 <= k <= d, got k = " + std::to_string(k) +
                        ", d = " + std::to_string(d));
    }
    check_scale(r);
    Compressor c(CompressorKind::TopK, d);
    c.k_ = k;
    c.r_ = r;
    return c;
  }

  // Default r = d/2: for d >= 4 the quantizer is not contractive with r = 1
  // (take x = e_1 + eps * 1), while r = d/2 guarantees phi >= 1/d^2.
  static Compressor quantizer(int d, std::optional<double> r = std::nullopt) {
    check_dimension(d);
    const double scale = r.value_or(default_quantizer_scale(d));
    check_scale(scale);
    Compressor c(CompressorKind::UniformQuantizer, d);
    c.r_ = scale;
    return c;
  }

  static double default_quantizer_scale(int d) { return 0.5 * d; }

  CompressorKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return d_; }
  int k() const noexcept { return k_; }
  double slot() const noexcept { return slot_; }
  double r() const noexcept { return r_; }
  double period() const noexcept { return period_; }
  const std::vector<DirectionSegment>& schedule() const noexcept { return schedule_; }

  // True iff C(., t) is linear for every t.
  bool is_linear() const noexcept {
    return kind_ == CompressorKind::Identity || kind_ == CompressorKind::ScalarizedCycling ||
           kind_ == CompressorKind::ScalarizedCustom;
  }

  bool is_contractive_kind() const noexcept {
    return kind_ == CompressorKind::TopK || kind_ == CompressorKind::UniformQuantizer;
  }

  // Analytic linear-growth constant L_c with |C(x, t)| <= L_c |x|.
  double growth_bound() const noexcept {
    return kind_ == CompressorKind::UniformQuantizer ? 2.0 * r_ : 1.0;
  }

  // 0-based coordinate active at time t for the cycling kind.
  int active_coordinate(double t) const {
    const double slots = std::floor(t / slot_ + kSlotSnap);
    return static_cast<int>(std::fmod(slots, static_cast<double>(d_)));
  }

  // Active unit direction of a custom schedule at time t.
  const Vector& active_direction(double t) const {
    double tau = std::fmod(t, period_);
    if (period_ - tau <= kSlotSnap * period_) tau = 0.0;
    double start = 0.0;
    for (const auto& seg : schedule_) {
      const double end = start + seg.duration;
      if (tau < end - kSlotSnap * period_) return seg.direction;
      start = end;
    }
    return schedule_.back().direction;
  }

  Vector operator()(const Vector& x, double t) const {
    if (x.size() != d_) {
      throw DimensionError("compress: input length " + std::to_string(x.size()) + " != d = " +
                           std::to_string(d_));
    }
    if (!(t >= 0.0)) throw DomainError("compress: time must be nonnegative");
    Vector out = Vector::Zero(d_);
    compress_into(x, t, out);
    return out;
  }

  // Unchecked variant for the flow inner loops; `out` must have length d.
  template <class In, class Out>
  void compress_into(const In& x, double t, Out&& out) const {
    switch (kind_) {
      case CompressorKind::Identity:
        out = x;
        break;
      case CompressorKind::ScalarizedCycling: {
        out.setZero();
        const int i = active_coordinate(t);
        out(i) = x(i);
        break;
      }
      case CompressorKind::ScalarizedCustom: {
        const Vector& psi = active_direction(t);
        out = psi * psi.dot(x);
        break;
      }
      case CompressorKind::TopK: {
        out.setZero();
        std::vector<int> order(static_cast<std::size_t>(d_));
        std::iota(order.begin(), order.end(), 0);
        // larger magnitude first, lower index wins ties
        std::partial_sort(order.begin(), order.begin() + k_, order.end(),
                          [&x](int a, int b) {
                            const double ma = std::abs(x(a));
                            const double mb = std::abs(x(b));
                            return ma > mb || (ma == mb && a < b);
                          });
        for (int s = 0; s < k_; ++s) out(order[s]) = x(order[s]);
        break;
      }
      case CompressorKind::UniformQuantizer: {
        const double half_max = 0.5 * x.cwiseAbs().maxCoeff();
        for (int i = 0; i < d_; ++i) {
          const double v = x(i);
          out(i) = v > 0.0 ? half_max : (v < 0.0 ? -half_max : 0.0);
        }
        break;
      }
    }
  }

 private:
  Compressor(CompressorKind kind, int d) : kind_(kind), d_(d) {}

  static void check_dimension(int d) {
    if (d < 1) throw DomainError("compressor dimension must be >= 1");
  }
  static void check_scale(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("compressor scale r must be positive");
  }

  CompressorKind kind_;
  int d_;
  int k_ = 0;
  double slot_ = 0.0;
  double r_ = 1.0;
  double period_ = 0.0;
  std::vector<DirectionSegment> schedule_;
};

inline Vector compress(const Compressor& c, const Vector& x, double t) { return c(x, t); }

// Bits for one broadcast of one agent's message.
//   scalarized: one 64-bit scalar (receiver knows psi(t))
//   top-k:      k * (64-bit value + ceil(log2 d)-bit index)
//   quantizer:  one 64-bit scale + d ternary signs at 2 bits each
//   identity:   d 64-bit values
inline MessageCost message_cost(const Compressor& c) {
  const auto d = static_cast<std::uint64_t>(c.dimension());
  switch (c.kind()) {
    case CompressorKind::ScalarizedCycling:
    case CompressorKind::ScalarizedCustom:
      return {64};
    case CompressorKind::TopK: {
      std::uint64_t index_bits = 0;
      while ((std::uint64_t{1} << index_bits) < d) ++index_bits;
      return {static_cast<std::uint64_t>(c.k()) * (64 + index_bits)};
    }
    case CompressorKind::UniformQuantizer:
      return {64 + 2 * d};
    case CompressorKind::Identity:
      return {64 * d};
  }
  return {64 * d};
}

}  // namespace stcomp
