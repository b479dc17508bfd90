#pragma once

// Numerical certification of the ST-compressor properties:
//   linear growth      |C(x, t)| <= L_c |x|
//   contractivity      |C(x)/r - x|^2 <= (1 - phi) |x|^2
//   exponential decay  x' = -C(x, t) driven to 1% of |x0| by forward Euler
//
// The checks are templates over any CompressionMap so that deliberately broken
// maps can be certified (and rejected) through the same code path.

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stcomp/compressor.hpp"
#include "stcomp/errors.hpp"

namespace stcomp {

template <class C>
concept CompressionMap = requires(const C& c, const Vector& x, double t) {
  { c.dimension() } -> std::convertible_to<int>;
  { c(x, t) } -> std::convertible_to<Vector>;
};

namespace detail {

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline std::string describe(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ')';
  return os.str();
}

// Time window sampled by the randomized checks: long enough to visit every
// slot of a periodic schedule several times.
template <class C>
double sampling_horizon(const C& c) {
  if constexpr (std::same_as<C, Compressor>) {
    if (c.kind() == CompressorKind::ScalarizedCycling) return 10.0 * c.dimension() * c.slot();
    if (c.kind() == CompressorKind::ScalarizedCustom) return 10.0 * c.period();
  }
  return 100.0;
}

}  // namespace detail

// C(x, t) = gain * x + offset * 1. Not a compressor for offset != 0; kept as a
// negative fixture for the certification checks.
class AffineMap {
 public:
  AffineMap(int d, double gain, double offset) : d_(d), gain_(gain), offset_(offset) {
    if (d < 1) throw DimensionError("affine map dimension must be >= 1");
  }

  int dimension() const noexcept { return d_; }
  double gain() const noexcept { return gain_; }
  double offset() const noexcept { return offset_; }

  Vector operator()(const Vector& x, double /*t*/) const {
    if (x.size() != d_) throw DimensionError("affine map input has wrong length");
    return (gain_ * x.array() + offset_).matrix();
  }

 private:
  int d_;
  double gain_;
  double offset_;
};

struct GrowthCertificate {
  double estimate = 0.0;  // max sampled |C(x,t)| / |x|
  double bound = 0.0;     // analytic L_c the estimate was checked against
  int samples = 0;
};

template <CompressionMap C>
GrowthCertificate certify_linear_growth(const C& c, double bound, int samples,
                                        std::uint64_t seed) {
  if (samples < 100) throw DomainError("certify_linear_growth needs at least 100 samples");
  const int d = c.dimension();
  const double horizon = detail::sampling_horizon(c);

  // C(0, t) = 0 is implied by the growth bound; check it explicitly first.
  const Vector origin = Vector::Zero(d);
  const Vector at_origin = c(origin, 0.0);
  if (at_origin.norm() != 0.0) {
    throw CertificationError("linear growth violated: C(0, 0) = " + detail::describe(at_origin) +
                                 " is nonzero",
                             detail::to_std(origin), 0.0, std::numeric_limits<double>::infinity());
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> when(0.0, horizon);
  GrowthCertificate cert{0.0, bound, samples};
  Vector x(d);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < d; ++i) x(i) = normal(rng);
    const double t = when(rng);
    const double norm = x.norm();
    if (norm == 0.0) continue;
    const double ratio = c(x, t).norm() / norm;
    if (!std::isfinite(ratio) || ratio > bound * (1.0 + 1e-12)) {
      throw CertificationError("linear growth violated: |C(x,t)|/|x| = " + std::to_string(ratio) +
                                   " > L_c = " + std::to_string(bound) + " at x = " +
                                   detail::describe(x) + ", t = " + std::to_string(t),
                               detail::to_std(x), t, ratio);
    }
    cert.estimate = std::max(cert.estimate, ratio);
  }
  return cert;
}

inline GrowthCertificate certify_linear_growth(const Compressor& c, int samples,
                                               std::uint64_t seed) {
  return certify_linear_growth(c, c.growth_bound(), samples, seed);
}

struct ContractionCertificate {
  double r = 1.0;
  double phi = 0.0;  // min sampled 1 - |C(x)/r - x|^2 / |x|^2
  int samples = 0;
};

template <CompressionMap C>
ContractionCertificate certify_contractive(const C& c, double r, int samples,
                                           std::uint64_t seed) {
  if (samples < 1000) throw DomainError("certify_contractive needs at least 1000 samples");
  if (!(r > 0.0)) throw DomainError("certify_contractive needs r > 0");
  const int d = c.dimension();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ContractionCertificate cert{r, 1.0, samples};
  Vector witness;
  Vector x(d);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < d; ++i) x(i) = normal(rng);
    const double energy = x.squaredNorm();
    if (energy == 0.0) continue;
    const double phi = 1.0 - (c(x, 0.0) / r - x).squaredNorm() / energy;
    if (phi < cert.phi) {
      cert.phi = phi;
      witness = x;
    }
  }
  if (!(cert.phi > 0.0)) {
    throw CertificationError("contractivity violated for r = " + std::to_string(r) +
                                 ": phi = " + std::to_string(cert.phi) + " <= 0 at x = " +
                                 detail::describe(witness),
                             detail::to_std(witness), 0.0, cert.phi);
  }
  return cert;
}

inline ContractionCertificate certify_contractive(const Compressor& c, int samples,
                                                  std::uint64_t seed) {
  if (!c.is_contractive_kind()) {
    throw DomainError(std::string("contractivity applies to top-k and uniform-quantizer, not ") +
                      std::string(to_string(c.kind())));
  }
  return certify_contractive(c, c.r(), samples, seed);
}

struct DecayReport {
  double initial_norm = 0.0;
  double final_norm = 0.0;
  double slope = 0.0;  // least-squares d ln|x| / dt, negative when decaying
  double horizon = 0.0;
  double dt = 0.0;
  bool passed = false;
};

inline constexpr double kDecayThreshold = 0.01;

// Integrates x' = -C(x, t) by forward Euler from x0 and requires
// |x(horizon)| <= 1% of |x0|. Throws CertificationError when the norm does not
// decay; the error carries the final state and the ratio |x(T)| / |x0|.
template <CompressionMap C>
DecayReport certify_decay(const C& c, const Vector& x0, double horizon, double dt) {
  if (x0.size() != c.dimension()) {
    throw DimensionError("certify_decay: x0 length " + std::to_string(x0.size()) +
                         " != d = " + std::to_string(c.dimension()));
  }
  if (!(dt > 0.0) || dt > 0.01) throw DomainError("certify_decay needs 0 < dt <= 0.01");
  if (!(horizon >= dt)) throw DomainError("certify_decay needs horizon >= dt");
  if constexpr (std::same_as<C, Compressor>) {
    if (c.kind() == CompressorKind::ScalarizedCycling ||
        c.kind() == CompressorKind::ScalarizedCustom) {
      const double minimum = 100.0 * c.dimension() * dt;
      if (horizon < minimum * (1.0 - 1e-12)) {
        throw DomainError("certify_decay: horizon " + std::to_string(horizon) +
                          " shorter than 100*d*dt = " + std::to_string(minimum));
      }
    }
  }

  DecayReport report;
  report.initial_norm = x0.norm();
  report.horizon = horizon;
  report.dt = dt;
  const long steps = std::lround(horizon / dt);

  // running sums for the log-linear fit
  double sn = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  auto record = [&](double t, double norm) {
    if (norm <= 0.0 || !std::isfinite(norm)) return;
    const double y = std::log(norm);
    sn += 1.0;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  };

  Vector x = x0;
  record(0.0, report.initial_norm);
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    x -= dt * c(x, t);
    const double norm = x.norm();
    if (!std::isfinite(norm)) break;
    record(static_cast<double>(k + 1) * dt, norm);
    if (norm == 0.0) break;
  }
  report.final_norm = x.norm();
  const double denom = sn * stt - st * st;
  report.slope = (sn >= 2.0 && denom > 0.0) ? (sn * sty - st * sy) / denom : 0.0;
  report.passed = std::isfinite(report.final_norm) &&
                  report.final_norm <= kDecayThreshold * report.initial_norm;
  if (!report.passed) {
    throw CertificationError("decay not certified: |x(T)| / |x0| = " +
                                 std::to_string(report.final_norm / report.initial_norm) +
                                 " > " + std::to_string(kDecayThreshold) + " at T = " +
                                 std::to_string(horizon),
                             detail::to_std(x), horizon,
                             report.final_norm / report.initial_norm);
  }
  return report;
}

}  // namespace stcomp
