#pragma once

// Parameter-range calculator for the two convergence theorems.
//
// Given graph constants (lambda_2, lambda_n), problem constants (L_f, mu_n)
// and user-supplied converse-Lyapunov constants c1..c4 (plus a_m, the bound on
// the linear compressor map), evaluates the auxiliary xi-constants and the
// admissible upper bounds on (alpha, beta, eta) together with the implied
// exponential rate gamma. This is a diagnostic: c1..c4 are not computable from
// the flow, so the ranges are only as good as the constants fed in.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stcomp/errors.hpp"
#include "stcomp/flow.hpp"

namespace stcomp {

struct LyapunovConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double a_m = 0.0;

  void validate() const {
    for (auto [name, value] : {std::pair{"c1", c1}, std::pair{"c2", c2}, std::pair{"c3", c3},
                               std::pair{"c4", c4}, std::pair{"a_m", a_m}}) {
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string("Lyapunov constant ") + name + " must be positive");
      }
    }
    if (c1 > c2) throw DomainError("Lyapunov constants need c1 <= c2");
  }
};

struct SystemConstants {
  double lipschitz = 0.0;  // L_f
  double lambda2 = 0.0;
  double lambda_n = 0.0;
  double mu_n = 0.0;       // mu / n

  void validate() const {
    for (auto [name, value] : {std::pair{"L_f", lipschitz}, std::pair{"lambda2", lambda2},
                               std::pair{"lambda_n", lambda_n}, std::pair{"mu_n", mu_n}}) {
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be positive");
      }
    }
  }
};

// Named xi-constants in evaluation order.
class XiBundle {
 public:
  int theorem = 1;
  double r = 0.0;
  std::optional<double> theta;  // 2 + 2 L_c^2, theorem 2 only
  SystemConstants system;

  void set(std::string name, double value) { values_.emplace_back(std::move(name), value); }

  double at(std::string_view name) const {
    for (const auto& [key, value] : values_) {
      if (key == name) return value;
    }
    throw std::out_of_range("no xi constant named " + std::string(name));
  }

  const std::vector<std::pair<std::string, double>>& values() const noexcept { return values_; }

 private:
  std::vector<std::pair<std::string, double>> values_;
};

// Constants for the direct-compression flow (linear compressor).
inline XiBundle xi_theorem1(const SystemConstants& s, const LyapunovConstants& k) {
  s.validate();
  k.validate();
  const double lf2 = s.lipschitz * s.lipschitz;
  const double lf4 = lf2 * lf2;
  const double l2 = s.lambda2;
  const double l2sq = l2 * l2;

  const double xi0 = 2.0 * lf4 / (l2 * s.mu_n) + lf4 / (l2sq * s.mu_n) + lf2 / (4.0 * s.mu_n);
  const double xi1 = k.a_m + 0.5 + 5.0 * lf2 / 8.0;
  const double xi2 = 2.0 * k.c4;
  const double xi3 = 0.75;
  const double xi4 = 4.0 / l2;
  const double xi5 = k.c4 * s.lambda_n;
  const double xi6 = lf2 / (2.0 * l2sq) + lf2 / l2;
  const double xi1p = xi1 + k.c4 * lf2 + xi0 * lf2 / s.mu_n + lf2 / 8.0 + lf4 / (2.0 * l2sq) +
                      lf4 / l2;

  XiBundle b;
  b.theorem = 1;
  b.system = s;
  b.set("xi0", xi0);
  b.set("xi1", xi1);
  b.set("xi1'", xi1p);
  b.set("xi2", xi2);
  b.set("xi3", xi3);
  b.set("xi4", xi4);
  b.set("xi5", xi5);
  b.set("xi6", xi6);
  b.r = std::min(xi3 / (2.0 * xi5), 1.0);
  return b;
}

// Constants for the error-compensated flow; `growth` is the compressor's L_c.
inline XiBundle xi_theorem2(const SystemConstants& s, double growth, const LyapunovConstants& k) {
  s.validate();
  k.validate();
  if (!(growth > 0.0) || !std::isfinite(growth)) throw DomainError("L_c must be positive");
  const double lf2 = s.lipschitz * s.lipschitz;
  const double lf4 = lf2 * lf2;
  const double l2 = s.lambda2;
  const double l2sq = l2 * l2;
  const double ln = s.lambda_n;
  const double theta = 2.0 + 2.0 * growth * growth;

  const double xi0 = 8.0 * lf4 / (l2 * s.mu_n) + lf4 / (l2sq * s.mu_n) + lf2 / (4.0 * s.mu_n);
  const double xi1 = 0.5 * l2;
  const double xi2 = 1.0 + 9.0 * lf2 / 8.0;
  const double xi3 = 2.0 * k.c4 * ln * ln;
  const double xi4 = 9.0 / 4.0;
  const double xi5 = 0.5;
  const double xi6 = 4.0 / l2;
  const double xi7 = k.c4 * ln;
  const double xi8 = 3.0 * k.c4;
  const double xi9 = theta * (1.5 * ln + 8.0 * lf4 / l2 + 2.0 + 2.0 * k.c4 * ln * ln);
  const double xi10 = 4.0 * lf4 / l2 + lf4 / (2.0 * l2sq);
  const double xi2p = xi2 + 4.0 * lf4 / l2 + lf4 / (2.0 * l2sq);

  XiBundle b;
  b.theorem = 2;
  b.system = s;
  b.theta = theta;
  b.set("xi0", xi0);
  b.set("xi1", xi1);
  b.set("xi2", xi2);
  b.set("xi2'", xi2p);
  b.set("xi3", xi3);
  b.set("xi4", xi4);
  b.set("xi5", xi5);
  b.set("xi6", xi6);
  b.set("xi7", xi7);
  b.set("xi8", xi8);
  b.set("xi9", xi9);
  b.set("xi10", xi10);
  b.r = std::min({xi1 / (2.0 * xi3), xi5 / (2.0 * xi7), 1.0});
  return b;
}

struct ParameterBounds {
  int theorem = 1;
  double alpha_max = 0.0;  // theorem 1 pins alpha = 1
  bool alpha_fixed = false;
  double beta_max = 0.0;
  double eta_max = 0.0;
  double gamma = 0.0;      // rate at the evaluated gains
  FlowParams evaluated_at;  // gains at which dependent bounds and gamma were evaluated
  std::vector<std::string> flags;  // gains outside their ranges
  std::vector<std::string> notes;
};

namespace detail {

inline double min_of(std::initializer_list<double> xs) { return std::min(xs); }

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void flag_excess(ParameterBounds& out, const FlowParams& gains) {
  auto check = [&](const char* name, double value, double bound) {
    if (value > bound * (1.0 + 1e-12)) {
      out.flags.push_back(std::string(name) + " = " + detail::short_num(value) +
                          " exceeds bound " + detail::short_num(bound));
    }
  };
  if (out.alpha_fixed) {
    if (gains.alpha != 1.0) {
      out.flags.push_back("alpha = " + detail::short_num(gains.alpha) + " but theorem 1 fixes alpha = 1");
    }
  } else {
    check("alpha", gains.alpha, out.alpha_max);
  }
  check("beta", gains.beta, out.beta_max);
  check("eta", gains.eta, out.eta_max);
}

}  // namespace detail

// Evaluates the admissible ranges. Bounds on beta and eta depend on the other
// gains; without `gains` they are chained at the largest admissible values,
// with `gains` they are evaluated at the supplied gains and any excess is
// flagged.
inline ParameterBounds bounds(const XiBundle& xi, const LyapunovConstants& k,
                              std::optional<FlowParams> gains = std::nullopt) {
  k.validate();
  if (gains) gains->validate();
  const double mu_n = xi.system.mu_n;
  ParameterBounds out;
  out.theorem = xi.theorem;

  if (xi.theorem == 1) {
    out.alpha_fixed = true;
    out.alpha_max = 1.0;
    out.beta_max = detail::min_of({k.c3 / (3.0 * xi.at("xi1'")), k.c3 * xi.r / (3.0 * xi.at("xi2")),
                                   k.c1 / 2.0});
    const double beta = gains ? gains->beta : out.beta_max;
    out.eta_max = detail::min_of({std::pow(beta, 5), beta, xi.at("xi3") / (4.0 * xi.at("xi4")), 1.0,
                                  std::sqrt(3.0 / (8.0 * xi.at("xi6")))});
    const double eta = gains ? gains->eta : out.eta_max;
    out.gamma = detail::min_of({k.c3 / (3.0 * beta), xi.at("xi3") * beta * beta, eta * mu_n / 2.0});
    out.evaluated_at = {1.0, beta, eta};
    out.notes.push_back("beta bound uses c1/2; the positivity argument in the proof states c1*lambda2/2 = " +
                        detail::short_num(k.c1 * xi.system.lambda2 / 2.0));
  } else if (xi.theorem == 2) {
    out.alpha_max = std::min(k.c3 * xi.r / (3.0 * xi.at("xi8")), k.c3 / (3.0 * xi.at("xi9")));
    const double alpha = gains ? gains->alpha : out.alpha_max;
    out.beta_max = std::min(alpha / 2.0, xi.at("xi1") * alpha / (4.0 * xi.at("xi4")));
    const double beta = gains ? gains->beta : out.beta_max;
    out.eta_max = detail::min_of({std::pow(beta, 5), beta, 1.0 / (alpha * alpha), 1.0,
                                  xi.at("xi1") / (8.0 * xi.at("xi2'")),
                                  xi.at("xi5") / (4.0 * xi.at("xi6")), 3.0 / (8.0 * xi.at("xi10"))});
    const double eta = gains ? gains->eta : out.eta_max;
    out.gamma = detail::min_of({xi.at("xi1") * alpha / 2.0, xi.at("xi5") * beta / 2.0,
                                k.c3 / (3.0 * k.c1), eta * mu_n / 2.0});
    out.evaluated_at = {alpha, beta, eta};
  } else {
    throw DomainError("theorem must be 1 or 2");
  }
  if (gains) detail::flag_excess(out, *gains);
  return out;
}

}  // namespace stcomp
