#pragma once

// Built-in experiments on the ring benchmark: 10 agents, d = 5,
// s* = [1, 3, -1, 4, 2], dt = 0.01, gains alpha = 1, beta = 0.5, eta = 0.1.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stcomp/experiment.hpp"

namespace stcomp {

struct PresetInfo {
  std::string name;
  std::string description;
};

namespace detail {

inline ExperimentConfig ring_benchmark(std::string name, FlowKind flow,
                                       std::optional<CompressorSpec> compressor) {
  ExperimentConfig cfg;
  cfg.name = std::move(name);
  cfg.graph.type = "ring";
  cfg.graph.n = 10;
  cfg.graph.weight = 1.0;
  cfg.problem.d = 5;
  cfg.problem.optimum = {1.0, 3.0, -1.0, 4.0, 2.0};
  cfg.problem.seed = 1;
  cfg.problem.scale = 2.0;
  cfg.flow = flow;
  cfg.params = {1.0, 0.5, 0.1};
  cfg.compressor = std::move(compressor);
  cfg.sim.dt = 0.01;
  cfg.sim.horizon = 50.0;
  cfg.sim.log_every = 10;
  cfg.sim.seed = 0;
  cfg.init = InitKind::Zero;
  cfg.fit = {5.0, 40.0};
  return cfg;
}

inline CompressorSpec cycling_spec() {
  CompressorSpec c;
  c.kind = "scalarized-cycling";
  c.slot = 0.01;
  return c;
}

inline CompressorSpec top_k_spec(int k) {
  CompressorSpec c;
  c.kind = "top-k";
  c.k = k;
  c.r = 1.0;
  return c;
}

inline CompressorSpec quantizer_spec() {
  CompressorSpec c;
  c.kind = "uniform-quantizer";
  return c;
}

}  // namespace detail

inline const std::vector<PresetInfo>& preset_list() {
  static const std::vector<PresetInfo> list{
      {"paper-baseline", "uncompressed primal-dual flow on the ring benchmark"},
      {"paper-dsstc-c1a", "direct compression, cycling scalarized compressor"},
      {"paper-dsstc-topk2", "direct compression, top-2 sparsifier (expected to lose convergence)"},
      {"paper-dsstc-c2b", "direct compression, uniform quantizer (expected to lose convergence)"},
      {"paper-dsetc-c1a", "error-compensated compression, cycling scalarized compressor"},
      {"paper-dsetc-topk2", "error-compensated compression, top-2 sparsifier"},
      {"paper-dsetc-c2b", "error-compensated compression, uniform quantizer"},
  };
  return list;
}

inline std::optional<ExperimentConfig> find_preset(std::string_view name) {
  using detail::ring_benchmark;
  const std::string n(name);
  if (name == "paper-baseline") return ring_benchmark(n, FlowKind::Baseline, std::nullopt);
  if (name == "paper-dsstc-c1a") return ring_benchmark(n, FlowKind::Dsstc, detail::cycling_spec());
  if (name == "paper-dsstc-topk2") return ring_benchmark(n, FlowKind::Dsstc, detail::top_k_spec(2));
  if (name == "paper-dsstc-c2b") return ring_benchmark(n, FlowKind::Dsstc, detail::quantizer_spec());
  if (name == "paper-dsetc-c1a") return ring_benchmark(n, FlowKind::Dsetc, detail::cycling_spec());
  if (name == "paper-dsetc-topk2") return ring_benchmark(n, FlowKind::Dsetc, detail::top_k_spec(2));
  if (name == "paper-dsetc-c2b") return ring_benchmark(n, FlowKind::Dsetc, detail::quantizer_spec());
  return std::nullopt;
}

}  // namespace stcomp
