#pragma once

// Resolved experiment descriptions: config <-> ExperimentConfig, single runs
// with summaries, and parameter sweeps.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stcomp/compressor.hpp"
#include "stcomp/config.hpp"
#include "stcomp/errors.hpp"
#include "stcomp/flow.hpp"
#include "stcomp/graph.hpp"
#include "stcomp/problem.hpp"
#include "stcomp/sim.hpp"

namespace stcomp {

struct GraphSpec {
  std::string type = "ring";  // ring | complete | edges
  int n = 10;
  double weight = 1.0;
  std::vector<Edge> edges;

  Graph build() const {
    if (type == "ring") return build_ring(n, weight);
    if (type == "complete") return build_complete(n, weight);
    if (type == "edges") return build_from_edges(n, edges);
    throw ConfigError("unknown graph type '" + type + "'");
  }
};

struct ProblemSpec {
  int d = 5;
  std::vector<double> optimum{1.0, 3.0, -1.0, 4.0, 2.0};
  std::uint64_t seed = 1;
  double scale = 1.0;
  std::optional<Matrix> rows;  // explicit H (n x d)
  std::optional<Vector> offsets;

  QuadraticProblem build(int n) const {
    const Vector s = Eigen::Map<const Vector>(optimum.data(), static_cast<Eigen::Index>(optimum.size()));
    if (rows) {
      if (rows->rows() != n) {
        throw ConfigError("problem.rows has " + std::to_string(rows->rows()) +
                          " rows but the graph has " + std::to_string(n) + " nodes");
      }
      Vector b = offsets ? *offsets : Vector(*rows * s);
      return QuadraticProblem(*rows, std::move(b), s);
    }
    return generate_problem(n, d, s, seed, scale);
  }
};

struct CompressorSpec {
  std::string kind = "identity";
  int k = 1;
  std::optional<double> slot;  // cycling; defaults to sim.dt
  std::optional<double> r;
  std::vector<DirectionSegment> schedule;
  double gain = 2.0;  // affine fixture only
  double offset = 1.0;

  Compressor build(int d, double sim_dt) const {
    if (kind == "affine") {
      throw ConfigError("compressor kind 'affine' is a certification fixture and cannot drive a flow");
    }
    const auto parsed = parse_compressor_kind(kind);
    if (!parsed) throw ConfigError("unknown compressor kind '" + kind + "'");
    switch (*parsed) {
      case CompressorKind::Identity: return Compressor::identity(d);
      case CompressorKind::ScalarizedCycling: return Compressor::cycling(d, slot.value_or(sim_dt));
      case CompressorKind::ScalarizedCustom: return Compressor::custom(d, schedule);
      case CompressorKind::TopK: return Compressor::top_k(d, k, r.value_or(1.0));
      case CompressorKind::UniformQuantizer: return Compressor::quantizer(d, r);
    }
    throw ConfigError("unknown compressor kind '" + kind + "'");
  }
};

enum class InitKind { Zero, Random };

struct ExperimentConfig {
  std::string name;
  GraphSpec graph;
  ProblemSpec problem;
  FlowKind flow = FlowKind::Baseline;
  FlowParams params;
  std::optional<CompressorSpec> compressor;
  SimConfig sim;
  InitKind init = InitKind::Zero;
  double init_scale = 1.0;
  RateWindow fit{5.0, 40.0};
};

// Fully built objects for one experiment. Graph and problem are owned here so
// that the Flow's references stay valid.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg)
      : cfg_(std::move(cfg)),
        graph_(cfg_.graph.build()),
        problem_(cfg_.problem.build(graph_.size())),
        flow_(cfg_.flow, graph_, problem_, cfg_.params, build_compressor()) {}

  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const Graph& graph() const noexcept { return graph_; }
  const QuadraticProblem& problem() const noexcept { return problem_; }
  const Flow& flow() const noexcept { return flow_; }

  Vector initial_x() const {
    const Eigen::Index nd = flow_.block_size();
    if (cfg_.init == InitKind::Zero) return Vector::Zero(nd);
    std::mt19937_64 rng(cfg_.sim.seed);
    std::normal_distribution<double> normal(0.0, cfg_.init_scale);
    Vector x(nd);
    for (Eigen::Index i = 0; i < nd; ++i) x(i) = normal(rng);
    return x;
  }

  TrajectoryLog run() const { return integrate(flow_, cfg_.sim, initial_x()); }

 private:
  std::optional<Compressor> build_compressor() const {
    if (!needs_compressor(cfg_.flow)) {
      if (cfg_.compressor) throw ConfigError("flow 'baseline' does not take a compressor");
      return std::nullopt;
    }
    if (!cfg_.compressor) {
      throw ConfigError("flow '" + std::string(to_string(cfg_.flow)) + "' requires a [compressor] table");
    }
    return cfg_.compressor->build(cfg_.problem.d, cfg_.sim.dt);
  }

  ExperimentConfig cfg_;
  Graph graph_;
  QuadraticProblem problem_;
  Flow flow_;
};

struct RunSummary {
  double initial_error = 0.0;
  double final_error = 0.0;
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  bool saturated = false;
  bool diverged = false;
  std::uint64_t total_bits = 0;
  double final_time = 0.0;
  double max_v_sum = 0.0;
};

inline RunSummary summarize(const TrajectoryLog& log, RateWindow window) {
  RunSummary s;
  if (log.size() == 0) return s;
  s.initial_error = log.errors.front();
  s.final_error = log.errors.back();
  s.diverged = log.diverged;
  s.total_bits = log.cumulative_bits.back();
  s.final_time = log.times.back();
  for (double v : log.v_sums) s.max_v_sum = std::max(s.max_v_sum, v);
  if (!log.diverged) {
    try {
      const RateFit fit = fit_rate(log, window);
      s.fitted_rate = fit.rate;
      s.r_squared = fit.r_squared;
      s.saturated = fit.saturated;
    } catch (const DomainError&) {
      // too few usable points; rate stays NaN
    }
  }
  return s;
}

struct RunResult {
  TrajectoryLog log;
  RunSummary summary;
  std::optional<std::string> warning;
};

inline RunResult run_experiment(const ExperimentConfig& cfg) {
  Experiment exp(cfg);
  RunResult result;
  result.log = exp.run();
  result.summary = summarize(result.log, cfg.fit);
  result.warning = exp.flow().warning();
  return result;
}

namespace detail {

inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  std::string s = os.str();
  // keep floats recognisable as floats when read back
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

inline std::string fmt_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out + "]";
}

inline std::string fmt_vector(const Vector& v) {
  return fmt_array(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace detail

inline void write_summary(std::ostream& os, const RunSummary& s) {
  os << "final_error = " << detail::fmt(s.final_error) << '\n'
     << "fitted_rate = " << detail::fmt(s.fitted_rate) << '\n'
     << "r_squared = " << detail::fmt(s.r_squared) << '\n'
     << "diverged = " << (s.diverged ? "true" : "false") << '\n'
     << "total_bits = " << s.total_bits << '\n'
     << "initial_error = " << detail::fmt(s.initial_error) << '\n'
     << "final_time = " << detail::fmt(s.final_time) << '\n'
     << "max_v_sum_norm = " << detail::fmt(s.max_v_sum) << '\n'
     << "fit_saturated = " << (s.saturated ? "true" : "false") << '\n';
}

// ---------------------------------------------------------------------------
// config document -> ExperimentConfig

inline ExperimentConfig experiment_from_document(const ConfigDocument& doc) {
  ExperimentConfig cfg;
  for (const auto& key : doc.keys()) {
    const auto dot = key.find('.');
    const std::string table = dot == std::string::npos ? "" : key.substr(0, dot);
    static const std::set<std::string> known{"graph", "problem", "flow", "compressor",
                                             "sim", "sweep", "bounds", "certify", "manifest"};
    if (table.empty()) {
      if (key != "name") throw ConfigError("unknown top-level key '" + key + "'", doc.find(key)->line);
      continue;
    }
    if (!known.count(table)) {
      throw ConfigError("unknown table '[" + table + "]'", doc.find(key)->line);
    }
  }
  cfg.name = doc.string("name", "");

  doc.check_keys("graph", {"type", "n", "weight", "edges"});
  cfg.graph.type = doc.string("graph.type", "ring");
  cfg.graph.n = static_cast<int>(doc.integer("graph.n", 10));
  cfg.graph.weight = doc.number("graph.weight", 1.0);
  if (const auto* edges = doc.find("graph.edges")) {
    for (const auto& e : ConfigDocument::as_array(*edges, "graph.edges")) {
      const auto triple = ConfigDocument::as_numbers(e, "graph.edges");
      if (triple.size() != 3 && triple.size() != 2) {
        throw ConfigError("graph.edges entries must be [i, j, weight]", e.line);
      }
      cfg.graph.edges.push_back({static_cast<int>(triple[0]), static_cast<int>(triple[1]),
                                 triple.size() == 3 ? triple[2] : 1.0});
    }
  }
  if (cfg.graph.type == "edges" && cfg.graph.edges.empty()) {
    throw ConfigError("graph.type = \"edges\" needs a graph.edges list");
  }

  doc.check_keys("problem", {"n", "d", "optimum", "seed", "scale", "rows", "offsets"});
  if (doc.has("problem.optimum")) cfg.problem.optimum = doc.numbers("problem.optimum");
  cfg.problem.d = static_cast<int>(doc.integer("problem.d", static_cast<long long>(cfg.problem.optimum.size())));
  if (static_cast<int>(cfg.problem.optimum.size()) != cfg.problem.d) {
    throw ConfigError("problem.optimum has " + std::to_string(cfg.problem.optimum.size()) +
                          " entries but problem.d = " + std::to_string(cfg.problem.d),
                      doc.has("problem.d") ? doc.find("problem.d")->line : 0);
  }
  if (doc.has("problem.n") && doc.integer("problem.n") != cfg.graph.n) {
    throw ConfigError("problem.n must equal the graph node count", doc.find("problem.n")->line);
  }
  cfg.problem.seed = static_cast<std::uint64_t>(doc.integer("problem.seed", 1));
  cfg.problem.scale = doc.number("problem.scale", 1.0);
  if (const auto* rows = doc.find("problem.rows")) {
    const auto& list = ConfigDocument::as_array(*rows, "problem.rows");
    Matrix h(static_cast<Eigen::Index>(list.size()), cfg.problem.d);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto row = ConfigDocument::as_numbers(list[i], "problem.rows");
      if (static_cast<int>(row.size()) != cfg.problem.d) {
        throw ConfigError("problem.rows entries must have d entries", list[i].line);
      }
      for (int j = 0; j < cfg.problem.d; ++j) h(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
    }
    cfg.problem.rows = std::move(h);
  }
  if (doc.has("problem.offsets")) {
    if (!cfg.problem.rows) throw ConfigError("problem.offsets needs problem.rows", doc.find("problem.offsets")->line);
    const auto b = doc.numbers("problem.offsets");
    cfg.problem.offsets = Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
  }

  doc.check_keys("flow", {"kind", "alpha", "beta", "eta"});
  const std::string flow_name = doc.string("flow.kind", "baseline");
  const auto flow = parse_flow_kind(flow_name);
  if (!flow) {
    throw ConfigError("unknown flow '" + flow_name + "' (expected baseline, dsstc, dsetc, dsetc-filter)",
                      doc.find("flow.kind")->line);
  }
  cfg.flow = *flow;
  cfg.params.alpha = doc.number("flow.alpha", 1.0);
  cfg.params.beta = doc.number("flow.beta", 0.5);
  cfg.params.eta = doc.number("flow.eta", 0.1);

  doc.check_keys("compressor", {"kind", "k", "dt", "r", "schedule", "gain", "offset"});
  if (doc.has("compressor.kind")) {
    CompressorSpec c;
    c.kind = doc.string("compressor.kind");
    if (!parse_compressor_kind(c.kind) && c.kind != "affine") {
      throw ConfigError("unknown compressor kind '" + c.kind + "'", doc.find("compressor.kind")->line);
    }
    c.k = static_cast<int>(doc.integer("compressor.k", 1));
    if (doc.has("compressor.dt")) c.slot = doc.number("compressor.dt");
    if (doc.has("compressor.r")) c.r = doc.number("compressor.r");
    if (const auto* sched = doc.find("compressor.schedule")) {
      for (const auto& seg : ConfigDocument::as_array(*sched, "compressor.schedule")) {
        const auto& pair = ConfigDocument::as_array(seg, "compressor.schedule");
        if (pair.size() != 2) {
          throw ConfigError("schedule entries must be [duration, [unit vector]]", seg.line);
        }
        DirectionSegment s;
        s.duration = ConfigDocument::as_number(pair[0], "compressor.schedule");
        const auto dir = ConfigDocument::as_numbers(pair[1], "compressor.schedule");
        s.direction = Eigen::Map<const Vector>(dir.data(), static_cast<Eigen::Index>(dir.size()));
        if (std::abs(s.direction.norm() - 1.0) > kUnitTolerance) {
          throw ConfigError("schedule direction is not a unit vector (tolerance 1e-9)", seg.line);
        }
        c.schedule.push_back(std::move(s));
      }
    }
    c.gain = doc.number("compressor.gain", 2.0);
    c.offset = doc.number("compressor.offset", 1.0);
    cfg.compressor = std::move(c);
  } else if (!doc.keys_in("compressor").empty()) {
    throw ConfigError("[compressor] table needs a 'kind'");
  }

  doc.check_keys("sim", {"dt", "horizon", "log_every", "seed", "init", "init_scale", "fit_start", "fit_end"});
  cfg.sim.dt = doc.number("sim.dt", 0.01);
  cfg.sim.horizon = doc.number("sim.horizon", 50.0);
  cfg.sim.log_every = static_cast<int>(doc.integer("sim.log_every", 10));
  cfg.sim.seed = static_cast<std::uint64_t>(doc.integer("sim.seed", 0));
  const std::string init = doc.string("sim.init", "zero");
  if (init == "zero") {
    cfg.init = InitKind::Zero;
  } else if (init == "random") {
    cfg.init = InitKind::Random;
  } else {
    throw ConfigError("sim.init must be \"zero\" or \"random\"", doc.find("sim.init")->line);
  }
  cfg.init_scale = doc.number("sim.init_scale", 1.0);
  cfg.fit.start = doc.number("sim.fit_start", 5.0);
  cfg.fit.end = doc.number("sim.fit_end", 40.0);
  return cfg;
}

// Validates everything that can be checked without running: builds the graph,
// problem and flow once.
inline void validate_experiment(const ExperimentConfig& cfg) {
  if (cfg.compressor && cfg.compressor->kind == "affine") {
    throw ConfigError("compressor kind 'affine' is a certification fixture and cannot drive a flow");
  }
  cfg.sim.validate();
  Experiment exp(cfg);
  (void)exp;
}

// Resolved config text; parsing it back yields an identical ExperimentConfig.
inline std::string to_config_text(const ExperimentConfig& cfg) {
  using detail::fmt;
  std::ostringstream os;
  if (!cfg.name.empty()) os << "name = \"" << cfg.name << "\"\n\n";
  os << "[graph]\n"
     << "type = \"" << cfg.graph.type << "\"\n"
     << "n = " << cfg.graph.n << '\n';
  if (cfg.graph.type == "edges") {
    os << "edges = [";
    for (std::size_t i = 0; i < cfg.graph.edges.size(); ++i) {
      const auto& e = cfg.graph.edges[i];
      os << (i ? ", " : "") << '[' << e.from << ", " << e.to << ", " << fmt(e.weight) << ']';
    }
    os << "]\n";
  } else {
    os << "weight = " << fmt(cfg.graph.weight) << '\n';
  }

  os << "\n[problem]\n"
     << "d = " << cfg.problem.d << '\n'
     << "optimum = " << detail::fmt_array(cfg.problem.optimum) << '\n'
     << "seed = " << cfg.problem.seed << '\n'
     << "scale = " << fmt(cfg.problem.scale) << '\n';
  if (cfg.problem.rows) {
    os << "rows = [";
    for (Eigen::Index i = 0; i < cfg.problem.rows->rows(); ++i) {
      os << (i ? ",\n        " : "") << detail::fmt_vector(cfg.problem.rows->row(i).transpose());
    }
    os << "]\n";
    if (cfg.problem.offsets) os << "offsets = " << detail::fmt_vector(*cfg.problem.offsets) << '\n';
  }

  os << "\n[flow]\n"
     << "kind = \"" << to_string(cfg.flow) << "\"\n"
     << "alpha = " << fmt(cfg.params.alpha) << '\n'
     << "beta = " << fmt(cfg.params.beta) << '\n'
     << "eta = " << fmt(cfg.params.eta) << '\n';

  if (cfg.compressor) {
    const auto& c = *cfg.compressor;
    os << "\n[compressor]\n"
       << "kind = \"" << c.kind << "\"\n";
    if (c.kind == "top-k") os << "k = " << c.k << '\n';
    if (c.kind == "scalarized-cycling") os << "dt = " << fmt(c.slot.value_or(cfg.sim.dt)) << '\n';
    if (c.kind == "top-k") os << "r = " << fmt(c.r.value_or(1.0)) << '\n';
    if (c.kind == "uniform-quantizer") {
      os << "r = " << fmt(c.r.value_or(Compressor::default_quantizer_scale(cfg.problem.d))) << '\n';
    }
    if (c.kind == "affine") os << "gain = " << fmt(c.gain) << "\noffset = " << fmt(c.offset) << '\n';
    if (c.kind == "scalarized-custom") {
      os << "schedule = [";
      for (std::size_t i = 0; i < c.schedule.size(); ++i) {
        os << (i ? ", " : "") << '[' << fmt(c.schedule[i].duration) << ", "
           << detail::fmt_vector(c.schedule[i].direction) << ']';
      }
      os << "]\n";
    }
  }

  os << "\n[sim]\n"
     << "dt = " << fmt(cfg.sim.dt) << '\n'
     << "horizon = " << fmt(cfg.sim.horizon) << '\n'
     << "log_every = " << cfg.sim.log_every << '\n'
     << "seed = " << cfg.sim.seed << '\n'
     << "init = \"" << (cfg.init == InitKind::Zero ? "zero" : "random") << "\"\n"
     << "init_scale = " << fmt(cfg.init_scale) << '\n'
     << "fit_start = " << fmt(cfg.fit.start) << '\n'
     << "fit_end = " << fmt(cfg.fit.end) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// sweeps

struct GridAxis {
  std::string name;  // alpha | beta | eta | dt | horizon | k | r | seed
  std::vector<double> values;
};

struct SweepEntry {
  ExperimentConfig config;
  std::vector<std::pair<std::string, double>> point;
  std::optional<RunSummary> summary;
  std::optional<std::string> failure;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::vector<std::string> warnings;
};

inline void apply_grid_value(ExperimentConfig& cfg, const std::string& name, double value) {
  if (name == "alpha") {
    cfg.params.alpha = value;
  } else if (name == "beta") {
    cfg.params.beta = value;
  } else if (name == "eta") {
    cfg.params.eta = value;
  } else if (name == "dt") {
    cfg.sim.dt = value;
  } else if (name == "horizon") {
    cfg.sim.horizon = value;
  } else if (name == "k" || name == "r") {
    if (!cfg.compressor) throw ConfigError("sweep axis '" + name + "' needs a [compressor] table");
    if (name == "k") cfg.compressor->k = static_cast<int>(std::lround(value));
    if (name == "r") cfg.compressor->r = value;
  } else if (name == "seed") {
    cfg.sim.seed = static_cast<std::uint64_t>(std::llround(value));
  } else {
    throw ConfigError("unknown sweep axis '" + name + "'");
  }
}

// Cartesian product over `axes` (first axis varies slowest). Duplicate grid
// points are dropped with a warning. Entry j runs with sim seed base + j
// unless the grid has a seed axis. Per-run failures are recorded, not thrown.
inline SweepResult sweep(const ExperimentConfig& base, const std::vector<GridAxis>& axes) {
  if (axes.empty()) throw ConfigError("sweep grid is empty");
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.name + "' has no values");
    ExperimentConfig probe = base;
    apply_grid_value(probe, axis.name, axis.values.front());  // rejects unknown axis names
  }
  bool seeded_axis = false;
  for (const auto& axis : axes) seeded_axis = seeded_axis || axis.name == "seed";

  SweepResult result;
  std::vector<std::vector<double>> unique_values;
  for (const auto& axis : axes) {
    std::vector<double> unique;
    for (double v : axis.values) {
      if (std::find(unique.begin(), unique.end(), v) != unique.end()) {
        result.warnings.push_back("duplicate value " + detail::fmt(v) + " on sweep axis '" +
                                  axis.name + "' ignored");
        continue;
      }
      unique.push_back(v);
    }
    unique_values.push_back(std::move(unique));
  }

  std::size_t total = 1;
  for (const auto& vals : unique_values) total *= vals.size();
  for (std::size_t j = 0; j < total; ++j) {
    SweepEntry entry;
    entry.config = base;
    if (!seeded_axis) entry.config.sim.seed = base.sim.seed + j;
    std::size_t rem = j;
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      idx[a] = rem % unique_values[a].size();
      rem /= unique_values[a].size();
    }
    try {
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const double value = unique_values[a][idx[a]];
        entry.point.emplace_back(axes[a].name, value);
        apply_grid_value(entry.config, axes[a].name, value);
      }
      entry.summary = run_experiment(entry.config).summary;
    } catch (const std::exception& e) {
      entry.failure = e.what();
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

inline std::vector<GridAxis> grid_from_document(const ConfigDocument& doc) {
  std::vector<GridAxis> axes;
  for (const auto& key : doc.keys_in("sweep")) {
    const auto* v = doc.find("sweep." + key);
    GridAxis axis{key, v->is_array() ? ConfigDocument::as_numbers(*v, "sweep." + key)
                                     : std::vector<double>{ConfigDocument::as_number(*v, "sweep." + key)}};
    static const std::set<std::string> allowed{"alpha", "beta", "eta", "dt", "horizon", "k", "r", "seed"};
    if (!allowed.count(key)) throw ConfigError("unknown sweep axis '" + key + "'", v->line);
    axes.push_back(std::move(axis));
  }
  return axes;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "index,point,final_error,fitted_rate,r_squared,diverged,total_bits,status\n";
  for (std::size_t j = 0; j < result.entries.size(); ++j) {
    const auto& e = result.entries[j];
    std::string point;
    for (const auto& [name, value] : e.point) {
      point += (point.empty() ? "" : ";") + name + "=" + detail::fmt(value);
    }
    os << j << ',' << point << ',';
    if (e.summary) {
      os << detail::fmt(e.summary->final_error) << ',' << detail::fmt(e.summary->fitted_rate) << ','
         << detail::fmt(e.summary->r_squared) << ',' << (e.summary->diverged ? "true" : "false")
         << ',' << e.summary->total_bits << ",ok\n";
    } else {
      std::string why = e.failure.value_or("failed");
      for (char& c : why) {
        if (c == ',' || c == '\n') c = ' ';
      }
      os << "nan,nan,nan,false,0,error: " << why << '\n';
    }
  }
}

}  // namespace stcomp
