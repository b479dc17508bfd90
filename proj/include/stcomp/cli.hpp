#pragma once

// Command-line front end. Every subcommand returns a stable exit status:
//   0 success (a diverged run is still a success), 1 config error,
//   2 certification failure, 3 IO error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stcomp/certify.hpp"
#include "stcomp/config.hpp"
#include "stcomp/errors.hpp"
#include "stcomp/experiment.hpp"
#include "stcomp/presets.hpp"
#include "stcomp/tuning.hpp"

#ifndef STCOMP_VERSION
#define STCOMP_VERSION "0.0.0"
#endif

namespace stcomp::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kCertificationFailure = 2, kIoError = 3 };

struct Options {
  std::string command;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
};

namespace detail {

using stcomp::detail::fmt;

inline ConfigDocument load_document(const Options& opt) {
  if (opt.preset && opt.config) throw ConfigError("use either --preset or --config, not both");
  if (opt.preset) {
    const auto cfg = find_preset(*opt.preset);
    if (!cfg) throw ConfigError("unknown preset '" + *opt.preset + "' (see `stcomp presets`)");
    return ConfigDocument::parse(to_config_text(*cfg));
  }
  if (!opt.config) throw ConfigError("a --config <path> or --preset <name> is required");
  return ConfigDocument::load(*opt.config);
}

inline ExperimentConfig load_experiment(const Options& opt, const ConfigDocument& doc) {
  ExperimentConfig cfg = experiment_from_document(doc);
  if (opt.seed) {
    cfg.problem.seed = *opt.seed;
    cfg.sim.seed = *opt.seed;
  }
  return cfg;
}

inline std::filesystem::path prepare_out_dir(const Options& opt) {
  const std::filesystem::path dir = opt.out.value_or("out");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
  return dir;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

inline void finish_output(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Report lines are `key = value`, readable back as a config document.
class Report {
 public:
  void add(const std::string& key, const std::string& value) { lines_.push_back(key + " = " + value); }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add_int(const std::string& key, long long value) { add(key, std::to_string(value)); }
  void add_text(const std::string& key, const std::string& value) {
    std::string quoted;
    for (char c : value) quoted += (c == '"' || c == '\n') ? '\'' : c;
    add(key, "\"" + quoted + "\"");
  }
  void section(const std::string& name) { lines_.push_back("\n[" + name + "]"); }

  std::string str() const {
    std::string out;
    for (const auto& l : lines_) out += l + '\n';
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

inline void emit(const Report& report, const Options& opt, const std::string& file, std::ostream& out) {
  out << report.str();
  if (opt.out) {
    const auto dir = prepare_out_dir(opt);
    auto os = open_output(dir / file);
    os << report.str();
    finish_output(os, dir / file);
  }
}

}  // namespace detail

inline int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
  const ConfigDocument doc = detail::load_document(opt);
  const ExperimentConfig cfg = detail::load_experiment(opt, doc);
  validate_experiment(cfg);
  const auto dir = detail::prepare_out_dir(opt);

  const RunResult result = run_experiment(cfg);
  if (result.warning) err << "warning: " << *result.warning << '\n';

  const auto csv_path = dir / "trajectory.csv";
  const auto summary_path = dir / "summary.txt";
  const auto manifest_path = dir / "manifest.toml";
  {
    auto os = detail::open_output(csv_path);
    write_csv(os, result.log);
    detail::finish_output(os, csv_path);
  }
  {
    auto os = detail::open_output(summary_path);
    write_summary(os, result.summary);
    detail::finish_output(os, summary_path);
  }
  {
    auto os = detail::open_output(manifest_path);
    os << to_config_text(cfg) << "\n[manifest]\n"
       << "version = \"" << STCOMP_VERSION << "\"\n"
       << "timestamp = \"" << detail::utc_timestamp() << "\"\n"
       << "outputs = [\"trajectory.csv\", \"summary.txt\"]\n";
    detail::finish_output(os, manifest_path);
  }
  write_summary(out, result.summary);
  return kOk;
}

inline int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
  const ConfigDocument doc = detail::load_document(opt);
  const ExperimentConfig base = detail::load_experiment(opt, doc);
  const auto axes = grid_from_document(doc);
  if (axes.empty()) throw ConfigError("sweep needs a non-empty [sweep] table, e.g. eta = [0.05, 0.1]");
  const SweepResult result = sweep(base, axes);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  for (std::size_t j = 0; j < result.entries.size(); ++j) {
    if (result.entries[j].failure) err << "entry " << j << " failed: " << *result.entries[j].failure << '\n';
  }
  std::ostringstream csv;
  write_sweep_csv(csv, result);
  out << csv.str();
  if (opt.out) {
    const auto dir = detail::prepare_out_dir(opt);
    auto os = detail::open_output(dir / "sweep.csv");
    os << csv.str();
    detail::finish_output(os, dir / "sweep.csv");
  }
  return kOk;
}

// Certifies the [compressor] of the config. Settings live in [certify]:
// d, samples, seed, starts, dt, horizon (defaults 10000, 0, 20, 0.01, 100*d*dt).
inline int cmd_certify(const Options& opt, std::ostream& out, std::ostream& err) {
  const ConfigDocument doc = detail::load_document(opt);
  const ExperimentConfig cfg = detail::load_experiment(opt, doc);
  if (!cfg.compressor) throw ConfigError("certify needs a [compressor] table");
  doc.check_keys("certify", {"d", "samples", "seed", "starts", "dt", "horizon"});
  const int d = static_cast<int>(doc.integer("certify.d", cfg.problem.d));
  const int samples = static_cast<int>(doc.integer("certify.samples", 10000));
  const auto seed = static_cast<std::uint64_t>(doc.integer("certify.seed", opt.seed ? static_cast<long long>(*opt.seed) : 0));
  const int starts = static_cast<int>(doc.integer("certify.starts", 20));
  const double dt = doc.number("certify.dt", 0.01);
  const double horizon = doc.number("certify.horizon", 100.0 * d * dt);
  if (samples < 1000) throw ConfigError("certify.samples must be >= 1000");
  if (starts < 1) throw ConfigError("certify.starts must be >= 1");

  detail::Report report;
  report.add_text("compressor", cfg.compressor->kind);
  report.add_int("d", d);
  int failures = 0;
  auto fail = [&](const std::string& check, const CertificationError& e) {
    ++failures;
    report.add_text(check + "_failure", e.what());
    std::string witness = "[";
    for (std::size_t i = 0; i < e.witness().size(); ++i) {
      witness += (i ? ", " : "") + detail::fmt(e.witness()[i]);
    }
    report.add(check + "_witness", witness + "]");
    report.add(check + "_witness_time", e.witness_time());
  };

  auto certify_all = [&](const auto& map, double bound, std::optional<double> r) {
    try {
      const auto g = certify_linear_growth(map, bound, samples, seed);
      report.add("growth", std::string("\"pass\""));
      report.add("lc", g.bound);
      report.add("lc_estimate", g.estimate);
    } catch (const CertificationError& e) {
      report.add("growth", std::string("\"fail\""));
      fail("growth", e);
    }
    if (r) {
      try {
        const auto c = certify_contractive(map, *r, samples, seed + 1);
        report.add("contractive", std::string("\"pass\""));
        report.add("r", c.r);
        report.add("phi", c.phi);
      } catch (const CertificationError& e) {
        report.add("contractive", std::string("\"fail\""));
        fail("contractive", e);
      }
    }
    std::mt19937_64 rng(seed + 2);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    double worst_slope = -std::numeric_limits<double>::infinity();
    std::optional<CertificationError> first;
    int passed = 0;
    for (int s = 0; s < starts; ++s) {
      Vector x0(d);
      for (int i = 0; i < d; ++i) x0(i) = normal(rng);
      try {
        const auto rep = certify_decay(map, x0, horizon, dt);
        worst = std::max(worst, rep.final_norm / rep.initial_norm);
        worst_slope = std::max(worst_slope, rep.slope);
        ++passed;
      } catch (const CertificationError& e) {
        worst = std::max(worst, e.value());
        if (!first) first = e;
      }
    }
    report.add("decay", std::string(first ? "\"fail\"" : "\"pass\""));
    report.add("decay_horizon", horizon);
    report.add("decay_dt", dt);
    report.add_int("decay_starts_passed", passed);
    report.add_int("decay_starts", starts);
    report.add("decay_worst_ratio", worst);
    if (passed > 0) report.add("decay_worst_slope", worst_slope);
    if (first) fail("decay", *first);
  };

  if (cfg.compressor->kind == "affine") {
    certify_all(AffineMap(d, cfg.compressor->gain, cfg.compressor->offset),
                std::abs(cfg.compressor->gain), std::nullopt);
  } else {
    const Compressor c = cfg.compressor->build(d, cfg.sim.dt);
    std::optional<double> r;
    if (c.is_contractive_kind()) r = c.r();
    certify_all(c, c.growth_bound(), r);
  }
  report.add("status", std::string(failures ? "\"fail\"" : "\"pass\""));
  detail::emit(report, opt, "certify.txt", out);
  if (failures) {
    err << "certification failed (" << failures << " check" << (failures > 1 ? "s" : "") << ")\n";
    return kCertificationFailure;
  }
  return kOk;
}

// Reads [bounds] theorem, c1..c4, a_m (theorem 1) and lc or lc_report
// (theorem 2). Graph and problem constants come from the rest of the config.
inline int cmd_bounds(const Options& opt, std::ostream& out, std::ostream& /*err*/) {
  const ConfigDocument doc = detail::load_document(opt);
  const ExperimentConfig cfg = detail::load_experiment(opt, doc);
  doc.check_keys("bounds", {"theorem", "c1", "c2", "c3", "c4", "a_m", "lc", "lc_report"});
  const int theorem = static_cast<int>(doc.integer("bounds.theorem", 1));
  if (theorem != 1 && theorem != 2) {
    throw ConfigError("bounds.theorem must be 1 or 2", doc.find("bounds.theorem")->line);
  }
  auto required = [&](const std::string& key) {
    if (!doc.has("bounds." + key)) {
      throw ConfigError("constants required: missing key 'bounds." + key + "'");
    }
    return doc.number("bounds." + key);
  };
  LyapunovConstants k;
  k.c1 = required("c1");
  k.c2 = required("c2");
  k.c3 = required("c3");
  k.c4 = required("c4");
  k.a_m = theorem == 1 ? required("a_m") : doc.number("bounds.a_m", 1.0);

  const Graph g = cfg.graph.build();
  const QuadraticProblem p = cfg.problem.build(g.size());
  const auto spectrum = laplacian_spectrum(g);
  const auto pc = constants(p);
  SystemConstants s{pc.lipschitz, spectrum.lambda2(), spectrum.lambda_max(), pc.mu_n};

  XiBundle xi;
  std::optional<double> lc;
  if (theorem == 1) {
    xi = xi_theorem1(s, k);
  } else {
    if (doc.has("bounds.lc")) {
      lc = doc.number("bounds.lc");
    } else if (doc.has("bounds.lc_report")) {
      std::filesystem::path report_path = doc.string("bounds.lc_report");
      if (report_path.is_relative() && opt.config) report_path = opt.config->parent_path() / report_path;
      const ConfigDocument report = ConfigDocument::load(report_path);
      if (!report.has("lc")) {
        throw ConfigError("certification report " + report_path.string() + " has no 'lc' entry");
      }
      lc = report.number("lc");
    } else {
      throw ConfigError("constants required: missing key 'bounds.lc' (or 'bounds.lc_report')");
    }
    xi = xi_theorem2(s, *lc, k);
  }

  detail::Report rep;
  rep.add_int("theorem", theorem);
  rep.add("lipschitz", s.lipschitz);
  rep.add("lambda2", s.lambda2);
  rep.add("lambda_n", s.lambda_n);
  rep.add("mu_n", s.mu_n);
  if (lc) rep.add("lc", *lc);
  if (xi.theta) rep.add("theta", *xi.theta);
  rep.add("r", xi.r);
  for (const auto& [name, value] : xi.values()) {
    std::string key = name;
    if (!key.empty() && key.back() == '\'') key = key.substr(0, key.size() - 1) + "_prime";
    rep.add(key, value);
  }

  const ParameterBounds chained = bounds(xi, k);
  rep.section("admissible");
  rep.add("alpha_max", chained.alpha_max);
  rep.add("alpha_fixed", std::string(chained.alpha_fixed ? "true" : "false"));
  rep.add("beta_max", chained.beta_max);
  rep.add("eta_max", chained.eta_max);
  rep.add("gamma", chained.gamma);

  const ParameterBounds at = bounds(xi, k, cfg.params);
  rep.section("at_gains");
  rep.add("alpha", cfg.params.alpha);
  rep.add("beta", cfg.params.beta);
  rep.add("eta", cfg.params.eta);
  rep.add("beta_max", at.beta_max);
  rep.add("eta_max", at.eta_max);
  rep.add("gamma", at.gamma);
  rep.add_int("flag_count", static_cast<long long>(at.flags.size()));
  for (std::size_t i = 0; i < at.flags.size(); ++i) rep.add_text("flag" + std::to_string(i), at.flags[i]);
  for (std::size_t i = 0; i < chained.notes.size(); ++i) {
    rep.add_text("note" + std::to_string(i), chained.notes[i]);
  }
  detail::emit(rep, opt, "bounds.txt", out);
  return kOk;
}

inline int cmd_presets(const Options& opt, std::ostream& out, std::ostream& /*err*/) {
  if (opt.preset) {
    const auto cfg = find_preset(*opt.preset);
    if (!cfg) throw ConfigError("unknown preset '" + *opt.preset + "'");
    out << to_config_text(*cfg);
    return kOk;
  }
  for (const auto& p : preset_list()) out << std::left << std::setw(20) << p.name << p.description << '\n';
  return kOk;
}

inline int dispatch(const Options& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.command == "run") return cmd_run(opt, out, err);
    if (opt.command == "sweep") return cmd_sweep(opt, out, err);
    if (opt.command == "certify") return cmd_certify(opt, out, err);
    if (opt.command == "bounds") return cmd_bounds(opt, out, err);
    if (opt.command == "presets") return cmd_presets(opt, out, err);
    err << "error: unknown command '" << opt.command << "'\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const CertificationError& e) {
    err << "certification failed: " << e.what() << '\n';
    return kCertificationFailure;
  } catch (const std::exception& e) {
    // ConfigError and the validation errors raised while building objects
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

// Parses argv and runs one subcommand.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed primal-dual flows with spatio-temporal compressors"};
  app.set_version_flag("--version", std::string(STCOMP_VERSION));
  app.require_subcommand(1);
  Options opt;
  std::string config, out_dir, preset;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", config, "config file");
    sub->add_option("--preset", preset, "built-in preset name");
    sub->add_option("--seed", seed, "overrides the problem and simulation seeds");
    if (with_out) sub->add_option("--out", out_dir, "output directory");
  };
  add_common(app.add_subcommand("run", "integrate one experiment"), true);
  add_common(app.add_subcommand("sweep", "run a parameter grid"), true);
  add_common(app.add_subcommand("certify", "check the compressor properties"), true);
  add_common(app.add_subcommand("bounds", "parameter ranges from the convergence theorems"), true);
  app.add_subcommand("presets", "list built-in presets")
      ->add_option("--preset", preset, "print the resolved config of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << STCOMP_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  opt.command = sub->get_name();
  if (!config.empty()) opt.config = config;
  if (!out_dir.empty()) opt.out = out_dir;
  if (!preset.empty()) opt.preset = preset;
  if (sub->get_option_no_throw("--seed") && sub->count("--seed") > 0) opt.seed = seed;
  return dispatch(opt, out, err);
}

}  // namespace stcomp::cli
