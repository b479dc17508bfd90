#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "stcomp/experiment.hpp"
#include "stcomp/presets.hpp"

using namespace stcomp;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg = *find_preset("paper-dsetc-topk2");
  cfg.sim.horizon = 10.0;
  cfg.fit = {1.0, 9.0};
  return cfg;
}

std::string csv_of(const TrajectoryLog& log) {
  std::ostringstream os;
  write_csv(os, log);
  return os.str();
}

}  // namespace

TEST(Presets, UseTheBenchmarkConstants) {
  ASSERT_EQ(preset_list().size(), 7u);
  for (const auto& info : preset_list()) {
    const auto cfg = find_preset(info.name);
    ASSERT_TRUE(cfg) << info.name;
    EXPECT_EQ(cfg->graph.type, "ring");
    EXPECT_EQ(cfg->graph.n, 10);
    EXPECT_EQ(cfg->graph.weight, 1.0);
    EXPECT_EQ(cfg->problem.d, 5);
    EXPECT_EQ(cfg->problem.optimum, (std::vector<double>{1, 3, -1, 4, 2}));
    EXPECT_EQ(cfg->sim.dt, 0.01);
    EXPECT_EQ(cfg->params.alpha, 1.0);
    EXPECT_EQ(cfg->params.beta, 0.5);
    EXPECT_EQ(cfg->params.eta, 0.1);
    EXPECT_NO_THROW(validate_experiment(*cfg)) << info.name;
  }
  EXPECT_FALSE(find_preset("paper-nope"));
}

TEST(ExperimentConfig, TextRoundTrip) {
  for (const auto& info : preset_list()) {
    const auto cfg = *find_preset(info.name);
    const std::string text = to_config_text(cfg);
    const auto back = experiment_from_document(ConfigDocument::parse(text));
    EXPECT_EQ(to_config_text(back), text) << info.name;
  }
}

TEST(ExperimentConfig, RoundTripWithEdgesRowsAndSchedule) {
  const auto doc = ConfigDocument::parse(R"(
[graph]
type = "edges"
n = 3
edges = [[0, 1, 1.0], [1, 2, 0.5]]

[problem]
d = 2
optimum = [1.0, -1.0]
rows = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]

[flow]
kind = "dsetc-filter"

[compressor]
kind = "scalarized-custom"
schedule = [[0.02, [1.0, 0.0]], [0.01, [0.0, 1.0]]]

[sim]
horizon = 1.0
)");
  const auto cfg = experiment_from_document(doc);
  EXPECT_EQ(cfg.graph.edges.size(), 2u);
  ASSERT_TRUE(cfg.problem.rows.has_value());
  EXPECT_EQ(cfg.compressor->schedule.size(), 2u);
  const auto back = experiment_from_document(ConfigDocument::parse(to_config_text(cfg)));
  EXPECT_EQ(to_config_text(back), to_config_text(cfg));
  const auto result = run_experiment(cfg);
  EXPECT_FALSE(result.summary.diverged);
  // explicit rows with b = H s*
  Experiment exp(cfg);
  EXPECT_DOUBLE_EQ(exp.problem().offsets()(2), 0.0);
}

TEST(ExperimentConfig, SemanticErrorsPointAtTheLine) {
  auto line_of = [](const std::string& text) {
    try {
      validate_experiment(experiment_from_document(ConfigDocument::parse(text)));
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("[flow]\nkind = \"dstc\"\n"), 2);
  EXPECT_EQ(line_of("[flow]\nkind = \"dsstc\"\n\n[compressor]\nkind = \"top-q\"\n"), 5);
  EXPECT_EQ(line_of("[graph]\nn = 10\nwieght = 2\n"), 3);
  EXPECT_EQ(line_of("[problem]\nd = 4\n"), 2);
  EXPECT_EQ(line_of("[nonsense]\nx = 1\n"), 2);
  EXPECT_EQ(line_of("[sim]\ninit = \"ones\"\n"), 2);
  EXPECT_EQ(line_of("[compressor]\nkind = \"scalarized-custom\"\nschedule = [[0.1, [1.0, 1.0]]]\n"), 3);
}

TEST(ExperimentConfig, CompressorPresenceMustMatchFlow) {
  auto cfg = small_config();
  cfg.compressor.reset();
  EXPECT_THROW(validate_experiment(cfg), ConfigError);
  auto base = *find_preset("paper-baseline");
  base.compressor = CompressorSpec{};
  EXPECT_THROW(validate_experiment(base), ConfigError);
  auto affine = small_config();
  affine.compressor->kind = "affine";
  EXPECT_THROW(validate_experiment(affine), ConfigError);
}

TEST(Experiment, RandomInitIsSeeded) {
  auto cfg = small_config();
  cfg.init = InitKind::Random;
  const Experiment a(cfg), b(cfg);
  EXPECT_EQ(a.initial_x(), b.initial_x());
  cfg.sim.seed = 9;
  const Experiment c(cfg);
  EXPECT_NE(a.initial_x(), c.initial_x());
  EXPECT_EQ(Experiment(small_config()).initial_x(), Vector::Zero(50));
}

TEST(Experiment, SummaryMatchesLog) {
  const auto result = run_experiment(small_config());
  EXPECT_EQ(result.summary.final_error, result.log.errors.back());
  EXPECT_EQ(result.summary.initial_error, 310.0);
  EXPECT_EQ(result.summary.total_bits, 1000u * 10u * 134u);
  EXPECT_GT(result.summary.fitted_rate, 0.0);
  std::ostringstream os;
  write_summary(os, result.summary);
  const auto doc = ConfigDocument::parse(os.str());
  for (const char* key : {"final_error", "fitted_rate", "r_squared", "diverged", "total_bits"}) {
    EXPECT_TRUE(doc.has(key)) << key;
  }
  EXPECT_EQ(doc.number("final_error"), result.summary.final_error);
}

TEST(Sweep, EtaGridOnDsetc) {
  const auto base = *find_preset("paper-dsetc-topk2");
  const auto result = sweep(base, {{"eta", {0.05, 0.1, 0.2}}});
  ASSERT_EQ(result.entries.size(), 3u);
  EXPECT_TRUE(result.warnings.empty());
  for (const auto& e : result.entries) {
    ASSERT_TRUE(e.summary);
    EXPECT_FALSE(e.summary->diverged);
    EXPECT_LT(e.summary->final_error, e.summary->initial_error);
    EXPECT_GT(e.summary->fitted_rate, 0.0);
  }
  EXPECT_EQ(result.entries[1].config.params.eta, 0.1);
  std::ostringstream os;
  write_sweep_csv(os, result);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Sweep, EmptyGridIsAnError) {
  EXPECT_THROW(sweep(small_config(), {}), ConfigError);
  EXPECT_THROW(sweep(small_config(), {{"eta", {}}}), ConfigError);
  EXPECT_THROW(sweep(small_config(), {{"gamma", {1.0}}}), ConfigError);
}

TEST(Sweep, DuplicatesAreDroppedWithWarning) {
  const auto result = sweep(small_config(), {{"eta", {0.1, 0.2, 0.1}}});
  EXPECT_EQ(result.entries.size(), 2u);
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_NE(result.warnings[0].find("duplicate"), std::string::npos);
}

TEST(Sweep, SingletonEqualsSingleRun) {
  const auto cfg = small_config();
  const auto result = sweep(cfg, {{"eta", {cfg.params.eta}}});
  ASSERT_EQ(result.entries.size(), 1u);
  const auto direct = run_experiment(cfg);
  EXPECT_EQ(result.entries[0].summary->final_error, direct.summary.final_error);
  EXPECT_EQ(result.entries[0].summary->total_bits, direct.summary.total_bits);
}

TEST(Sweep, FailuresAreRecordedPerEntry) {
  const auto result = sweep(small_config(), {{"k", {2.0, 9.0}}});
  ASSERT_EQ(result.entries.size(), 2u);
  EXPECT_TRUE(result.entries[0].summary);
  EXPECT_FALSE(result.entries[1].summary);
  ASSERT_TRUE(result.entries[1].failure);
  EXPECT_NE(result.entries[1].failure->find("k"), std::string::npos);
}

TEST(Sweep, CartesianOrderAndSeeds) {
  auto cfg = small_config();
  cfg.sim.horizon = 1.0;
  cfg.fit = {0.1, 0.9};
  const auto result = sweep(cfg, {{"alpha", {1.0, 2.0}}, {"beta", {0.1, 0.2, 0.3}}});
  ASSERT_EQ(result.entries.size(), 6u);
  EXPECT_EQ(result.entries[1].config.params.alpha, 1.0);
  EXPECT_EQ(result.entries[1].config.params.beta, 0.2);
  EXPECT_EQ(result.entries[3].config.params.alpha, 2.0);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(result.entries[j].config.sim.seed, cfg.sim.seed + j);
}

TEST(Determinism, RepeatedRunsProduceIdenticalCsv) {
  const auto cfg = small_config();
  EXPECT_EQ(csv_of(run_experiment(cfg).log), csv_of(run_experiment(cfg).log));
}

TEST(Experiment, HalvingTheStepBarelyMovesTheRate) {
  auto coarse = *find_preset("paper-dsetc-topk2");
  auto fine = coarse;
  fine.sim.dt = coarse.sim.dt / 2.0;
  fine.sim.log_every = coarse.sim.log_every * 2;
  const double a = run_experiment(coarse).summary.fitted_rate;
  const double b = run_experiment(fine).summary.fitted_rate;
  EXPECT_LT(std::abs(a - b), 0.1 * a) << a << " vs " << b;
}

TEST(Presets, OutcomesMatchPinnedRuns) {
  // final errors at t = 50 from the first verified build
  const std::vector<std::pair<std::string, double>> pinned = {
      {"paper-baseline", 0.0587},  {"paper-dsstc-c1a", 18.4},    {"paper-dsetc-c1a", 0.936},
      {"paper-dsetc-topk2", 0.103}, {"paper-dsetc-c2b", 0.0663},
  };
  for (const auto& [name, value] : pinned) {
    const auto s = run_experiment(*find_preset(name)).summary;
    EXPECT_FALSE(s.diverged) << name;
    EXPECT_LE(s.final_error, 2.0 * value) << name;
    EXPECT_GE(s.final_error, value / 2.0) << name;
  }
  // direct compression with nonlinear compressors ends above where it started
  for (const char* name : {"paper-dsstc-topk2", "paper-dsstc-c2b"}) {
    const auto s = run_experiment(*find_preset(name)).summary;
    EXPECT_TRUE(s.diverged || s.final_error >= s.initial_error) << name;
  }
}
