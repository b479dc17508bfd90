#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stcomp/cli.hpp"

namespace fs = std::filesystem;
using namespace stcomp;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "stcomp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stcomp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  fs::path dir_;
};

const char* kShortRun = R"([graph]
type = "ring"
n = 5

[problem]
d = 3
optimum = [1.0, 2.0, 3.0]
seed = 4

[flow]
kind = "dsetc"

[compressor]
kind = "top-k"
k = 1

[sim]
horizon = 10.0
fit_start = 1.0
fit_end = 9.0
)";

}  // namespace

TEST_F(CliTest, PresetsListsAllNames) {
  const auto o = run({"presets"});
  EXPECT_EQ(o.code, 0);
  for (const auto& p : preset_list()) EXPECT_NE(o.out.find(p.name), std::string::npos);
  const auto one = run({"presets", "--preset", "paper-dsetc-c2b"});
  EXPECT_EQ(one.code, 0);
  EXPECT_NE(one.out.find("uniform-quantizer"), std::string::npos);
}

TEST_F(CliTest, RunWritesArtifactsAndReplaysIdentically) {
  const auto cfg = write("run.toml", kShortRun);
  const auto first = run({"run", "--config", cfg.string(), "--out", (dir_ / "a").string()});
  ASSERT_EQ(first.code, 0) << first.err;
  for (const char* f : {"trajectory.csv", "summary.txt", "manifest.toml"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  }
  EXPECT_EQ(slurp(dir_ / "a" / "trajectory.csv").rfind("t,error,consensus_error,v_sum_norm,cumulative_bits\n", 0), 0u);
  const auto manifest = ConfigDocument::load(dir_ / "a" / "manifest.toml");
  EXPECT_TRUE(manifest.has("manifest.version"));
  EXPECT_TRUE(manifest.has("manifest.timestamp"));

  const auto replay = run({"run", "--config", (dir_ / "a" / "manifest.toml").string(), "--out",
                           (dir_ / "b").string()});
  ASSERT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(slurp(dir_ / "a" / "trajectory.csv"), slurp(dir_ / "b" / "trajectory.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "summary.txt"), slurp(dir_ / "b" / "summary.txt"));
}

TEST_F(CliTest, SeedOverridesConfig) {
  const auto cfg = write("run.toml", kShortRun);
  ASSERT_EQ(run({"run", "--config", cfg.string(), "--out", (dir_ / "a").string(), "--seed", "11"}).code, 0);
  const auto manifest = ConfigDocument::load(dir_ / "a" / "manifest.toml");
  EXPECT_EQ(manifest.integer("problem.seed"), 11);
  EXPECT_EQ(manifest.integer("sim.seed"), 11);
}

TEST_F(CliTest, DivergentPresetIsASuccess) {
  const auto o = run({"run", "--preset", "paper-dsstc-c2b", "--out", (dir_ / "q").string()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, MalformedConfigIsLineAnchored) {
  const auto cfg = write("bad.toml", "[flow]\nkind = \"dsstc\"\nalpha = oops\n");
  const auto o = run({"run", "--config", cfg.string(), "--out", (dir_ / "x").string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("line 3"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"run", "--config", (dir_ / "missing.toml").string()}).code, 3);
  EXPECT_EQ(run({"run"}).code, 1);
  EXPECT_EQ(run({"run", "--preset", "nope"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"run", "--preset", "paper-baseline", "--config", "x"}).code, 1);
  // output path blocked by a regular file
  write("blocker", "x");
  EXPECT_EQ(run({"run", "--preset", "paper-baseline", "--out", (dir_ / "blocker" / "sub").string()}).code, 3);
}

TEST_F(CliTest, CertifyTopKPasses) {
  const auto cfg = write("c.toml", "[problem]\nd = 5\noptimum = [0.0, 0.0, 0.0, 0.0, 0.0]\n"
                                   "[compressor]\nkind = \"top-k\"\nk = 2\n[certify]\nhorizon = 40.0\n");
  const auto o = run({"certify", "--config", cfg.string(), "--out", (dir_ / "c").string()});
  EXPECT_EQ(o.code, 0) << o.out << o.err;
  const auto report = ConfigDocument::load(dir_ / "c" / "certify.txt");
  EXPECT_EQ(report.string("status"), "pass");
  EXPECT_GE(report.number("phi"), 0.4);
  EXPECT_DOUBLE_EQ(report.number("lc"), 1.0);
}

TEST_F(CliTest, CertifyQuantizerPassesOverLongHorizon) {
  const auto cfg = write("q.toml", "[compressor]\nkind = \"uniform-quantizer\"\n[certify]\nhorizon = 20.0\n");
  const auto o = run({"certify", "--config", cfg.string()});
  EXPECT_EQ(o.code, 0) << o.out << o.err;
  const auto report = ConfigDocument::parse(o.out);
  EXPECT_EQ(report.string("decay"), "pass");
  EXPECT_GT(report.number("phi"), 0.0);
  EXPECT_DOUBLE_EQ(report.number("lc"), 5.0);
}

TEST_F(CliTest, CertifyDefaultHorizonReportsSlowDecay) {
  const auto cfg = write("q.toml", "[compressor]\nkind = \"scalarized-cycling\"\n");
  const auto o = run({"certify", "--config", cfg.string()});
  EXPECT_EQ(o.code, 2);
  const auto report = ConfigDocument::parse(o.out);
  EXPECT_EQ(report.string("growth"), "pass");
  EXPECT_EQ(report.string("decay"), "fail");
  EXPECT_DOUBLE_EQ(report.number("decay_horizon"), 5.0);
}

TEST_F(CliTest, CertifyBrokenAffineFails) {
  const auto cfg = write("a.toml", "[compressor]\nkind = \"affine\"\ngain = 2.0\noffset = 1.0\n");
  const auto o = run({"certify", "--config", cfg.string()});
  EXPECT_EQ(o.code, 2);
  const auto report = ConfigDocument::parse(o.out);
  EXPECT_EQ(report.string("status"), "fail");
  EXPECT_EQ(report.string("growth"), "fail");
  EXPECT_EQ(report.numbers("growth_witness"), std::vector<double>(5, 0.0));
}

TEST_F(CliTest, BoundsAllOnes) {
  const auto cfg = write("b.toml", "[bounds]\ntheorem = 1\nc1 = 1.0\nc2 = 1.0\nc3 = 1.0\nc4 = 1.0\na_m = 1.0\n");
  const auto o = run({"bounds", "--config", cfg.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = ConfigDocument::parse(o.out);
  EXPECT_DOUBLE_EQ(report.number("xi3"), 0.75);
  EXPECT_TRUE(report.has("xi1_prime"));
  EXPECT_GT(report.number("admissible.beta_max"), 0.0);
  EXPECT_GT(report.integer("at_gains.flag_count"), 0);
}

TEST_F(CliTest, BoundsMissingConstantNamesKey) {
  const auto cfg = write("b.toml", "[bounds]\ntheorem = 1\nc1 = 1.0\nc2 = 1.0\nc4 = 1.0\na_m = 1.0\n");
  const auto o = run({"bounds", "--config", cfg.string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("constants required"), std::string::npos);
  EXPECT_NE(o.err.find("bounds.c3"), std::string::npos);
}

TEST_F(CliTest, BoundsTheorem2TakesLcFromCertificationReport) {
  const auto ccfg = write("q.toml", "[compressor]\nkind = \"uniform-quantizer\"\n[certify]\nhorizon = 20.0\n");
  ASSERT_EQ(run({"certify", "--config", ccfg.string(), "--out", (dir_ / "cert").string()}).code, 0);
  const auto cfg = write("b.toml", "[bounds]\ntheorem = 2\nc1 = 1.0\nc2 = 2.0\nc3 = 1.0\nc4 = 1.0\n"
                                   "lc_report = \"cert/certify.txt\"\n");
  const auto o = run({"bounds", "--config", cfg.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = ConfigDocument::parse(o.out);
  EXPECT_DOUBLE_EQ(report.number("lc"), 5.0);
  EXPECT_DOUBLE_EQ(report.number("theta"), 52.0);

  const auto missing = write("m.toml", "[bounds]\ntheorem = 2\nc1 = 1.0\nc2 = 2.0\nc3 = 1.0\nc4 = 1.0\n");
  const auto m = run({"bounds", "--config", missing.string()});
  EXPECT_EQ(m.code, 1);
  EXPECT_NE(m.err.find("bounds.lc"), std::string::npos);
}

TEST_F(CliTest, SweepWritesOneRowPerPoint) {
  const auto cfg = write("s.toml", std::string(kShortRun) + "\n[sweep]\neta = [0.05, 0.1, 0.2, 0.1]\n");
  const auto o = run({"sweep", "--config", cfg.string(), "--out", (dir_ / "s").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto csv = slurp(dir_ / "s" / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(o.err.find("duplicate"), std::string::npos);
}

TEST_F(CliTest, SweepWithoutGridIsUsageError) {
  const auto cfg = write("s.toml", kShortRun);
  const auto o = run({"sweep", "--config", cfg.string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("sweep"), std::string::npos);
}

TEST_F(CliTest, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(STCOMP_CONFIG_DIR)) {
    if (entry.path().extension() != ".toml") continue;
    EXPECT_NO_THROW(experiment_from_document(ConfigDocument::load(entry.path()))) << entry.path();
  }
}
