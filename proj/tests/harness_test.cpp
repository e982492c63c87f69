// Copyright 2026 The spcelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "spce/errors.hpp"
#include "spce/harness/analyze.hpp"
#include "spce/harness/config.hpp"
#include "spce/harness/manifest.hpp"
#include "spce/harness/simulate.hpp"
#include "spce/harness/sweep.hpp"

namespace spce::harness {
namespace {

namespace fs = std::filesystem;

const char* kQuantumConfig =
    "# optimal CHSH angles\n"
    "model = quantum\n"
    "n_trials = 2000\n"
    "seed = 17\n"
    "setting.0.a = 0\n"
    "setting.0.b = 45\n"
    "setting.1.a = 0\n"
    "setting.1.b = 135\n"
    "setting.2.a = 90\n"
    "setting.2.b = 45\n"
    "setting.3.a = 90\n"
    "setting.3.b = 135\n";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

class TempDir : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("spce_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
                std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

std::string config_error_key(const std::string& text) {
    try {
        parse_experiment(ConfigFile::parse(text));
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

TEST(ConfigFile, ParsesCommentsAndTrims) {
    ConfigFile c = ConfigFile::parse("  a.b =  1 2 3  # note\n\n# skip\nc=x\n");
    EXPECT_EQ(c.get("a.b"), "1 2 3");
    EXPECT_EQ(c.get("c"), "x");
    EXPECT_EQ(c.to_text(), "a.b = 1 2 3\nc = x\n");
    EXPECT_THROW(c.get("d"), ConfigError);
}

TEST(ConfigFile, SyntaxErrors) {
    EXPECT_THROW(ConfigFile::parse("novalue\n"), ParseError);
    EXPECT_THROW(ConfigFile::parse("a = 1\na = 2\n"), ParseError);
    EXPECT_THROW(ConfigFile::parse(" = 2\n"), ParseError);
}

TEST(ExperimentConfig, ParsesQuantum) {
    ExperimentConfig c = parse_experiment(ConfigFile::parse(kQuantumConfig));
    EXPECT_EQ(c.model, ModelTag::quantum);
    EXPECT_EQ(c.n_trials, 2000u);
    EXPECT_EQ(*c.seed, 17u);
    ASSERT_EQ(c.settings.size(), 4u);
    EXPECT_NEAR(c.settings[3].b.x(), std::sin(135 * kPi / 180), 1e-15);
}

TEST(ExperimentConfig, FieldLevelErrors) {
    std::string base = "model = quantum\nn_trials = 10\nsetting.0.a = 0\nsetting.0.b = 10\n";
    EXPECT_EQ(config_error_key(base), "");
    EXPECT_EQ(config_error_key(base + "colour = red\n"), "colour");
    EXPECT_EQ(config_error_key("model = quantum\nn_trials = 0\nsetting.0.a = 0\nsetting.0.b = 1\n"), "n_trials");
    EXPECT_EQ(config_error_key("model = quantum\nn_trials = -4\nsetting.0.a = 0\nsetting.0.b = 1\n"), "n_trials");
    EXPECT_EQ(config_error_key("model = bohm\nn_trials = 4\nsetting.0.a = 0\nsetting.0.b = 1\n"), "model");
    EXPECT_EQ(config_error_key("model = quantum\nn_trials = 4\nsetting.0.a = 0\n"), "setting.0.b");
    EXPECT_EQ(config_error_key("model = quantum\nn_trials = 4\nsetting.0.a = inf\nsetting.0.b = 1\n"), "setting.0.a");
    EXPECT_EQ(config_error_key("model = quantum\nn_trials = 4\nsetting.0.a = 0 0 0\nsetting.0.b = 1\n"),
              "setting.0.a");
    EXPECT_EQ(config_error_key("model = quantum\nn_trials = 4\n"), "setting.<id>.a");
    EXPECT_EQ(config_error_key(base + "seed = x\n"), "seed");
    std::string ctx = "model = contextual\nn_trials = 10\nsetting.0.a = 0\nsetting.0.b = 10\n";
    EXPECT_EQ(config_error_key(ctx), "contextual.epsilon");
    EXPECT_EQ(config_error_key(ctx + "contextual.epsilon = 2\n"), "contextual.epsilon");
    EXPECT_EQ(config_error_key(ctx + "contextual.epsilon = 0.1\ncontextual.eta_b = 0\n"), "contextual.eta_b");
    EXPECT_EQ(config_error_key(ctx + "contextual.epsilon = 0.1\ncontextual.profile = box\n"), "contextual.profile");
    EXPECT_EQ(config_error_key(ctx + "contextual.epsilon = 0.1\ncontextual.profile = truncated-gaussian\n"),
              "contextual.sigma");
    std::string lr = "model = lrhv\nn_trials = 10\nsetting.0.a = 0\nsetting.0.b = 10\n";
    EXPECT_EQ(config_error_key(lr), "");
    EXPECT_EQ(config_error_key(lr + "lrhv.order = block\n"), "lrhv.order");
    EXPECT_EQ(config_error_key(lr + "lrhv.ensemble = atoms\n"), "lrhv.atom.<k>.lambda");
    EXPECT_EQ(config_error_key(lr + "lrhv.ensemble = atoms\nlrhv.atom.0.lambda = 10\nlrhv.atom.0.count = 0\n"),
              "lrhv.atom.0.count");
    EXPECT_EQ(config_error_key(lr + "lrhv.response = table\n"), "lrhv.table");
}

TEST(ExperimentConfig, DirectionForms) {
    EXPECT_TRUE(parse_direction("k", "90", false).approx_equal(Direction(1, 0, 0), 1e-15));
    EXPECT_TRUE(parse_direction("k", "45", true).approx_equal(Direction(1, 0, 0), 1e-15));
    EXPECT_TRUE(parse_direction("k", "0 3 4", false).approx_equal(Direction(0, 0.6, 0.8)));
    EXPECT_TRUE(parse_direction("k", "0,3,4", false).approx_equal(Direction(0, 0.6, 0.8)));
    EXPECT_THROW(parse_direction("k", "1 2", false), ConfigError);
    EXPECT_THROW(parse_direction("k", "0 0 1", true), ConfigError);
}

TEST(ExperimentConfig, CanonicalDropsOutputAndThreads) {
    ConfigFile a = ConfigFile::parse(std::string(kQuantumConfig) + "output = /tmp/x\nthreads = 4\n");
    ConfigFile b = ConfigFile::parse(kQuantumConfig);
    EXPECT_EQ(canonical_config(a).to_text(), canonical_config(b).to_text());
    EXPECT_EQ(parse_experiment(a).threads, 4u);
}

TEST(Manifest, Sha256KnownAnswer) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(run_id_for("abc"), "ba7816bf8f01cfea");
}

TEST(Manifest, TextRoundTrip) {
    RunManifest m;
    m.run_id = "0123456789abcdef";
    m.config_sha256 = "ff";
    m.seed = 99;
    m.model = "lrhv";
    m.created = "2026-01-01T00:00:00Z";
    m.artifacts = {"config.txt", "series_0.csv"};
    RunManifest back = RunManifest::parse(m.to_text());
    EXPECT_EQ(back.to_text(), m.to_text());
    EXPECT_THROW(RunManifest::parse("run_id=1\n"), ParseError);
}

TEST(Manifest, TimestampHonorsSourceDateEpoch) {
    ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
    EXPECT_EQ(timestamp_utc(), "1970-01-02T00:00:00Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
}

using Simulate = TempDir;

TEST_F(Simulate, WritesOneFilePerSetting) {
    ConfigFile cfg = ConfigFile::parse(
        "model = quantum\nn_trials = 1000\nseed = 3\nsetting.0.a = 0\nsetting.0.b = 30\n"
        "setting.5.a = 10\nsetting.5.b = 80\n");
    SimulationResult r = simulate(cfg, {std::nullopt, dir_, 1});
    EXPECT_EQ(r.run_dir, dir_ / r.manifest.run_id);
    ASSERT_EQ(r.series.size(), 2u);
    EXPECT_EQ(load_csv(r.run_dir / "series_0.csv").size(), 1000u);
    EXPECT_EQ(load_csv(r.run_dir / "series_5.csv")[0].setting_id, 5u);
    EXPECT_EQ(r.manifest.artifacts, (std::vector<std::string>{"config.txt", "series_0.csv", "series_5.csv"}));
    EXPECT_NO_THROW(verify_run(r.run_dir));
    EXPECT_EQ(r.manifest.run_id, run_id_for(slurp(r.run_dir / "config.txt")));
}

TEST_F(Simulate, ByteIdenticalAcrossRunsAndThreads) {
    ::setenv("SOURCE_DATE_EPOCH", "0", 1);
    for (const char* extra : {"model = quantum\n",
                              "model = contextual\ncontextual.epsilon = 0.2\ncontextual.eta = 0.7\n",
                              "model = lrhv\n",
                              "model = lrhv\nlrhv.ensemble = atoms\nlrhv.atom.0.lambda = 10\nlrhv.atom.1.lambda = 1 1 0\n"
                              "lrhv.atom.1.count = 3\n"}) {
        ConfigFile cfg = ConfigFile::parse(std::string(extra) +
                                           "n_trials = 20000\nseed = 8\nsetting.0.a = 0\nsetting.0.b = 45\n"
                                           "setting.1.a = 90\nsetting.1.b = 135\n");
        SimulationResult a = simulate(cfg, {std::nullopt, dir_ / "a", 1});
        SimulationResult b = simulate(cfg, {std::nullopt, dir_ / "b", 4});
        SimulationResult c = simulate(cfg, {std::nullopt, dir_ / "c", 1});
        for (const auto& f : a.manifest.artifacts) {
            std::string bytes = slurp(a.run_dir / f);
            EXPECT_EQ(bytes, slurp(b.run_dir / f)) << extra << f;
            EXPECT_EQ(bytes, slurp(c.run_dir / f)) << extra << f;
        }
        EXPECT_EQ(slurp(a.run_dir / "manifest.txt"), slurp(b.run_dir / "manifest.txt"));
    }
    ::unsetenv("SOURCE_DATE_EPOCH");
}

TEST_F(Simulate, RerunInPlaceKeepsCreationTime) {
    ::unsetenv("SOURCE_DATE_EPOCH");
    ConfigFile cfg = ConfigFile::parse("model = quantum\nn_trials = 100\nseed = 3\nsetting.0.a = 0\nsetting.0.b = 30\n");
    SimulationResult a = simulate(cfg, {std::nullopt, dir_, 1});
    std::string first = slurp(a.run_dir / "manifest.txt");
    std::filesystem::path manifest = a.run_dir / "manifest.txt";
    std::string edited = first;
    edited.replace(edited.find("created=") + 8, 4, "1999");
    std::ofstream(manifest, std::ios::binary | std::ios::trunc) << edited;
    SimulationResult b = simulate(cfg, {std::nullopt, dir_, 2});
    EXPECT_EQ(slurp(b.run_dir / "manifest.txt"), edited);
    EXPECT_EQ(b.manifest.created.substr(0, 4), "1999");
}

TEST_F(Simulate, SeedIsGeneratedAndRecorded) {
    ConfigFile cfg = ConfigFile::parse("model = lrhv\nn_trials = 50\nsetting.0.a = 0\nsetting.0.b = 1\n");
    SimulationResult r = simulate(cfg, {std::nullopt, dir_, 1});
    ConfigFile stored = ConfigFile::load(r.run_dir / "config.txt");
    EXPECT_EQ(stored.get("seed"), std::to_string(r.manifest.seed));
    // rerunning the stored config reproduces the run
    SimulationResult again = simulate(stored, {std::nullopt, dir_ / "again", 1});
    EXPECT_EQ(again.manifest.run_id, r.manifest.run_id);
    EXPECT_EQ(slurp(again.run_dir / "series_0.csv"), slurp(r.run_dir / "series_0.csv"));
}

TEST_F(Simulate, ContextualThinning) {
    ConfigFile cfg = ConfigFile::parse(
        "model = contextual\nn_trials = 40000\nseed = 4\nsetting.0.a = 0\nsetting.0.b = 60\n"
        "contextual.epsilon = 0.05\ncontextual.eta = 0.5\n");
    SimulationResult r = simulate(cfg, {std::nullopt, dir_, 1});
    double f = r.series[0].detected_count() / 40000.0;
    EXPECT_NEAR(f, 0.25, 4 * std::sqrt(0.25 * 0.75 / 40000));
}

TEST_F(Simulate, TableResponseAndBlockOrder) {
    write(dir_ / "k.csv",
          "lambda_id,direction_id,x,y,probability\n"
          "0,0,+1,-1,1\n0,1,+1,+1,1\n1,0,-1,+1,1\n1,1,-1,-1,1\n");
    write(dir_ / "run.cfg",
          "model = lrhv\nn_trials = 100\nseed = 2\nsetting.0.a = 0\nsetting.0.b = 0\n"
          "setting.1.a = 0\nsetting.1.b = 90\nlrhv.response = table\nlrhv.table = k.csv\n"
          "lrhv.ensemble = atoms\nlrhv.atom.0.lambda = 0\nlrhv.atom.1.lambda = 1\nlrhv.order = block\n");
    SimulationResult r = simulate(ConfigFile::load(dir_ / "run.cfg"), {std::nullopt, dir_ / "out", 1});
    const auto& t = r.series[0].trials();
    std::size_t switches = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        switches += t[i].outcome->x != t[i - 1].outcome->x;
    }
    EXPECT_EQ(switches, 1u);
    EXPECT_EQ(*t.front().outcome, (Outcome{Spin::up, Spin::down}));
    EXPECT_EQ(*t.back().outcome, (Outcome{Spin::down, Spin::up}));
}

TEST_F(Simulate, UnwritableOutputIsIoError) {
    write(dir_ / "file", "x");
    ConfigFile cfg = ConfigFile::parse("model = quantum\nn_trials = 5\nseed = 1\nsetting.0.a = 0\nsetting.0.b = 1\n");
    EXPECT_THROW(simulate(cfg, {std::nullopt, dir_ / "file" / "sub", 1}), IoError);
}

using Analyze = TempDir;

TEST_F(Analyze, ChshRoundTripMatchesInMemory) {
    SimulationResult r = simulate(ConfigFile::parse(kQuantumConfig), {std::nullopt, dir_, 1});
    ChshReport mem = chsh_from_series({r.series[0], r.series[1], r.series[2], r.series[3]});
    AnalysisOutcome a = analyze(AnalysisKind::chsh, {r.run_dir});
    EXPECT_EQ(a.record.get("s_value"), format_double(mem.s_value));
    EXPECT_EQ(a.record.get("std_error"), format_double(mem.std_error));
    EXPECT_EQ(a.record.get("run_id"), r.manifest.run_id);
    EXPECT_EQ(a.record.get("violation"), "true");
    EXPECT_FALSE(a.rejected);
    std::vector<fs::path> files;
    for (int k = 0; k < 4; ++k) {
        files.push_back(r.run_dir / ("series_" + std::to_string(k) + ".csv"));
    }
    EXPECT_EQ(analyze(AnalysisKind::chsh, files).record.to_line(), a.record.to_line());
}

TEST_F(Analyze, TamperedRunFailsVerification) {
    SimulationResult r = simulate(ConfigFile::parse(kQuantumConfig), {std::nullopt, dir_, 1});
    write(r.run_dir / "config.txt", slurp(r.run_dir / "config.txt") + "n_trials = 1\n");
    EXPECT_THROW(analyze(AnalysisKind::chsh, {r.run_dir}), DataError);
}

TEST_F(Analyze, PurityVerdicts) {
    ConfigFile block = ConfigFile::parse(
        "model = lrhv\nn_trials = 4000\nseed = 6\nsetting.0.a = 0\nsetting.0.b = 30\n"
        "lrhv.ensemble = atoms\nlrhv.atom.0.lambda = 10\nlrhv.atom.1.lambda = 100\nlrhv.order = block\n");
    SimulationResult r = simulate(block, {std::nullopt, dir_, 1});
    EXPECT_TRUE(analyze(AnalysisKind::purity, {r.run_dir / "series_0.csv"}).rejected);
    block.set("lrhv.order", "as-drawn");
    SimulationResult s = simulate(block, {std::nullopt, dir_, 1});
    AnalysisOutcome a = analyze(AnalysisKind::purity, {s.run_dir / "series_0.csv"});
    EXPECT_FALSE(a.rejected);
    EXPECT_EQ(a.record.get("pure_consistent"), "true");
}

TEST_F(Analyze, FactorizationOfTables) {
    write(dir_ / "product.csv", "0,0,+1,+1,0.06\n0,0,+1,-1,0.14\n0,0,-1,+1,0.24\n0,0,-1,-1,0.56\n");
    write(dir_ / "singlet.csv", "0,0,+1,-1,0.5\n0,0,-1,+1,0.5\n");
    AnalysisOutcome p = analyze(AnalysisKind::factorization, {dir_ / "product.csv"});
    EXPECT_FALSE(p.rejected);
    EXPECT_LT(std::stod(p.record.get("max_violation")), 1e-15);
    AnalysisOutcome s = analyze(AnalysisKind::factorization, {dir_ / "singlet.csv"});
    EXPECT_TRUE(s.rejected);
    EXPECT_EQ(s.record.get("max_violation"), "0.25");
}

TEST_F(Analyze, InputErrors) {
    write(dir_ / "bad.csv", "trial_index,setting_id,x,y\n0,0,+1,+1\n1,0,+1,X\n");
    try {
        analyze(AnalysisKind::purity, {dir_ / "bad.csv"});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
        EXPECT_EQ(e.column(), "y");
    }
    EXPECT_THROW(analyze(AnalysisKind::chsh, {dir_ / "bad.csv"}), ParameterError);
    EXPECT_THROW(parse_analysis_kind("bell"), ParameterError);
    EXPECT_EQ(record_to_csv(KvRecord().add("a", 1)), "key,value\na,1\n");
}

using Sweep = TempDir;

const char* kGapTemplate =
    "model = contextual\nn_trials = 20000\nseed = 12\nsetting.0.a = 0\nsetting.0.b = 0\n"
    "contextual.epsilon = 0.05\n";

TEST_F(Sweep, GapGridIsPositiveAndReproducible) {
    auto grid = std::vector<GridAxis>{parse_grid_axis("contextual.epsilon=0.001,0.01,0.05,0.1")};
    SweepOptions opt;
    opt.output = dir_ / "a";
    SweepResult r = sweep(ConfigFile::parse(kGapTemplate), grid, opt);
    ASSERT_EQ(r.points.size(), 4u);
    EXPECT_EQ(r.failed(), 0u);
    for (const auto& p : r.points) {
        EXPECT_GT(p.estimate, 5 * p.std_error);
    }
    std::string table = slurp(r.table);
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
    opt.output = dir_ / "b";
    sweep(ConfigFile::parse(kGapTemplate), grid, opt);
    EXPECT_EQ(slurp(dir_ / "b" / "sweep.csv"), table);
}

TEST_F(Sweep, ResumesCompletedPoints) {
    auto grid = std::vector<GridAxis>{parse_grid_axis("contextual.epsilon=0.01,0.1"),
                                      parse_grid_axis("contextual.eta=1,0.5")};
    SweepOptions opt;
    opt.output = dir_;
    SweepResult first = sweep(ConfigFile::parse(kGapTemplate), grid, opt);
    ASSERT_EQ(first.points.size(), 4u);
    EXPECT_EQ(first.points[1].parameters[1].second, "0.5");
    std::string table = slurp(first.table);
    SweepResult second = sweep(ConfigFile::parse(kGapTemplate), grid, opt);
    for (const auto& p : second.points) {
        EXPECT_TRUE(p.reused);
    }
    EXPECT_EQ(slurp(second.table), table);
}

TEST_F(Sweep, PartialFailureKeepsCompletedPoints) {
    SweepOptions opt;
    opt.output = dir_;
    SweepResult r = sweep(ConfigFile::parse(kGapTemplate), {parse_grid_axis("contextual.epsilon=0.1,5")}, opt);
    EXPECT_EQ(r.failed(), 1u);
    EXPECT_TRUE(r.points[0].error.empty());
    EXPECT_NE(slurp(r.failures).find("point_1"), std::string::npos);
    EXPECT_NE(slurp(r.table).find("0.1,gap"), std::string::npos);
}

TEST_F(Sweep, Preconditions) {
    SweepOptions opt;
    opt.output = dir_;
    EXPECT_THROW(sweep(ConfigFile::parse(kGapTemplate), {}, opt), ParameterError);
    EXPECT_THROW(parse_grid_axis("contextual.epsilon="), ParameterError);
    EXPECT_THROW(parse_grid_axis("=1,2"), ParameterError);
    EXPECT_THROW(parse_grid_axis("a=1,,2"), ParameterError);
    ConfigFile unseeded = ConfigFile::parse(kGapTemplate);
    unseeded.erase("seed");
    EXPECT_THROW(sweep(unseeded, {parse_grid_axis("contextual.eta=1")}, opt), ConfigError);
    EXPECT_THROW(parse_sweep_metric("power"), ParameterError);
}

// Command-line surface, through the built executable.
class Cli : public TempDir {
  protected:
    int run(const std::string& args) {
        const char* cli = std::getenv("SPCE_CLI");
        if (!cli) {
            return -1;
        }
        std::string cmd = std::string(cli) + " " + args + " > " + (dir_ / "stdout").string() + " 2> " +
                          (dir_ / "stderr").string();
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    std::string out() { return slurp(dir_ / "stdout"); }
    void SetUp() override {
        TempDir::SetUp();
        if (!std::getenv("SPCE_CLI")) {
            GTEST_SKIP() << "SPCE_CLI not set";
        }
    }
};

TEST_F(Cli, ExitCodes) {
    write(dir_ / "q.cfg", kQuantumConfig);
    write(dir_ / "bad.cfg", std::string(kQuantumConfig) + "colour = red\n");
    EXPECT_EQ(run("validate-config " + (dir_ / "q.cfg").string()), 0);
    EXPECT_EQ(run("validate-config " + (dir_ / "bad.cfg").string()), 2);
    EXPECT_NE(slurp(dir_ / "stderr").find("colour"), std::string::npos);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("simulate " + (dir_ / "missing.cfg").string()), 1);
    EXPECT_EQ(run("simulate " + (dir_ / "q.cfg").string() + " --out " + (dir_ / "runs").string() +
                  " --format csv"),
              0);
    EXPECT_NE(out().find("run_id,"), std::string::npos);
}

TEST_F(Cli, AnalyzeVerdictsAndRecords) {
    write(dir_ / "q.cfg", kQuantumConfig);
    ASSERT_EQ(run("simulate " + (dir_ / "q.cfg").string() + " --out " + (dir_ / "runs").string()), 0);
    fs::path run_dir = fs::directory_iterator(dir_ / "runs")->path();
    fs::path record = dir_ / "records.kv";
    EXPECT_EQ(run("analyze chsh " + run_dir.string() + " --out " + record.string()), 0);
    EXPECT_NE(out().find("VIOLATED"), std::string::npos);
    write(dir_ / "singlet.csv", "0,0,+1,-1,0.5\n0,0,-1,+1,0.5\n");
    EXPECT_EQ(run("analyze factorization " + (dir_ / "singlet.csv").string() + " --out " + record.string() +
                  " --format csv"),
              3);
    EXPECT_NE(out().find("factorizes,false"), std::string::npos);
    std::string lines = slurp(record);
    EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 2);
    write(dir_ / "bad.csv", "trial_index,setting_id,x,y\n0,0,+1\n");
    EXPECT_EQ(run("analyze purity " + (dir_ / "bad.csv").string() + " --out " + record.string()), 2);
    EXPECT_NE(slurp(dir_ / "stderr").find(":2: column 'y'"), std::string::npos);
}

TEST_F(Cli, DefaultOutputFromEnvironment) {
    write(dir_ / "q.cfg", kQuantumConfig);
    ::setenv("SPCE_OUT_DIR", (dir_ / "env_out").c_str(), 1);
    int rc = run("simulate " + (dir_ / "q.cfg").string());
    ::unsetenv("SPCE_OUT_DIR");
    EXPECT_EQ(rc, 0);
    EXPECT_TRUE(fs::exists(dir_ / "env_out"));
}

TEST_F(Cli, SweepCommand) {
    write(dir_ / "g.cfg", kGapTemplate);
    EXPECT_EQ(run("sweep " + (dir_ / "g.cfg").string() + " --grid contextual.epsilon=0.01,0.1 --out " +
                  (dir_ / "sw").string()),
              0);
    EXPECT_TRUE(fs::exists(dir_ / "sw" / "sweep.csv"));
    EXPECT_EQ(run("sweep " + (dir_ / "g.cfg").string() + " --out " + (dir_ / "sw").string()), 2);
}

} // namespace
} // namespace spce::harness
