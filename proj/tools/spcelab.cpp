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

// spcelab: simulate, analyze and sweep spin-correlation experiments.
//
// Exit status: 0 success, 1 runtime or I/O failure, 2 invalid usage, config
// or input data, 3 the analysis rejected its null hypothesis.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

#include "spce/errors.hpp"
#include "spce/harness/analyze.hpp"
#include "spce/harness/config.hpp"
#include "spce/harness/simulate.hpp"
#include "spce/harness/sweep.hpp"
#include "spce/report.hpp"

namespace {

using namespace spce;
using namespace spce::harness;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitRejected = 3;

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "text";
    std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "csv"}));
}

void emit(const KvRecord& record, const std::string& text, const std::string& format) {
    if (format == "csv") {
        std::cout << record_to_csv(record);
    } else {
        std::cout << text;
    }
}

int run_simulate(const std::string& config_path, const Common& c) {
    RunOverrides ov;
    ov.seed = c.seed;
    ov.threads = c.threads;
    if (!c.out.empty()) {
        ov.output = c.out;
    }
    SimulationResult r = simulate(ConfigFile::load(config_path), ov);
    KvRecord rec;
    rec.add("run_id", r.manifest.run_id)
        .add("run_dir", r.run_dir.string())
        .add("seed", r.manifest.seed)
        .add("model", r.manifest.model)
        .add("series", static_cast<std::uint64_t>(r.series.size()));
    std::string text = "run " + r.manifest.run_id + " (" + r.manifest.model + ", seed " +
                       std::to_string(r.manifest.seed) + ")\n";
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        const auto& s = r.series[i];
        text += "  " + r.manifest.artifacts[i + 1] + ": " + std::to_string(s.size()) + " trials, " +
                std::to_string(s.detected_count()) + " detected\n";
    }
    text += "written to " + r.run_dir.string() + "\n";
    emit(rec, text, c.format);
    return kExitOk;
}

int run_validate(const std::string& config_path, const Common& c) {
    ConfigFile file = ConfigFile::load(config_path);
    if (c.seed) {
        file.set("seed", std::to_string(*c.seed));
    }
    ExperimentConfig cfg = parse_experiment(file);
    if (cfg.model == ModelTag::lrhv) {
        cfg.response_model();
    }
    KvRecord rec;
    rec.add("valid", true)
        .add("model", std::string(model_tag_name(cfg.model)))
        .add("settings", static_cast<std::uint64_t>(cfg.settings.size()))
        .add("n_trials", cfg.n_trials);
    std::string text = config_path + ": valid " + std::string(model_tag_name(cfg.model)) + " experiment, " +
                       std::to_string(cfg.settings.size()) + " setting(s), " + std::to_string(cfg.n_trials) +
                       " trials per setting\n";
    if (!cfg.seed) {
        text += "  no seed given; simulate will draw and record one\n";
    }
    emit(rec, text, c.format);
    return kExitOk;
}

int run_analyze(const std::string& kind, const std::vector<std::string>& inputs, const Common& c,
                const std::string& normalization, double alpha, std::size_t subsamples, double fraction) {
    AnalysisOptions opt;
    opt.normalization = normalization == "raw" ? Normalization::raw_rate : Normalization::detected_pairs;
    opt.purity.alpha = alpha;
    opt.purity.subsamples = subsamples;
    opt.purity.fraction = fraction;
    opt.purity.seed = c.seed.value_or(0);
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    AnalysisOutcome result = analyze(parse_analysis_kind(kind), paths, opt);
    std::filesystem::path record_path = c.out.empty() ? default_output_dir() / "analysis.kv"
                                                      : std::filesystem::path(c.out);
    if (record_path.has_parent_path()) {
        std::filesystem::create_directories(record_path.parent_path());
    }
    append_record(record_path, result.record);
    emit(result.record, result.text, c.format);
    return result.rejected ? kExitRejected : kExitOk;
}

int run_sweep(const std::string& config_path, const std::vector<std::string>& grid_specs, const std::string& metric,
              const Common& c) {
    std::vector<GridAxis> grid;
    for (const auto& g : grid_specs) {
        grid.push_back(parse_grid_axis(g));
    }
    SweepOptions opt;
    opt.metric = parse_sweep_metric(metric);
    opt.output = c.out.empty() ? default_output_dir() / "sweep" : std::filesystem::path(c.out);
    opt.seed = c.seed;
    opt.threads = c.threads.value_or(1);
    SweepResult r = sweep(ConfigFile::load(config_path), grid, opt);
    KvRecord rec;
    rec.add("points", static_cast<std::uint64_t>(r.points.size()))
        .add("failed", static_cast<std::uint64_t>(r.failed()))
        .add("table", r.table.string());
    std::string text;
    for (const auto& p : r.points) {
        text += "point " + std::to_string(p.index);
        for (const auto& [k, v] : p.parameters) {
            text += " " + k + "=" + v;
        }
        if (p.error.empty()) {
            text += ": " + format_double(p.estimate) + " +- " + format_double(p.std_error);
            text += p.reused ? " (reused)\n" : "\n";
        } else {
            text += ": failed: " + p.error + "\n";
        }
    }
    text += "table written to " + r.table.string() + "\n";
    emit(rec, text, c.format);
    return r.failed() > 0 ? kExitFailure : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-correlation experiment laboratory"};
    app.require_subcommand(1);

    Common common;
    std::string config_path;

    auto* simulate_cmd = app.add_subcommand("simulate", "Generate time series from a config");
    simulate_cmd->add_option("config", config_path, "Experiment config file")->required();
    simulate_cmd->add_option("--out", common.out, "Output directory (default $SPCE_OUT_DIR or ./spce_runs)");
    simulate_cmd->add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    add_common(simulate_cmd, common);

    auto* validate_cmd = app.add_subcommand("validate-config", "Check a config without running it");
    validate_cmd->add_option("config", config_path, "Experiment config file")->required();
    add_common(validate_cmd, common);

    std::string kind;
    std::vector<std::string> inputs;
    std::string normalization = "detected";
    double alpha = 0.05;
    std::size_t subsamples = 10;
    double fraction = 0.5;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze series or kernel tables");
    analyze_cmd->add_option("kind", kind, "chsh, purity or factorization")
        ->required()
        ->check(CLI::IsMember({"chsh", "purity", "factorization"}));
    analyze_cmd->add_option("inputs", inputs, "Input files or a run directory")->required();
    analyze_cmd->add_option("--out", common.out, "Record file to append to");
    analyze_cmd->add_option("--normalization", normalization, "CHSH normalization")
        ->check(CLI::IsMember({"detected", "raw"}));
    analyze_cmd->add_option("--alpha", alpha, "Family-wise level of the purity tests")->check(CLI::Range(0.0, 1.0));
    analyze_cmd->add_option("--subsamples", subsamples, "Purity subsample count")->check(CLI::Range(2, 100000));
    analyze_cmd->add_option("--fraction", fraction, "Purity subsample fraction")->check(CLI::Range(0.0, 1.0));
    add_common(analyze_cmd, common);

    std::vector<std::string> grid;
    std::string metric = "gap";
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a config over a parameter grid");
    sweep_cmd->add_option("config", config_path, "Config template")->required();
    sweep_cmd->add_option("--grid", grid, "key=v1,v2,... (repeat for a product grid)");
    sweep_cmd->add_option("--metric", metric, "gap, chsh or detected-fraction")
        ->check(CLI::IsMember({"gap", "chsh", "detected-fraction"}));
    sweep_cmd->add_option("--out", common.out, "Sweep directory (default $SPCE_OUT_DIR/sweep)");
    sweep_cmd->add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    add_common(sweep_cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (simulate_cmd->parsed()) {
            return run_simulate(config_path, common);
        }
        if (validate_cmd->parsed()) {
            return run_validate(config_path, common);
        }
        if (analyze_cmd->parsed()) {
            return run_analyze(kind, inputs, common, normalization, alpha, subsamples, fraction);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(config_path, grid, metric, common);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ParameterError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInvalid;
}
