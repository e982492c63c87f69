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

#include "spce/harness/sweep.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spce/chsh.hpp"
#include "spce/contextual.hpp"
#include "spce/errors.hpp"
#include "spce/harness/manifest.hpp"
#include "spce/harness/simulate.hpp"
#include "spce/report.hpp"

namespace spce::harness {

namespace {

constexpr std::uint64_t kGapStream = 0x4741500000000000ull;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return out;
}

std::pair<double, double> evaluate(SweepMetric metric, const ExperimentConfig& config,
                                   const SimulationResult& run, unsigned threads) {
    switch (metric) {
    case SweepMetric::anti_correlation_gap: {
        if (config.model != ModelTag::contextual) {
            throw ConfigError("model", "the gap metric needs the contextual model");
        }
        if (config.epsilon_a != config.epsilon_b) {
            throw ConfigError("contextual.epsilon", "the gap metric needs equal caps on both sides");
        }
        ConfiguredSetting same{config.settings[0].id, config.settings[0].a, config.settings[0].a};
        Estimate e = anti_correlation_gap(config.contextual_setting(same), config.n_trials,
                                          RandomStream(*config.seed, kGapStream), threads);
        return {e.value, e.std_error};
    }
    case SweepMetric::chsh: {
        if (run.series.size() != 4) {
            throw ConfigError("setting.<id>.a", "the chsh metric needs exactly four settings");
        }
        ChshReport r = chsh_from_series({run.series[0], run.series[1], run.series[2], run.series[3]});
        return {r.s_value, r.std_error};
    }
    case SweepMetric::detected_fraction: {
        std::uint64_t detected = 0, total = 0;
        for (const auto& s : run.series) {
            detected += s.detected_count();
            total += s.size();
        }
        double f = static_cast<double>(detected) / static_cast<double>(total);
        return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(total))};
    }
    }
    throw ParameterError("unknown metric");
}

std::optional<KvRecord> read_result(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line;
    if (!in || !std::getline(in, line)) {
        return std::nullopt;
    }
    return KvRecord::parse_line(line);
}

void write_result(const std::filesystem::path& path, const KvRecord& record) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << record.to_line() << '\n';
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

} // namespace

GridAxis parse_grid_axis(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ParameterError("grid axis '" + spec + "' is not of the form key=v1,v2,...");
    }
    GridAxis axis{spec.substr(0, eq), {}};
    std::string rest = spec.substr(eq + 1);
    if (!rest.empty()) {
        axis.values = split(rest, ',');
    }
    for (const auto& v : axis.values) {
        if (v.empty()) {
            throw ParameterError("grid axis '" + axis.key + "' has an empty value");
        }
    }
    if (axis.values.empty()) {
        throw ParameterError("grid axis '" + axis.key + "' has no values");
    }
    return axis;
}

SweepMetric parse_sweep_metric(const std::string& name) {
    if (name == "gap") {
        return SweepMetric::anti_correlation_gap;
    }
    if (name == "chsh") {
        return SweepMetric::chsh;
    }
    if (name == "detected-fraction") {
        return SweepMetric::detected_fraction;
    }
    throw ParameterError("unknown metric '" + name + "' (expected gap, chsh or detected-fraction)");
}

std::string sweep_metric_name(SweepMetric metric) {
    switch (metric) {
    case SweepMetric::anti_correlation_gap:
        return "gap";
    case SweepMetric::chsh:
        return "chsh";
    case SweepMetric::detected_fraction:
        return "detected-fraction";
    }
    return "?";
}

std::size_t SweepResult::failed() const {
    std::size_t n = 0;
    for (const auto& p : points) {
        n += p.error.empty() ? 0 : 1;
    }
    return n;
}

SweepResult sweep(const ConfigFile& base, const std::vector<GridAxis>& grid, const SweepOptions& options) {
    if (grid.empty()) {
        throw ParameterError("sweep needs a non-empty parameter grid");
    }
    std::size_t n_points = 1;
    for (const auto& axis : grid) {
        if (axis.values.empty()) {
            throw ParameterError("grid axis '" + axis.key + "' has no values");
        }
        n_points *= axis.values.size();
    }
    ConfigFile tmpl = base;
    if (options.seed) {
        tmpl.set("seed", std::to_string(*options.seed));
    }
    if (!tmpl.has("seed")) {
        throw ConfigError("seed", "sweeps need a fixed seed (config key or --seed)");
    }
    std::filesystem::create_directories(options.output);

    SweepResult result;
    for (std::size_t k = 0; k < n_points; ++k) {
        SweepPoint point;
        point.index = k;
        ConfigFile cfg = tmpl;
        std::size_t rem = k;
        std::vector<std::size_t> pick(grid.size());
        for (std::size_t i = grid.size(); i-- > 0;) {
            pick[i] = rem % grid[i].values.size();
            rem /= grid[i].values.size();
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            cfg.set(grid[i].key, grid[i].values[pick[i]]);
            point.parameters.emplace_back(grid[i].key, grid[i].values[pick[i]]);
        }
        auto dir = options.output / ("point_" + std::to_string(k));
        std::string hash = sha256_hex(canonical_config(cfg).to_text());
        std::string metric = sweep_metric_name(options.metric);
        auto previous = read_result(dir / "result.kv");
        if (previous && previous->get("config_sha256") == hash && previous->get("metric") == metric) {
            point.estimate = std::stod(previous->get("estimate"));
            point.std_error = std::stod(previous->get("std_error"));
            point.reused = true;
            result.points.push_back(std::move(point));
            continue;
        }
        try {
            ExperimentConfig config = parse_experiment(cfg);
            std::filesystem::create_directories(dir);
            SimulationResult run = simulate(cfg, RunOverrides{std::nullopt, dir, options.threads});
            auto [estimate, se] = evaluate(options.metric, config, run, options.threads);
            point.estimate = estimate;
            point.std_error = se;
            KvRecord rec;
            rec.add("point", static_cast<std::uint64_t>(k))
                .add("config_sha256", hash)
                .add("run_id", run.manifest.run_id)
                .add("metric", metric)
                .add("estimate", estimate)
                .add("std_error", se);
            write_result(dir / "result.kv", rec);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        result.points.push_back(std::move(point));
    }

    result.table = options.output / "sweep.csv";
    std::ofstream table(result.table, std::ios::binary | std::ios::trunc);
    table << "point";
    for (const auto& axis : grid) {
        table << ',' << axis.key;
    }
    table << ",metric,estimate,std_error\n";
    std::ostringstream failures;
    for (const auto& p : result.points) {
        if (!p.error.empty()) {
            failures << "point_" << p.index << ": " << p.error << '\n';
            continue;
        }
        table << p.index;
        for (const auto& [key, value] : p.parameters) {
            table << ',' << value;
        }
        table << ',' << sweep_metric_name(options.metric) << ',' << format_double(p.estimate) << ','
              << format_double(p.std_error) << '\n';
    }
    if (!table) {
        throw IoError("cannot write " + result.table.string());
    }
    auto failures_path = options.output / "failures.txt";
    if (result.failed() > 0) {
        result.failures = failures_path;
        std::ofstream f(failures_path, std::ios::binary | std::ios::trunc);
        f << failures.str();
    } else {
        std::filesystem::remove(failures_path);
    }
    return result;
}

} // namespace spce::harness
