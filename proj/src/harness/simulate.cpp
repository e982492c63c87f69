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

#include "spce/harness/simulate.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>

#include "spce/contextual.hpp"
#include "spce/errors.hpp"
#include "spce/lrhv.hpp"
#include "spce/parallel.hpp"
#include "spce/quantum.hpp"

namespace spce::harness {

namespace {

// Substream id for draws shared across settings; setting ids are 32-bit.
constexpr std::uint64_t kSharedDrawStream = 0x5348415245440000ull;

template <class Trial>
std::vector<std::optional<Outcome>> batched_trials(std::uint64_t n, const RandomStream& stream, unsigned threads,
                                                   Trial trial) {
    std::vector<std::optional<Outcome>> out(n);
    std::uint64_t n_batches = (n + kSmearedBatch - 1) / kSmearedBatch;
    parallel_for(n_batches, threads, [&](std::size_t k) {
        RandomStream rng = stream.substream(k);
        std::uint64_t begin = k * kSmearedBatch;
        std::uint64_t end = std::min(n, begin + kSmearedBatch);
        for (std::uint64_t i = begin; i < end; ++i) {
            out[i] = trial(rng);
        }
    });
    return out;
}

std::vector<std::vector<std::optional<Outcome>>> lrhv_outcomes(const ExperimentConfig& config,
                                                               const RandomStream& master, unsigned threads) {
    std::vector<SettingPair> pairs;
    for (const auto& s : config.settings) {
        pairs.push_back({s.a, s.b});
    }
    auto ensemble = config.hidden_ensemble();
    auto response = config.response_model();
    std::vector<std::vector<Outcome>> raw;
    if (!response.is_deterministic()) {
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            raw.push_back(single_setting_outcomes(ensemble, response, pairs[j], config.n_trials,
                                                  master.substream(config.settings[j].id)));
        }
    } else if (const auto* atomic = std::get_if<AtomicEnsemble>(&ensemble)) {
        auto draws = protocol_draws(*atomic, config.n_trials, master.substream(kSharedDrawStream));
        if (config.order == DrawOrder::block) {
            std::stable_sort(draws.begin(), draws.end());
        }
        raw = protocol_outcomes(*atomic, response, pairs, draws);
    } else {
        raw = uniform_sign_protocol_outcomes(pairs, config.n_trials, master.substream(kSharedDrawStream), threads);
    }
    std::vector<std::vector<std::optional<Outcome>>> out;
    for (auto& r : raw) {
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

} // namespace

std::vector<TimeSeries> generate_series(const ExperimentConfig& config, std::uint64_t seed, const std::string& run_id,
                                        unsigned threads) {
    RandomStream master(seed);
    std::vector<std::vector<std::optional<Outcome>>> outcomes;
    switch (config.model) {
    case ModelTag::quantum: {
        TwoQubitState singlet = build_singlet();
        for (const auto& s : config.settings) {
            outcomes.push_back(batched_trials(config.n_trials, master.substream(s.id), threads,
                                              [&](RandomStream& rng) -> std::optional<Outcome> {
                                                  return sample_trial(singlet, s.a, s.b, rng);
                                              }));
        }
        break;
    }
    case ModelTag::contextual:
        for (const auto& s : config.settings) {
            ExperimentSetting setting = config.contextual_setting(s);
            outcomes.push_back(batched_trials(config.n_trials, master.substream(s.id), threads,
                                              [&](RandomStream& rng) { return sample_contextual_trial(setting, rng); }));
        }
        break;
    case ModelTag::lrhv:
        outcomes = lrhv_outcomes(config, master, threads);
        break;
    case ModelTag::external:
        throw ParameterError("external data cannot be simulated");
    }
    std::vector<TimeSeries> series;
    for (std::size_t j = 0; j < config.settings.size(); ++j) {
        TimeSeries ts(run_id, seed, config.model);
        ts.reserve(outcomes[j].size());
        for (const auto& o : outcomes[j]) {
            ts.append(config.settings[j].id, o);
        }
        series.push_back(std::move(ts));
    }
    return series;
}

SimulationResult simulate(const ConfigFile& file, const RunOverrides& overrides) {
    ConfigFile effective = file;
    if (overrides.seed) {
        effective.set("seed", std::to_string(*overrides.seed));
    }
    ExperimentConfig config = parse_experiment(effective);
    if (!config.seed) {
        std::random_device rd;
        config.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
        effective.set("seed", std::to_string(*config.seed));
    }
    unsigned threads = overrides.threads.value_or(config.threads);
    std::filesystem::path output = overrides.output ? *overrides.output
                                   : config.output.empty() ? default_output_dir()
                                                           : config.output;

    std::string canonical = canonical_config(effective).to_text();
    RunManifest manifest;
    manifest.run_id = run_id_for(canonical);
    manifest.config_sha256 = sha256_hex(canonical);
    manifest.seed = *config.seed;
    manifest.model = std::string(model_tag_name(config.model));
    manifest.created = timestamp_utc();

    SimulationResult result;
    result.series = generate_series(config, *config.seed, manifest.run_id, threads);
    result.run_dir = output / manifest.run_id;
    std::error_code ec;
    std::filesystem::create_directories(result.run_dir, ec);
    if (ec) {
        throw IoError("cannot create " + result.run_dir.string() + ": " + ec.message());
    }
    // a rerun of the same config keeps the original creation time so the
    // directory contents stay byte-identical
    if (!std::getenv("SOURCE_DATE_EPOCH") && std::filesystem::exists(result.run_dir / "manifest.txt")) {
        try {
            RunManifest previous = read_manifest(result.run_dir);
            if (previous.config_sha256 == manifest.config_sha256) {
                manifest.created = previous.created;
            }
        } catch (const std::exception&) {
        }
    }
    write_text(result.run_dir / "config.txt", canonical);
    manifest.artifacts.push_back("config.txt");
    for (std::size_t j = 0; j < result.series.size(); ++j) {
        std::string name = "series_" + std::to_string(config.settings[j].id) + ".csv";
        save_csv(result.run_dir / name, result.series[j]);
        manifest.artifacts.push_back(name);
    }
    write_manifest(result.run_dir, manifest);
    result.manifest = std::move(manifest);
    return result;
}

} // namespace spce::harness
