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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "spce/harness/config.hpp"
#include "spce/harness/manifest.hpp"
#include "spce/time_series.hpp"

namespace spce::harness {

// Command-line values that take precedence over the config file.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> output;
    std::optional<unsigned> threads;
};

/*!
 * One time series per configured setting, in setting order. Setting s
 * draws from RandomStream(seed).substream(s.id); hidden-variable draws
 * shared by all settings come from a separate substream. Output does not
 * depend on `threads`.
 */
std::vector<TimeSeries> generate_series(const ExperimentConfig& config, std::uint64_t seed,
                                        const std::string& run_id, unsigned threads);

struct SimulationResult {
    std::filesystem::path run_dir;
    RunManifest manifest;
    std::vector<TimeSeries> series;
};

/*!
 * Validates the config, fixes the seed (drawn from the OS when absent),
 * generates the series and writes
 *
 *   <output>/<run_id>/config.txt     canonical config, seed included
 *   <output>/<run_id>/series_<id>.csv
 *   <output>/<run_id>/manifest.txt
 */
SimulationResult simulate(const ConfigFile& file, const RunOverrides& overrides = {});

} // namespace spce::harness
