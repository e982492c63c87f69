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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spce/harness/config.hpp"

namespace spce::harness {

// One grid axis: a config key and the values it takes.
struct GridAxis {
    std::string key;
    std::vector<std::string> values;
};

// "key=v1,v2,..."; throws ParameterError when malformed or empty.
GridAxis parse_grid_axis(const std::string& spec);

enum class SweepMetric {
    // P(+,+|A,A) + P(-,-|A,A) at the first setting's a direction, by Monte
    // Carlo with n_trials samples (contextual model).
    anti_correlation_gap,
    // CHSH S over exactly four settings, from the simulated series.
    chsh,
    // Detected trials / all trials, pooled over settings.
    detected_fraction,
};

// Accepts gap, chsh, detected-fraction.
SweepMetric parse_sweep_metric(const std::string& name);
std::string sweep_metric_name(SweepMetric metric);

struct SweepOptions {
    SweepMetric metric = SweepMetric::anti_correlation_gap;
    std::filesystem::path output;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

struct SweepPoint {
    std::size_t index = 0;
    std::vector<std::pair<std::string, std::string>> parameters;
    double estimate = 0.0;
    double std_error = 0.0;
    bool reused = false;
    std::string error;  // non-empty for a failed point
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::filesystem::path table;     // aggregate CSV
    std::filesystem::path failures;  // written only when some point failed

    std::size_t failed() const;
};

/*!
 * Cartesian product of the axes, first axis slowest. Point k is simulated
 * and analyzed under <output>/point_<k>/, whose result.kv lets a rerun
 * skip points already done with the same config. Completed points go to
 * <output>/sweep.csv; failed points are listed in <output>/failures.txt.
 * Throws ParameterError for an empty grid and ConfigError when no seed is
 * available.
 */
SweepResult sweep(const ConfigFile& base, const std::vector<GridAxis>& grid, const SweepOptions& options);

} // namespace spce::harness
