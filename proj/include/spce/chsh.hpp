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

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "spce/direction.hpp"
#include "spce/lrhv.hpp"
#include "spce/quantum.hpp"
#include "spce/report.hpp"
#include "spce/time_series.hpp"

namespace spce {

/*!
 * Four-setting context of the CHSH combination
 *
 *   S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
 *
 * Terms are always stored in the order (a,b), (a,b'), (a',b), (a',b').
 */
struct ChshSettings {
    Direction a;
    Direction a_prime;
    Direction b;
    Direction b_prime;

    static ChshSettings planar_degrees(double a, double a_prime, double b, double b_prime);
    std::array<SettingPair, 4> pairs() const;
};

inline constexpr std::array<int, 4> kChshSigns{+1, -1, +1, +1};
inline constexpr double kClassicalBound = 2.0;

struct ChshTerm {
    double correlation = 0.0;
    double std_error = 0.0;
    std::uint64_t n_trials = 0;    // all trials in the series
    std::uint64_t n_detected = 0;  // trials with a recorded outcome
};

struct ChshReport {
    double s_value = 0.0;
    std::array<ChshTerm, 4> terms{};
    double std_error = 0.0;          // combined, independent settings
    double s_max_over_signs = 0.0;   // max |S| over the four sign placements
    double bound_classical = kClassicalBound;
    bool violation_flag = false;     // |S| - 2 > 3 std_error (exact: > 1e-10)
};

// S for correlations in stored term order.
double chsh_combination(const std::array<double, 4>& correlations);
// max over which single term carries the minus sign of |sum|.
double chsh_max_over_signs(const std::array<double, 4>& correlations);

using ProbabilityFn = std::function<double(const Direction&, const Direction&, Outcome)>;

// Exact evaluation; standard errors zero. Throws DomainError if a setting's
// four probabilities do not sum to 1 within 1e-9 or leave [0, 1].
ChshReport chsh_from_model(const ProbabilityFn& prob, const ChshSettings& settings);

enum class Normalization {
    // E = (N_same - N_opposite) / N_detected (fair sampling).
    detected_pairs,
    // E = (N_same - N_opposite) / N_trials; lost pairs count as zero.
    raw_rate,
};

// Plug-in estimates from one series per term. Throws DataError if a series
// has no detected pairs.
ChshReport chsh_from_series(const std::array<TimeSeries, 4>& series,
                            Normalization normalization = Normalization::detected_pairs);

KvRecord to_record(const ChshReport& report);
std::string to_text(const ChshReport& report);

} // namespace spce
