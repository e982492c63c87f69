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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spce/random.hpp"
#include "spce/report.hpp"
#include "spce/time_series.hpp"

namespace spce {

/*!
 * Result of one non-parametric purity test.
 *
 * reject == (applicable && p_value < alpha). A test that cannot be applied
 * (for example a runs test on a constant series) reports p_value = 1.
 */
struct PurityReport {
    std::string test_name;
    double statistic = 0.0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject = false;
    bool applicable = true;
    // Some expected cell count of a chi-square table fell below 5.
    bool low_expected_count = false;
    std::vector<std::pair<std::string, std::string>> scheme;
};

// Minimum number of trials in a sub-ensemble.
inline constexpr std::size_t kRichnessFloor = 30;

/*!
 * m random sub-ensembles, each round(fraction * n) trials drawn without
 * replacement and kept in recording order. Different sub-ensembles may
 * overlap. Throws ParameterError if fraction is outside (0, 1], m == 0, or
 * fraction * n < kRichnessFloor.
 */
std::vector<TimeSeries> random_subensembles(const TimeSeries& series, std::size_t m, double fraction,
                                            const RandomStream& rng);

// m consecutive blocks of (nearly) equal length covering the series.
std::vector<TimeSeries> contiguous_blocks(const TimeSeries& series, std::size_t m);

struct HomogeneityOptions {
    double alpha = 0.05;
    // Length of the series the sub-ensembles were drawn from. When non-zero
    // the statistic is divided by the finite-population factor
    // (1 - f) N / (N - 1), f = k / N, because sub-ensembles drawn without
    // replacement from one finite record vary less than independent samples.
    // Leave zero for disjoint blocks.
    std::uint64_t population_size = 0;
};

/*!
 * Chi-square homogeneity of the outcome categories (x, y) across
 * sub-ensembles; lost pairs are ignored. Categories empty in every
 * sub-ensemble are dropped from the table.
 * Throws ParameterError for fewer than 2 sub-ensembles or mixed setting ids.
 */
PurityReport homogeneity_test(std::span<const TimeSeries> subsamples, const HomogeneityOptions& options = {});

enum class Channel { x, y };

/*!
 * Wald-Wolfowitz runs test with the normal approximation, two-sided.
 * Throws ParameterError for fewer than kRichnessFloor detected trials.
 */
PurityReport runs_test(const TimeSeries& series, Channel channel = Channel::x, double alpha = 0.05);
PurityReport runs_test(std::span<const std::int8_t> signs, double alpha = 0.05);

// Chi-square comparison of outcome categories in the first and second half
// of the detected trials.
PurityReport half_split_test(const TimeSeries& series, double alpha = 0.05);

// Chi-square comparison of the loss rate (detected vs lost) between the
// two halves of the full series. Not applicable without lost pairs.
PurityReport detection_rate_test(const TimeSeries& series, double alpha = 0.05);

struct PurityConfig {
    double alpha = 0.05;           // family-wise level
    std::size_t subsamples = 10;
    double fraction = 0.5;
    std::uint64_t seed = 0;
};

struct PuritySuiteResult {
    std::vector<PurityReport> reports;
    double family_alpha = 0.05;
    double per_test_alpha = 0.05;  // Bonferroni over applicable tests
    bool pure_consistent = true;
};

/*!
 * Homogeneity over random sub-ensembles, runs tests on x and on y, the
 * half-split comparison and, when pairs were lost, the loss-rate
 * comparison. Lost pairs are removed before the outcome tests. The series
 * is pure-consistent iff no applicable test rejects at alpha / k.
 */
PuritySuiteResult purity_suite(const TimeSeries& series, const PurityConfig& config = {});

KvRecord to_record(const PuritySuiteResult& result);
std::string to_text(const PuritySuiteResult& result);

// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, double degrees_of_freedom);

} // namespace spce
