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

#include "spce/purity.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "spce/errors.hpp"
#include "spce/simd/kernels.hpp"

namespace spce {

double chi_square_survival(double statistic, double degrees_of_freedom) {
    if (!(statistic > 0.0)) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

namespace {

struct ChiSquare {
    double statistic = 0.0;
    double dof = 0.0;
    bool low_expected = false;
    std::size_t categories = 0;
};

// Pearson chi-square for an r x C table of counts; all-zero columns dropped.
ChiSquare contingency(const std::vector<std::vector<std::uint64_t>>& counts) {
    ChiSquare out;
    const std::size_t rows = counts.size();
    const std::size_t cols = counts.empty() ? 0 : counts[0].size();
    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            row_sum[i] += static_cast<double>(counts[i][j]);
            col_sum[j] += static_cast<double>(counts[i][j]);
        }
        total += row_sum[i];
    }
    std::size_t used_cols = 0;
    for (double c : col_sum) {
        used_cols += c > 0.0;
    }
    std::size_t used_rows = 0;
    for (double r : row_sum) {
        used_rows += r > 0.0;
    }
    out.categories = used_cols;
    if (used_cols < 2 || used_rows < 2) {
        return out;
    }
    for (std::size_t i = 0; i < rows; ++i) {
        if (row_sum[i] == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (col_sum[j] == 0.0) {
                continue;
            }
            double expected = row_sum[i] * col_sum[j] / total;
            double diff = static_cast<double>(counts[i][j]) - expected;
            out.statistic += diff * diff / expected;
            out.low_expected |= expected < 5.0;
        }
    }
    out.dof = static_cast<double>((used_rows - 1) * (used_cols - 1));
    return out;
}

std::vector<std::uint64_t> outcome_counts(const TimeSeries& s, std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> c(4, 0);
    for (std::size_t i = begin; i < end; ++i) {
        if (s[i].outcome) {
            ++c[outcome_index(*s[i].outcome)];
        }
    }
    return c;
}

void decide(PurityReport& r) {
    r.p_value = std::clamp(r.p_value, 0.0, 1.0);
    r.reject = r.applicable && r.p_value < r.alpha;
}

std::string fmt(double v) { return format_double(v); }

} // namespace

std::vector<TimeSeries> random_subensembles(const TimeSeries& series, std::size_t m, double fraction,
                                            const RandomStream& rng) {
    if (m == 0) {
        throw ParameterError("need at least one sub-ensemble");
    }
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ParameterError("sub-ensemble fraction must lie in (0, 1]");
    }
    const std::size_t n = series.size();
    if (fraction * static_cast<double>(n) < static_cast<double>(kRichnessFloor)) {
        throw ParameterError("sub-ensembles would hold fewer than " + std::to_string(kRichnessFloor) + " trials");
    }
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::vector<TimeSeries> out;
    out.reserve(m);
    std::vector<std::size_t> index(n);
    for (std::size_t j = 0; j < m; ++j) {
        RandomStream s = rng.substream(j);
        std::iota(index.begin(), index.end(), 0);
        for (std::size_t i = 0; i < k; ++i) {
            std::swap(index[i], index[i + s.below(n - i)]);
        }
        std::vector<std::size_t> chosen(index.begin(), index.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(chosen.begin(), chosen.end());
        out.push_back(series.subset(chosen));
    }
    return out;
}

std::vector<TimeSeries> contiguous_blocks(const TimeSeries& series, std::size_t m) {
    if (m == 0 || m > series.size()) {
        throw ParameterError("block count must lie in [1, series length]");
    }
    std::vector<TimeSeries> out;
    const std::size_t n = series.size();
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t begin = j * n / m, end = (j + 1) * n / m;
        std::vector<std::size_t> positions(end - begin);
        std::iota(positions.begin(), positions.end(), begin);
        out.push_back(series.subset(positions));
    }
    return out;
}

PurityReport homogeneity_test(std::span<const TimeSeries> subsamples, const HomogeneityOptions& options) {
    if (subsamples.size() < 2) {
        throw ParameterError("homogeneity test needs at least 2 sub-ensembles");
    }
    std::optional<std::uint32_t> setting;
    std::vector<std::vector<std::uint64_t>> table;
    double mean_size = 0.0;
    for (const auto& s : subsamples) {
        for (const auto& t : s.trials()) {
            if (setting && *setting != t.setting_id) {
                throw ParameterError("sub-ensembles mix setting ids");
            }
            setting = t.setting_id;
        }
        table.push_back(outcome_counts(s, 0, s.size()));
        mean_size += static_cast<double>(s.size()) / static_cast<double>(subsamples.size());
    }
    ChiSquare chi = contingency(table);
    PurityReport r;
    r.test_name = "homogeneity";
    r.alpha = options.alpha;
    r.low_expected_count = chi.low_expected;
    r.scheme.emplace_back("subsamples", std::to_string(subsamples.size()));
    r.scheme.emplace_back("categories", std::to_string(chi.categories));
    double statistic = chi.statistic;
    if (options.population_size > 1) {
        double big_n = static_cast<double>(options.population_size);
        double f = mean_size / big_n;
        double factor = (1.0 - f) * big_n / (big_n - 1.0);
        if (factor > 0.0) {
            statistic /= factor;
        }
        r.scheme.emplace_back("population", std::to_string(options.population_size));
        r.scheme.emplace_back("fpc", fmt(factor));
    }
    r.statistic = statistic;
    r.applicable = chi.dof > 0.0;
    r.scheme.emplace_back("dof", fmt(chi.dof));
    r.p_value = r.applicable ? chi_square_survival(statistic, chi.dof) : 1.0;
    decide(r);
    return r;
}

PurityReport runs_test(std::span<const std::int8_t> signs, double alpha) {
    if (signs.size() < kRichnessFloor) {
        throw ParameterError("runs test needs at least " + std::to_string(kRichnessFloor) + " outcomes");
    }
    simd::BinaryRunStats s = simd::binary_run_stats(signs);
    PurityReport r;
    r.test_name = "runs";
    r.alpha = alpha;
    const double n = static_cast<double>(signs.size());
    const double n1 = static_cast<double>(s.ups);
    const double n2 = n - n1;
    const double runs = static_cast<double>(s.transitions) + 1.0;
    r.scheme.emplace_back("n", std::to_string(signs.size()));
    r.scheme.emplace_back("runs", fmt(runs));
    if (n1 == 0.0 || n2 == 0.0) {
        // A constant sequence has one run and no sampling distribution.
        r.applicable = false;
        r.scheme.emplace_back("note", "constant_series");
        decide(r);
        return r;
    }
    const double mean = 2.0 * n1 * n2 / n + 1.0;
    const double var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n) / (n * n * (n - 1.0));
    if (!(var > 0.0)) {
        r.applicable = false;
        decide(r);
        return r;
    }
    r.statistic = (runs - mean) / std::sqrt(var);
    r.p_value = std::erfc(std::abs(r.statistic) / std::sqrt(2.0));
    decide(r);
    return r;
}

PurityReport runs_test(const TimeSeries& series, Channel channel, double alpha) {
    std::vector<std::int8_t> signs;
    signs.reserve(series.size());
    for (const auto& t : series.trials()) {
        if (t.outcome) {
            signs.push_back(static_cast<std::int8_t>(value(channel == Channel::x ? t.outcome->x : t.outcome->y)));
        }
    }
    PurityReport r = runs_test(signs, alpha);
    r.test_name = channel == Channel::x ? "runs_x" : "runs_y";
    return r;
}

PurityReport half_split_test(const TimeSeries& series, double alpha) {
    TimeSeries detected = series.detected_only();
    const std::size_t n = detected.size();
    if (n < 2 * kRichnessFloor) {
        throw ParameterError("half-split test needs at least " + std::to_string(2 * kRichnessFloor) +
                             " detected trials");
    }
    ChiSquare chi = contingency({outcome_counts(detected, 0, n / 2), outcome_counts(detected, n / 2, n)});
    PurityReport r;
    r.test_name = "half_split";
    r.alpha = alpha;
    r.statistic = chi.statistic;
    r.low_expected_count = chi.low_expected;
    r.applicable = chi.dof > 0.0;
    r.p_value = r.applicable ? chi_square_survival(chi.statistic, chi.dof) : 1.0;
    r.scheme.emplace_back("split", std::to_string(n / 2));
    r.scheme.emplace_back("dof", fmt(chi.dof));
    decide(r);
    return r;
}

PurityReport detection_rate_test(const TimeSeries& series, double alpha) {
    const std::size_t n = series.size();
    if (n < 2 * kRichnessFloor) {
        throw ParameterError("loss-rate test needs at least " + std::to_string(2 * kRichnessFloor) + " trials");
    }
    auto halves = [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> c(2, 0);
        for (std::size_t i = begin; i < end; ++i) {
            ++c[series[i].detected() ? 0 : 1];
        }
        return c;
    };
    ChiSquare chi = contingency({halves(0, n / 2), halves(n / 2, n)});
    PurityReport r;
    r.test_name = "detection_rate";
    r.alpha = alpha;
    r.statistic = chi.statistic;
    r.low_expected_count = chi.low_expected;
    r.applicable = chi.dof > 0.0;
    r.p_value = r.applicable ? chi_square_survival(chi.statistic, chi.dof) : 1.0;
    r.scheme.emplace_back("split", std::to_string(n / 2));
    decide(r);
    return r;
}

PuritySuiteResult purity_suite(const TimeSeries& series, const PurityConfig& config) {
    PuritySuiteResult result;
    result.family_alpha = config.alpha;
    TimeSeries detected = series.detected_only();

    auto not_applicable = [&](const std::string& name, const std::string& why) {
        PurityReport r;
        r.test_name = name;
        r.applicable = false;
        r.scheme.emplace_back("note", why);
        return r;
    };

    try {
        auto subs = random_subensembles(detected, config.subsamples, config.fraction, RandomStream(config.seed));
        HomogeneityOptions opts;
        opts.population_size = detected.size();
        result.reports.push_back(homogeneity_test(subs, opts));
        result.reports.back().scheme.emplace_back("fraction", fmt(config.fraction));
    } catch (const ParameterError& e) {
        result.reports.push_back(not_applicable("homogeneity", e.what()));
    }
    for (Channel c : {Channel::x, Channel::y}) {
        try {
            result.reports.push_back(runs_test(detected, c));
        } catch (const ParameterError& e) {
            result.reports.push_back(not_applicable(c == Channel::x ? "runs_x" : "runs_y", e.what()));
        }
    }
    try {
        result.reports.push_back(half_split_test(detected));
    } catch (const ParameterError& e) {
        result.reports.push_back(not_applicable("half_split", e.what()));
    }
    if (detected.size() != series.size()) {
        try {
            result.reports.push_back(detection_rate_test(series));
        } catch (const ParameterError& e) {
            result.reports.push_back(not_applicable("detection_rate", e.what()));
        }
    }

    std::size_t applicable = 0;
    for (const auto& r : result.reports) {
        applicable += r.applicable;
    }
    result.per_test_alpha = config.alpha / static_cast<double>(std::max<std::size_t>(applicable, 1));
    result.pure_consistent = true;
    for (auto& r : result.reports) {
        r.alpha = result.per_test_alpha;
        decide(r);
        result.pure_consistent &= !r.reject;
    }
    return result;
}

KvRecord to_record(const PuritySuiteResult& result) {
    KvRecord rec;
    rec.add("analysis", "purity")
        .add("family_alpha", result.family_alpha)
        .add("per_test_alpha", result.per_test_alpha)
        .add("pure_consistent", result.pure_consistent);
    for (const auto& r : result.reports) {
        const std::string p = "test." + r.test_name;
        rec.add(p + ".applicable", r.applicable)
            .add(p + ".statistic", r.statistic)
            .add(p + ".p_value", r.p_value)
            .add(p + ".reject", r.reject)
            .add(p + ".low_expected_count", r.low_expected_count);
        for (const auto& [k, v] : r.scheme) {
            rec.add(p + "." + k, v);
        }
    }
    return rec;
}

std::string to_text(const PuritySuiteResult& result) {
    std::string out = "Purity tests (family alpha " + fmt(result.family_alpha) + ", per test " +
                      fmt(result.per_test_alpha) + ")\n";
    char buf[200];
    for (const auto& r : result.reports) {
        if (!r.applicable) {
            std::snprintf(buf, sizeof buf, "  %-15s not applicable\n", r.test_name.c_str());
        } else {
            std::snprintf(buf, sizeof buf, "  %-15s statistic %12.5g   p %10.4g   %s%s\n", r.test_name.c_str(),
                          r.statistic, r.p_value, r.reject ? "REJECT" : "ok",
                          r.low_expected_count ? "  (expected count < 5)" : "");
        }
        out += buf;
    }
    out += result.pure_consistent ? "  verdict: pure-consistent\n" : "  verdict: NOT pure\n";
    return out;
}

} // namespace spce
