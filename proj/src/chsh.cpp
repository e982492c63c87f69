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

#include "spce/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "spce/errors.hpp"

namespace spce {

ChshSettings ChshSettings::planar_degrees(double a, double a_prime, double b, double b_prime) {
    return {Direction::planar_degrees(a), Direction::planar_degrees(a_prime), Direction::planar_degrees(b),
            Direction::planar_degrees(b_prime)};
}

std::array<SettingPair, 4> ChshSettings::pairs() const {
    return {SettingPair{a, b}, SettingPair{a, b_prime}, SettingPair{a_prime, b}, SettingPair{a_prime, b_prime}};
}

double chsh_combination(const std::array<double, 4>& e) {
    return ((kChshSigns[0] * e[0] + kChshSigns[1] * e[1]) + kChshSigns[2] * e[2]) + kChshSigns[3] * e[3];
}

double chsh_max_over_signs(const std::array<double, 4>& e) {
    double best = 0.0;
    double total = e[0] + e[1] + e[2] + e[3];
    for (double term : e) {
        best = std::max(best, std::abs(total - 2.0 * term));
    }
    return best;
}

namespace {

void finish(ChshReport& r) {
    std::array<double, 4> e{};
    double var = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        e[k] = r.terms[k].correlation;
        var += r.terms[k].std_error * r.terms[k].std_error;
    }
    r.s_value = chsh_combination(e);
    r.s_max_over_signs = chsh_max_over_signs(e);
    r.std_error = std::sqrt(var);
    double margin = r.std_error > 0.0 ? 3.0 * r.std_error : 1e-10;
    r.violation_flag = std::abs(r.s_value) - r.bound_classical > margin;
}

} // namespace

ChshReport chsh_from_model(const ProbabilityFn& prob, const ChshSettings& settings) {
    ChshReport report;
    auto pairs = settings.pairs();
    for (std::size_t k = 0; k < 4; ++k) {
        double sum = 0.0;
        double e = 0.0;
        for (const Outcome& o : kOutcomes) {
            double p = prob(pairs[k].a, pairs[k].b, o);
            if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
                throw DomainError("model probability outside [0, 1]");
            }
            sum += p;
            e += value(o.x) * value(o.y) * p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw DomainError("model probabilities for term " + std::to_string(k) + " sum to " +
                              std::to_string(sum));
        }
        report.terms[k].correlation = e;
    }
    finish(report);
    return report;
}

ChshReport chsh_from_series(const std::array<TimeSeries, 4>& series, Normalization normalization) {
    ChshReport report;
    for (std::size_t k = 0; k < 4; ++k) {
        std::uint64_t same = 0, opposite = 0, total = series[k].size();
        for (const auto& t : series[k].trials()) {
            if (t.outcome) {
                (t.outcome->x == t.outcome->y ? same : opposite) += 1;
            }
        }
        std::uint64_t detected = same + opposite;
        if (detected == 0) {
            throw DataError("CHSH term " + std::to_string(k) + " has no detected pairs");
        }
        double n = static_cast<double>(normalization == Normalization::detected_pairs ? detected : total);
        double e = (static_cast<double>(same) - static_cast<double>(opposite)) / n;
        double second_moment = static_cast<double>(detected) / n;
        ChshTerm& term = report.terms[k];
        term.correlation = e;
        term.std_error = std::sqrt(std::max(0.0, second_moment - e * e) / n);
        term.n_trials = total;
        term.n_detected = detected;
    }
    finish(report);
    return report;
}

KvRecord to_record(const ChshReport& r) {
    KvRecord rec;
    rec.add("analysis", "chsh").add("s_value", r.s_value).add("std_error", r.std_error);
    static const char* names[4] = {"ab", "ab_prime", "a_prime_b", "a_prime_b_prime"};
    for (std::size_t k = 0; k < 4; ++k) {
        std::string p = std::string("e.") + names[k];
        rec.add(p, r.terms[k].correlation)
            .add(p + ".std_error", r.terms[k].std_error)
            .add(p + ".n_trials", r.terms[k].n_trials)
            .add(p + ".n_detected", r.terms[k].n_detected);
    }
    rec.add("s_max_over_signs", r.s_max_over_signs)
        .add("bound_classical", r.bound_classical)
        .add("violation", r.violation_flag);
    return rec;
}

std::string to_text(const ChshReport& r) {
    static const char* names[4] = {"E(a,b)  ", "E(a,b') ", "E(a',b) ", "E(a',b')"};
    std::string out = "CHSH  S = E(a,b) - E(a,b') + E(a',b) + E(a',b')\n";
    char buf[160];
    for (std::size_t k = 0; k < 4; ++k) {
        std::snprintf(buf, sizeof buf, "  %s = %+.6f +/- %.6f   (%llu detected / %llu trials)\n", names[k],
                      r.terms[k].correlation, r.terms[k].std_error,
                      static_cast<unsigned long long>(r.terms[k].n_detected),
                      static_cast<unsigned long long>(r.terms[k].n_trials));
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "  S = %+.6f +/- %.6f   max|S| over sign placements = %.6f\n", r.s_value,
                  r.std_error, r.s_max_over_signs);
    out += buf;
    std::snprintf(buf, sizeof buf, "  classical bound %.1f: %s\n", r.bound_classical,
                  r.violation_flag ? "VIOLATED" : "not violated");
    out += buf;
    return out;
}

} // namespace spce
