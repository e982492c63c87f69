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

#include "spce/harness/analyze.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "spce/errors.hpp"
#include "spce/harness/manifest.hpp"
#include "spce/kernel_table.hpp"

namespace spce::harness {

namespace {

// Series files of a run directory, ascending setting id.
std::vector<std::filesystem::path> run_series(const std::filesystem::path& dir) {
    static const std::regex kName(R"(series_(\d+)\.csv)");
    std::vector<std::pair<std::uint64_t, std::filesystem::path>> found;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::smatch m;
        std::string name = entry.path().filename().string();
        if (std::regex_match(name, m, kName)) {
            found.emplace_back(std::stoull(m[1].str()), entry.path());
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<std::filesystem::path> out;
    for (auto& f : found) {
        out.push_back(std::move(f.second));
    }
    return out;
}

// Run id of the manifest next to `file`, verified; empty for external data.
std::string owning_run(const std::filesystem::path& file) {
    auto dir = file.parent_path();
    if (dir.empty()) {
        dir = ".";
    }
    if (!std::filesystem::exists(dir / "manifest.txt")) {
        return {};
    }
    return verify_run(dir).run_id;
}

void require_count(const std::vector<std::filesystem::path>& inputs, std::size_t n, const std::string& what) {
    if (inputs.size() != n) {
        throw ParameterError(what + " expects " + std::to_string(n) + " input(s), got " +
                             std::to_string(inputs.size()));
    }
}

AnalysisOutcome analyze_chsh(std::vector<std::filesystem::path> inputs, const AnalysisOptions& options) {
    if (inputs.size() == 1 && std::filesystem::is_directory(inputs[0])) {
        inputs = run_series(inputs[0]);
        if (inputs.size() != 4) {
            throw ParameterError("run directory holds " + std::to_string(inputs.size()) +
                                 " series; chsh needs exactly four");
        }
    }
    require_count(inputs, 4, "chsh");
    std::array<TimeSeries, 4> series;
    std::string run_id;
    for (std::size_t i = 0; i < 4; ++i) {
        series[i] = load_csv(inputs[i]);
        std::string owner = owning_run(inputs[i]);
        if (i == 0) {
            run_id = owner;
        } else if (owner != run_id) {
            run_id.clear();
        }
    }
    ChshReport report = chsh_from_series(series, options.normalization);
    AnalysisOutcome out;
    out.record.add("analysis", "chsh");
    if (!run_id.empty()) {
        out.record.add("run_id", run_id);
    }
    out.record.add("normalization", options.normalization == Normalization::detected_pairs ? "detected_pairs"
                                                                                              : "raw_rate");
    KvRecord fields = to_record(report);
    for (const auto& [k, v] : fields.fields()) {
        if (k != "analysis") {
            out.record.add(k, v);
        }
    }
    out.text = to_text(report);
    return out;
}

AnalysisOutcome analyze_purity(const std::vector<std::filesystem::path>& inputs, const AnalysisOptions& options) {
    require_count(inputs, 1, "purity");
    TimeSeries series = load_csv(inputs[0]);
    std::string run_id = owning_run(inputs[0]);
    PuritySuiteResult result = purity_suite(series, options.purity);
    AnalysisOutcome out;
    out.record.add("analysis", "purity");
    if (!run_id.empty()) {
        out.record.add("run_id", run_id);
    }
    KvRecord fields = to_record(result);
    for (const auto& [k, v] : fields.fields()) {
        if (k != "analysis") {
            out.record.add(k, v);
        }
    }
    out.text = to_text(result);
    out.rejected = !result.pure_consistent;
    return out;
}

AnalysisOutcome analyze_factorization(const std::vector<std::filesystem::path>& inputs,
                                      const AnalysisOptions& options) {
    require_count(inputs, 1, "factorization");
    KernelTable table = load_kernel_table(inputs[0]);
    table.validate();
    FactorizationReport report = check_factorization(table, options.factorization_tolerance);
    auto keys = table.keys();
    const auto& worst = keys.at(report.worst_point);
    AnalysisOutcome out;
    out.record.add("analysis", "factorization")
        .add("rows", static_cast<std::uint64_t>(keys.size()))
        .add("max_violation", report.max_violation)
        .add("worst.lambda_id", static_cast<std::uint64_t>(worst.first))
        .add("worst.direction_id", static_cast<std::uint64_t>(worst.second))
        .add("tolerance", report.tolerance)
        .add("factorizes", report.factorizes());
    std::ostringstream text;
    text << "factorization check over " << keys.size() << " (lambda, direction) rows\n"
         << "  max violation   " << format_double(report.max_violation) << " at lambda " << worst.first
         << ", direction " << worst.second << '\n'
         << "  tolerance       " << format_double(report.tolerance) << '\n'
         << "  verdict         " << (report.factorizes() ? "factorizes" : "does not factorize") << '\n';
    out.text = text.str();
    out.rejected = !report.factorizes();
    return out;
}

} // namespace

AnalysisKind parse_analysis_kind(const std::string& name) {
    if (name == "chsh") {
        return AnalysisKind::chsh;
    }
    if (name == "purity") {
        return AnalysisKind::purity;
    }
    if (name == "factorization") {
        return AnalysisKind::factorization;
    }
    throw ParameterError("unknown analysis '" + name + "' (expected chsh, purity or factorization)");
}

AnalysisOutcome analyze(AnalysisKind kind, const std::vector<std::filesystem::path>& inputs,
                        const AnalysisOptions& options) {
    switch (kind) {
    case AnalysisKind::chsh:
        return analyze_chsh(inputs, options);
    case AnalysisKind::purity:
        return analyze_purity(inputs, options);
    case AnalysisKind::factorization:
        return analyze_factorization(inputs, options);
    }
    throw ParameterError("unknown analysis kind");
}

std::string record_to_csv(const KvRecord& record) {
    std::string out = "key,value\n";
    for (const auto& [k, v] : record.fields()) {
        out += k;
        out += ',';
        out += v;
        out += '\n';
    }
    return out;
}

} // namespace spce::harness
