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
#include <string>
#include <vector>

#include "spce/chsh.hpp"
#include "spce/lrhv.hpp"
#include "spce/purity.hpp"
#include "spce/report.hpp"

namespace spce::harness {

enum class AnalysisKind { chsh, purity, factorization };

// Throws ParameterError for an unknown name.
AnalysisKind parse_analysis_kind(const std::string& name);

struct AnalysisOptions {
    Normalization normalization = Normalization::detected_pairs;
    PurityConfig purity;
    double factorization_tolerance = kFactorizationTolerance;
};

struct AnalysisOutcome {
    KvRecord record;
    std::string text;
    // Verdict against the null: non-pure series or non-factorizing table.
    bool rejected = false;
};

/*!
 * chsh:          four series files in the order (a,b), (a,b'), (a',b),
 *                (a',b'), or one run directory with exactly four series.
 * purity:        one series file.
 * factorization: one kernel table file.
 *
 * Series inside a run directory are verified against its manifest and
 * the run id is added to the record.
 */
AnalysisOutcome analyze(AnalysisKind kind, const std::vector<std::filesystem::path>& inputs,
                        const AnalysisOptions& options = {});

// "key,value" rows with a header line.
std::string record_to_csv(const KvRecord& record);

} // namespace spce::harness
