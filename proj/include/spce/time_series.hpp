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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spce/quantum.hpp"

namespace spce {

enum class ModelTag { quantum, contextual, lrhv, external };

std::string_view model_tag_name(ModelTag tag);
// Throws ParameterError for an unknown name.
ModelTag parse_model_tag(std::string_view name);

// One trial: the coincidence outcome, or nullopt for a lost pair.
struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::uint32_t setting_id = 0;
    std::optional<Outcome> outcome;

    bool detected() const { return outcome.has_value(); }
    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/*!
 * Time series of one run of one experiment: trials in recording order with
 * strictly increasing trial indices.
 */
class TimeSeries {
  public:
    TimeSeries() = default;
    TimeSeries(std::string run_id, std::uint64_t seed, ModelTag tag)
        : run_id_(std::move(run_id)), seed_(seed), tag_(tag) {}

    // Throws ParameterError unless record.trial_index exceeds the last index.
    void append(const TrialRecord& record);
    // Appends with the next trial index (0 for an empty series).
    void append(std::uint32_t setting_id, std::optional<Outcome> outcome);

    const std::vector<TrialRecord>& trials() const { return trials_; }
    const TrialRecord& operator[](std::size_t i) const { return trials_[i]; }
    std::size_t size() const { return trials_.size(); }
    bool empty() const { return trials_.empty(); }
    void reserve(std::size_t n) { trials_.reserve(n); }

    const std::string& run_id() const { return run_id_; }
    std::uint64_t seed() const { return seed_; }
    ModelTag model_tag() const { return tag_; }
    void set_run_id(std::string id) { run_id_ = std::move(id); }
    void set_seed(std::uint64_t seed) { seed_ = seed; }
    void set_model_tag(ModelTag tag) { tag_ = tag; }

    std::uint64_t detected_count() const;
    // Same metadata; lost pairs removed; trial indices kept.
    TimeSeries detected_only() const;
    // Copy with the x and/or y outcomes relabeled (+1 <-> -1).
    TimeSeries relabeled(bool flip_x, bool flip_y) const;
    // Copy with only the given positions (ascending) retained.
    TimeSeries subset(const std::vector<std::size_t>& positions) const;

  private:
    std::vector<TrialRecord> trials_;
    std::string run_id_;
    std::uint64_t seed_ = 0;
    ModelTag tag_ = ModelTag::external;
};

/*!
 * CSV schema (UTF-8, LF line endings):
 *
 *   trial_index,setting_id,x,y
 *   0,0,+1,-1
 *   1,0,ND,ND
 *
 * x and y are "+1" or "-1"; a lost pair is "ND" in both columns.
 */
inline constexpr std::string_view kSeriesHeader = "trial_index,setting_id,x,y";

void write_csv(std::ostream& out, const TimeSeries& series);
// Throws IoError if the file cannot be written.
void save_csv(const std::filesystem::path& path, const TimeSeries& series);

// Throws ParseError naming the row and column of the first bad field. The
// result is tagged external.
TimeSeries read_csv(std::istream& in, const std::string& source_name = "<stream>");
TimeSeries load_csv(const std::filesystem::path& path);

} // namespace spce
