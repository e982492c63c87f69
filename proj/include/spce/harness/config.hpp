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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spce/contextual.hpp"
#include "spce/direction.hpp"
#include "spce/lrhv.hpp"
#include "spce/time_series.hpp"

namespace spce::harness {

/*!
 * Flat key-value configuration text:
 *
 *   # comment
 *   model = contextual
 *   setting.0.a = 0
 *   setting.0.b = 3 0 4        # three components are normalized
 *   contextual.epsilon = 0.05
 *
 * Keys are dotted; values run to the end of the line (comments removed,
 * whitespace trimmed). A repeated key is an error.
 */
class ConfigFile {
  public:
    // Throws ParseError naming the line.
    static ConfigFile parse(const std::string& text, const std::string& source = "<config>");
    static ConfigFile load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void erase(const std::string& key) { values_.erase(key); }
    const std::map<std::string, std::string>& values() const { return values_; }

    // Directory used to resolve relative file references (e.g. lrhv.table).
    const std::filesystem::path& base_dir() const { return base_dir_; }
    void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

    // Sorted "key = value" lines.
    std::string to_text() const;

  private:
    std::map<std::string, std::string> values_;
    std::filesystem::path base_dir_;
};

struct ConfiguredSetting {
    std::uint32_t id;
    Direction a;
    Direction b;
};

enum class EnsembleKind { uniform_sphere, atoms };
enum class DrawOrder { as_drawn, block };

struct ExperimentConfig {
    ModelTag model = ModelTag::quantum;
    std::vector<ConfiguredSetting> settings;  // ascending id
    std::uint64_t n_trials = 0;
    std::optional<std::uint64_t> seed;
    std::filesystem::path output;             // empty: $SPCE_OUT_DIR or ./spce_runs
    unsigned threads = 1;
    bool angle_doubling = false;

    // contextual
    double epsilon_a = 0.0, epsilon_b = 0.0;
    double eta_a = 1.0, eta_b = 1.0;
    CapProfile profile = CapProfile::uniform;
    double sigma = 0.0;

    // lrhv
    EnsembleKind ensemble = EnsembleKind::uniform_sphere;
    std::vector<Atom> atoms;
    ResponseKind response = ResponseKind::deterministic_sign;
    std::filesystem::path table_path;
    DrawOrder order = DrawOrder::as_drawn;

    ExperimentSetting contextual_setting(const ConfiguredSetting& s) const;
    HiddenVariableEnsemble hidden_ensemble() const;
    ResponseModel response_model() const;
};

// Field-level validation; throws ConfigError naming the key.
ExperimentConfig parse_experiment(const ConfigFile& file);

// Keys that influence generated data; `output` and `threads` are excluded
// so the stored config, its hash and the run id do not depend on them.
ConfigFile canonical_config(const ConfigFile& file);

// Direction from "deg" (planar, x-z plane) or "x y z" / "x,y,z".
Direction parse_direction(const std::string& key, const std::string& value, bool angle_doubling);

std::filesystem::path default_output_dir();

} // namespace spce::harness
