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

#include "spce/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "spce/errors.hpp"

namespace spce::harness {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != value.size() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a finite number, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != value.size() || value[0] == '-') {
        throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw ConfigError(key, "expected true or false, got '" + value + "'");
}

const std::regex kSettingKey(R"(setting\.(\d+)\.(a|b))");
const std::regex kAtomKey(R"(lrhv\.atom\.(\d+)\.(lambda|count))");

const std::map<std::string, bool>& known_keys() {
    // value: key takes part in the canonical config
    static const std::map<std::string, bool> keys{
        {"model", true},
        {"n_trials", true},
        {"seed", true},
        {"output", false},
        {"threads", false},
        {"angles.doubling", true},
        {"contextual.epsilon", true},
        {"contextual.epsilon_a", true},
        {"contextual.epsilon_b", true},
        {"contextual.eta", true},
        {"contextual.eta_a", true},
        {"contextual.eta_b", true},
        {"contextual.profile", true},
        {"contextual.sigma", true},
        {"lrhv.ensemble", true},
        {"lrhv.response", true},
        {"lrhv.table", true},
        {"lrhv.order", true},
    };
    return keys;
}

bool is_known(const std::string& key) {
    return known_keys().count(key) || std::regex_match(key, kSettingKey) || std::regex_match(key, kAtomKey);
}

} // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& source) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(source, row, "key", "expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(source, row, "key", "empty key");
        }
        if (cfg.values_.count(key)) {
            throw ParseError(source, row, key, "duplicate key");
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    ConfigFile cfg = parse(ss.str(), path.string());
    cfg.base_dir_ = path.parent_path();
    return cfg;
}

const std::string& ConfigFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError(key, "required key is missing");
    }
    return it->second;
}

std::string ConfigFile::to_text() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

ConfigFile canonical_config(const ConfigFile& file) {
    ConfigFile out;
    out.set_base_dir(file.base_dir());
    for (const auto& [k, v] : file.values()) {
        auto it = known_keys().find(k);
        if (it != known_keys().end() && !it->second) {
            continue;
        }
        out.set(k, v);
    }
    return out;
}

Direction parse_direction(const std::string& key, const std::string& value, bool angle_doubling) {
    std::string v = value;
    for (char& c : v) {
        if (c == ',') {
            c = ' ';
        }
    }
    std::istringstream in(v);
    std::vector<std::string> parts;
    std::string tok;
    while (in >> tok) {
        parts.push_back(tok);
    }
    if (parts.size() == 1) {
        double deg = parse_double(key, parts[0]);
        return Direction::planar_degrees(angle_doubling ? 2.0 * deg : deg);
    }
    if (parts.size() == 3) {
        Vec3 c{parse_double(key, parts[0]), parse_double(key, parts[1]), parse_double(key, parts[2])};
        if (angle_doubling) {
            throw ConfigError(key, "angle doubling applies to planar angles only");
        }
        try {
            return Direction::normalized(c);
        } catch (const DomainError&) {
            throw ConfigError(key, "direction vector must be non-zero");
        }
    }
    throw ConfigError(key, "expected a planar angle in degrees or three components");
}

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("SPCE_OUT_DIR"); env && *env) {
        return env;
    }
    return "spce_runs";
}

ExperimentConfig parse_experiment(const ConfigFile& file) {
    for (const auto& [k, v] : file.values()) {
        if (!is_known(k)) {
            throw ConfigError(k, "unknown key");
        }
    }
    ExperimentConfig cfg;
    try {
        cfg.model = parse_model_tag(file.get("model"));
    } catch (const ParameterError&) {
        throw ConfigError("model", "expected quantum, contextual or lrhv, got '" + file.get("model") + "'");
    }
    if (cfg.model == ModelTag::external) {
        throw ConfigError("model", "external data cannot be simulated");
    }
    cfg.n_trials = parse_u64("n_trials", file.get("n_trials"));
    if (cfg.n_trials < 1) {
        throw ConfigError("n_trials", "must be at least 1");
    }
    if (file.has("seed")) {
        cfg.seed = parse_u64("seed", file.get("seed"));
    }
    if (file.has("output")) {
        cfg.output = file.get("output");
    }
    if (file.has("threads")) {
        std::uint64_t t = parse_u64("threads", file.get("threads"));
        if (t < 1 || t > 1024) {
            throw ConfigError("threads", "must lie in [1, 1024]");
        }
        cfg.threads = static_cast<unsigned>(t);
    }
    if (file.has("angles.doubling")) {
        cfg.angle_doubling = parse_bool("angles.doubling", file.get("angles.doubling"));
    }

    std::map<std::uint32_t, std::pair<std::optional<Direction>, std::optional<Direction>>> settings;
    std::map<std::uint32_t, std::pair<std::optional<std::string>, std::optional<std::uint64_t>>> atoms;
    for (const auto& [k, v] : file.values()) {
        std::smatch m;
        if (std::regex_match(k, m, kSettingKey)) {
            std::uint64_t id = parse_u64(k, m[1].str());
            if (id > 0xffffffffu) {
                throw ConfigError(k, "setting id out of range");
            }
            auto& slot = settings[static_cast<std::uint32_t>(id)];
            (m[2] == "a" ? slot.first : slot.second) = parse_direction(k, v, cfg.angle_doubling);
        } else if (std::regex_match(k, m, kAtomKey)) {
            auto& slot = atoms[static_cast<std::uint32_t>(parse_u64(k, m[1].str()))];
            if (m[2] == "lambda") {
                slot.first = v;
            } else {
                slot.second = parse_u64(k, v);
            }
        }
    }
    if (settings.empty()) {
        throw ConfigError("setting.<id>.a", "at least one setting is required");
    }
    for (const auto& [id, pair] : settings) {
        std::string prefix = "setting." + std::to_string(id);
        if (!pair.first) {
            throw ConfigError(prefix + ".a", "missing direction");
        }
        if (!pair.second) {
            throw ConfigError(prefix + ".b", "missing direction");
        }
        cfg.settings.push_back({id, *pair.first, *pair.second});
    }

    if (cfg.model == ModelTag::contextual) {
        auto side = [&](const std::string& both, const std::string& one) -> std::optional<double> {
            if (file.has(one)) {
                return parse_double(one, file.get(one));
            }
            if (file.has(both)) {
                return parse_double(both, file.get(both));
            }
            return std::nullopt;
        };
        auto ea = side("contextual.epsilon", "contextual.epsilon_a");
        auto eb = side("contextual.epsilon", "contextual.epsilon_b");
        if (!ea || !eb) {
            throw ConfigError("contextual.epsilon", "required for the contextual model");
        }
        cfg.epsilon_a = *ea;
        cfg.epsilon_b = *eb;
        for (auto [key, val] : {std::pair{"contextual.epsilon_a", cfg.epsilon_a}, {"contextual.epsilon_b", cfg.epsilon_b}}) {
            if (!(val > 0.0 && val < 2.0)) {
                throw ConfigError(file.has(key) ? key : "contextual.epsilon", "must lie in (0, 2)");
            }
        }
        cfg.eta_a = side("contextual.eta", "contextual.eta_a").value_or(1.0);
        cfg.eta_b = side("contextual.eta", "contextual.eta_b").value_or(1.0);
        for (auto [key, val] : {std::pair{"contextual.eta_a", cfg.eta_a}, {"contextual.eta_b", cfg.eta_b}}) {
            if (!(val > 0.0 && val <= 1.0)) {
                throw ConfigError(file.has(key) ? key : "contextual.eta", "must lie in (0, 1]");
            }
        }
        std::string profile = file.has("contextual.profile") ? file.get("contextual.profile") : "uniform";
        if (profile == "uniform") {
            cfg.profile = CapProfile::uniform;
        } else if (profile == "truncated-gaussian") {
            cfg.profile = CapProfile::truncated_gaussian;
            cfg.sigma = parse_double("contextual.sigma", file.get("contextual.sigma"));
            if (!(cfg.sigma > 0.0)) {
                throw ConfigError("contextual.sigma", "must be positive");
            }
        } else {
            throw ConfigError("contextual.profile", "expected uniform or truncated-gaussian, got '" + profile + "'");
        }
    }

    if (cfg.model == ModelTag::lrhv) {
        std::string response = file.has("lrhv.response") ? file.get("lrhv.response") : "deterministic-sign";
        if (response == "deterministic-sign") {
            cfg.response = ResponseKind::deterministic_sign;
        } else if (response == "table") {
            cfg.response = ResponseKind::table;
            std::filesystem::path p = file.get("lrhv.table");
            cfg.table_path = p.is_absolute() ? p : file.base_dir() / p;
        } else {
            throw ConfigError("lrhv.response", "expected deterministic-sign or table, got '" + response + "'");
        }
        std::string ensemble = file.has("lrhv.ensemble") ? file.get("lrhv.ensemble") : "uniform-sphere";
        if (ensemble == "uniform-sphere") {
            cfg.ensemble = EnsembleKind::uniform_sphere;
            if (cfg.response == ResponseKind::table) {
                throw ConfigError("lrhv.ensemble", "table responses need lrhv.ensemble = atoms");
            }
        } else if (ensemble == "atoms") {
            cfg.ensemble = EnsembleKind::atoms;
            if (atoms.empty()) {
                throw ConfigError("lrhv.atom.<k>.lambda", "atomic ensemble needs at least one atom");
            }
            for (const auto& [k, slot] : atoms) {
                std::string prefix = "lrhv.atom." + std::to_string(k);
                if (!slot.first) {
                    throw ConfigError(prefix + ".lambda", "missing");
                }
                std::uint64_t count = slot.second.value_or(1);
                if (count == 0) {
                    throw ConfigError(prefix + ".count", "must be positive");
                }
                if (cfg.response == ResponseKind::table) {
                    std::uint64_t id = parse_u64(prefix + ".lambda", *slot.first);
                    cfg.atoms.push_back({HiddenVariable::from_id(static_cast<LambdaId>(id)), count});
                } else {
                    cfg.atoms.push_back({HiddenVariable(parse_direction(prefix + ".lambda", *slot.first, false)), count});
                }
            }
        } else {
            throw ConfigError("lrhv.ensemble", "expected uniform-sphere or atoms, got '" + ensemble + "'");
        }
        std::string order = file.has("lrhv.order") ? file.get("lrhv.order") : "as-drawn";
        if (order == "as-drawn") {
            cfg.order = DrawOrder::as_drawn;
        } else if (order == "block") {
            cfg.order = DrawOrder::block;
            if (cfg.ensemble != EnsembleKind::atoms) {
                throw ConfigError("lrhv.order", "block ordering needs an atomic ensemble");
            }
        } else {
            throw ConfigError("lrhv.order", "expected as-drawn or block, got '" + order + "'");
        }
    }
    return cfg;
}

ExperimentSetting ExperimentConfig::contextual_setting(const ConfiguredSetting& s) const {
    auto cap = [&](const Direction& center, double eps) {
        return profile == CapProfile::uniform ? CapDistribution::uniform(center, eps)
                                              : CapDistribution::truncated_gaussian(center, eps, sigma);
    };
    return ExperimentSetting{cap(s.a, epsilon_a), cap(s.b, epsilon_b), eta_a, eta_b};
}

HiddenVariableEnsemble ExperimentConfig::hidden_ensemble() const {
    if (ensemble == EnsembleKind::atoms) {
        return AtomicEnsemble(atoms);
    }
    return UniformSphereEnsemble{};
}

ResponseModel ExperimentConfig::response_model() const {
    if (response == ResponseKind::table) {
        // direction ids in the table are setting ids, which must run 0..n-1
        std::vector<SettingPair> contexts;
        for (const auto& s : settings) {
            if (s.id != contexts.size()) {
                throw ConfigError("setting." + std::to_string(s.id) + ".a",
                                  "table responses need setting ids 0, 1, 2, ... without gaps");
            }
            contexts.push_back({s.a, s.b});
        }
        try {
            return ResponseModel::table(load_kernel_table(table_path), contexts);
        } catch (const ParameterError& e) {
            throw ConfigError("lrhv.table", e.what());
        } catch (const ContractError& e) {
            throw ConfigError("lrhv.table", e.what());
        } catch (const DomainError& e) {
            throw ConfigError("lrhv.table", e.what());
        } catch (const ParseError& e) {
            throw ConfigError("lrhv.table", e.what());
        }
    }
    return ResponseModel::deterministic_sign();
}

} // namespace spce::harness
