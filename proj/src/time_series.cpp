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

#include "spce/time_series.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "spce/errors.hpp"

namespace spce {

std::string_view model_tag_name(ModelTag tag) {
    switch (tag) {
    case ModelTag::quantum:
        return "quantum";
    case ModelTag::contextual:
        return "contextual";
    case ModelTag::lrhv:
        return "lrhv";
    case ModelTag::external:
        return "external";
    }
    return "external";
}

ModelTag parse_model_tag(std::string_view name) {
    for (ModelTag t : {ModelTag::quantum, ModelTag::contextual, ModelTag::lrhv, ModelTag::external}) {
        if (model_tag_name(t) == name) {
            return t;
        }
    }
    throw ParameterError("unknown model '" + std::string(name) + "'");
}

void TimeSeries::append(const TrialRecord& record) {
    if (!trials_.empty() && record.trial_index <= trials_.back().trial_index) {
        throw ParameterError("trial indices must be strictly increasing");
    }
    trials_.push_back(record);
}

void TimeSeries::append(std::uint32_t setting_id, std::optional<Outcome> outcome) {
    std::uint64_t next = trials_.empty() ? 0 : trials_.back().trial_index + 1;
    trials_.push_back({next, setting_id, outcome});
}

std::uint64_t TimeSeries::detected_count() const {
    std::uint64_t n = 0;
    for (const auto& t : trials_) {
        n += t.detected();
    }
    return n;
}

TimeSeries TimeSeries::detected_only() const {
    TimeSeries out(run_id_, seed_, tag_);
    out.reserve(detected_count());
    for (const auto& t : trials_) {
        if (t.detected()) {
            out.trials_.push_back(t);
        }
    }
    return out;
}

TimeSeries TimeSeries::relabeled(bool flip_x, bool flip_y) const {
    TimeSeries out = *this;
    for (auto& t : out.trials_) {
        if (t.outcome) {
            if (flip_x) {
                t.outcome->x = flip(t.outcome->x);
            }
            if (flip_y) {
                t.outcome->y = flip(t.outcome->y);
            }
        }
    }
    return out;
}

TimeSeries TimeSeries::subset(const std::vector<std::size_t>& positions) const {
    TimeSeries out(run_id_, seed_, tag_);
    out.reserve(positions.size());
    for (std::size_t p : positions) {
        out.append(trials_.at(p));
    }
    return out;
}

namespace {

const char* spin_token(Spin s) { return s == Spin::up ? "+1" : "-1"; }

} // namespace

void write_csv(std::ostream& out, const TimeSeries& series) {
    std::string buffer;
    buffer.reserve(32 * (series.size() + 1));
    buffer.append(kSeriesHeader);
    buffer += '\n';
    char num[32];
    for (const auto& t : series.trials()) {
        auto end = std::to_chars(num, num + sizeof num, t.trial_index).ptr;
        buffer.append(num, end);
        buffer += ',';
        end = std::to_chars(num, num + sizeof num, t.setting_id).ptr;
        buffer.append(num, end);
        if (t.outcome) {
            buffer += ',';
            buffer += spin_token(t.outcome->x);
            buffer += ',';
            buffer += spin_token(t.outcome->y);
        } else {
            buffer += ",ND,ND";
        }
        buffer += '\n';
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void save_csv(const std::filesystem::path& path, const TimeSeries& series) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    write_csv(out, series);
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

namespace {

constexpr const char* kCsvColumns[4] = {"trial_index", "setting_id", "x", "y"};

template <class T>
T parse_unsigned(std::string_view field, const std::string& source, std::size_t row, const char* column) {
    T v{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(source, row, column, "expected a non-negative integer, got '" + std::string(field) + "'");
    }
    return v;
}

// nullopt means ND
std::optional<Spin> parse_token(std::string_view field, const std::string& source, std::size_t row,
                                const char* column) {
    if (field == "+1") {
        return Spin::up;
    }
    if (field == "-1") {
        return Spin::down;
    }
    if (field == "ND") {
        return std::nullopt;
    }
    throw ParseError(source, row, column, "expected +1, -1 or ND, got '" + std::string(field) + "'");
}

} // namespace

TimeSeries read_csv(std::istream& in, const std::string& source_name) {
    TimeSeries series;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!header_seen) {
            if (line != kSeriesHeader) {
                throw ParseError(source_name, row, "header", "expected '" + std::string(kSeriesHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        auto commas = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
        if (commas < 3) {
            throw ParseError(source_name, row, kCsvColumns[commas + 1], "missing field");
        }
        if (commas > 3) {
            throw ParseError(source_name, row, "y", "unexpected extra fields");
        }
        std::string_view rest(line);
        std::string_view fields[4];
        for (std::size_t k = 0; k < 4; ++k) {
            auto comma = rest.find(',');
            fields[k] = rest.substr(0, comma);
            rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
        }
        TrialRecord r;
        r.trial_index = parse_unsigned<std::uint64_t>(fields[0], source_name, row, kCsvColumns[0]);
        r.setting_id = parse_unsigned<std::uint32_t>(fields[1], source_name, row, kCsvColumns[1]);
        auto x = parse_token(fields[2], source_name, row, kCsvColumns[2]);
        auto y = parse_token(fields[3], source_name, row, kCsvColumns[3]);
        if (x.has_value() != y.has_value()) {
            throw ParseError(source_name, row, x ? "y" : "x", "ND must appear in both outcome columns");
        }
        if (x) {
            r.outcome = Outcome{*x, *y};
        }
        if (!series.empty() && r.trial_index <= series.trials().back().trial_index) {
            throw ParseError(source_name, row, kCsvColumns[0], "trial indices must be strictly increasing");
        }
        series.append(r);
    }
    if (!header_seen) {
        throw ParseError(source_name, 1, "header", "empty file");
    }
    return series;
}

TimeSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return read_csv(in, path.string());
}

} // namespace spce
