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

#include "spce/kernel_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "spce/errors.hpp"

namespace spce {

void KernelTable::set(LambdaId lambda, ContextId context, Outcome out, double probability) {
    entries_[{lambda, context}][outcome_index(out)] = probability;
}

bool KernelTable::contains(LambdaId lambda, ContextId context) const {
    return entries_.count({lambda, context}) != 0;
}

const JointTable& KernelTable::at(LambdaId lambda, ContextId context) const {
    auto it = entries_.find({lambda, context});
    if (it == entries_.end()) {
        throw ParameterError("kernel table has no entry for lambda " + std::to_string(lambda) + ", direction " +
                             std::to_string(context));
    }
    return it->second;
}

std::vector<KernelTable::Key> KernelTable::keys() const {
    std::vector<Key> out;
    out.reserve(entries_.size());
    for (const auto& [key, table] : entries_) {
        out.push_back(key);
    }
    return out;
}

std::vector<LambdaId> KernelTable::lambda_ids() const {
    std::set<LambdaId> ids;
    for (const auto& [key, table] : entries_) {
        ids.insert(key.first);
    }
    return {ids.begin(), ids.end()};
}

std::vector<ContextId> KernelTable::context_ids() const {
    std::set<ContextId> ids;
    for (const auto& [key, table] : entries_) {
        ids.insert(key.second);
    }
    return {ids.begin(), ids.end()};
}

void KernelTable::validate(double tol) const {
    for (const auto& [key, table] : entries_) {
        double sum = 0.0;
        for (double p : table) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw DomainError("kernel entry outside [0, 1] for lambda " + std::to_string(key.first) +
                                  ", direction " + std::to_string(key.second));
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol) {
            throw DomainError("kernel row for lambda " + std::to_string(key.first) + ", direction " +
                              std::to_string(key.second) + " sums to " + std::to_string(sum));
        }
    }
}

namespace {

constexpr const char* kColumns[5] = {"lambda_id", "direction_id", "x", "y", "probability"};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
            if (!current.empty()) {
                fields.push_back(current);
                current.clear();
            }
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        fields.push_back(current);
    }
    return fields;
}

std::uint32_t parse_id(const std::string& s, const std::string& source, std::size_t row, const char* column) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty() || s[0] == '-' || v > 0xffffffffu) {
        throw ParseError(source, row, column, "expected a non-negative integer id, got '" + s + "'");
    }
    return static_cast<std::uint32_t>(v);
}

Spin parse_spin(const std::string& s, const std::string& source, std::size_t row, const char* column) {
    if (s == "+1" || s == "1") {
        return Spin::up;
    }
    if (s == "-1") {
        return Spin::down;
    }
    throw ParseError(source, row, column, "expected +1 or -1, got '" + s + "'");
}

} // namespace

KernelTable read_kernel_table(std::istream& in, const std::string& source_name) {
    KernelTable table;
    std::set<std::pair<KernelTable::Key, std::size_t>> seen;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::vector<std::string> fields = split_fields(line);
        if (fields.empty()) {
            continue;
        }
        if (fields[0] == kColumns[0]) {
            continue;  // header
        }
        if (fields.size() != 5) {
            const char* column = fields.size() < 5 ? kColumns[fields.size()] : "probability";
            throw ParseError(source_name, row, column,
                             "expected 5 fields, got " + std::to_string(fields.size()));
        }
        LambdaId lambda = parse_id(fields[0], source_name, row, kColumns[0]);
        ContextId context = parse_id(fields[1], source_name, row, kColumns[1]);
        Outcome out{parse_spin(fields[2], source_name, row, kColumns[2]),
                    parse_spin(fields[3], source_name, row, kColumns[3])};
        double p = 0.0;
        std::size_t pos = 0;
        try {
            p = std::stod(fields[4], &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != fields[4].size() || !(p >= 0.0 && p <= 1.0)) {
            throw ParseError(source_name, row, kColumns[4], "expected a probability in [0, 1], got '" + fields[4] + "'");
        }
        if (!seen.insert({{lambda, context}, outcome_index(out)}).second) {
            throw ParseError(source_name, row, kColumns[2], "duplicate outcome for this lambda and direction");
        }
        table.set(lambda, context, out, p);
    }
    return table;
}

KernelTable load_kernel_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open kernel table " + path.string());
    }
    return read_kernel_table(in, path.string());
}

void write_kernel_table(std::ostream& out, const KernelTable& table) {
    out << "lambda_id,direction_id,x,y,probability\n";
    char buf[64];
    for (const auto& key : table.keys()) {
        const JointTable& t = table.at(key.first, key.second);
        for (std::size_t k = 0; k < 4; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", t[k]);
            out << key.first << ',' << key.second << ',' << (kOutcomes[k].x == Spin::up ? "+1" : "-1") << ','
                << (kOutcomes[k].y == Spin::up ? "+1" : "-1") << ',' << buf << '\n';
        }
    }
}

} // namespace spce
