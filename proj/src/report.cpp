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

#include "spce/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spce/errors.hpp"

namespace spce {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

KvRecord& KvRecord::add(const std::string& key, const std::string& value) {
    std::string v = value.empty() ? "-" : value;
    for (char& c : v) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            c = '_';
        }
    }
    fields_.emplace_back(key, v);
    return *this;
}

KvRecord& KvRecord::add(const std::string& key, double value) { return add(key, format_double(value)); }

KvRecord& KvRecord::add(const std::string& key, std::uint64_t value) { return add(key, std::to_string(value)); }

KvRecord& KvRecord::add(const std::string& key, int value) { return add(key, std::to_string(value)); }

KvRecord& KvRecord::add(const std::string& key, bool value) { return add(key, std::string(value ? "true" : "false")); }

std::string KvRecord::get(const std::string& key) const {
    for (const auto& [k, v] : fields_) {
        if (k == key) {
            return v;
        }
    }
    return {};
}

std::string KvRecord::to_line() const {
    std::string line;
    for (const auto& [k, v] : fields_) {
        if (!line.empty()) {
            line += ' ';
        }
        line += k;
        line += '=';
        line += v;
    }
    return line;
}

KvRecord KvRecord::parse_line(const std::string& line) {
    KvRecord r;
    std::istringstream in(line);
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw ParseError("<record>", 1, token, "expected key=value");
        }
        r.fields_.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
    return r;
}

void append_record(const std::filesystem::path& path, const KvRecord& record) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw IoError("cannot append to " + path.string());
    }
    out << record.to_line() << '\n';
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace spce
