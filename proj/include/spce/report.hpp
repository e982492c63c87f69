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
#include <string>
#include <utility>
#include <vector>

namespace spce {

/*!
 * Flat machine-readable record: ordered key=value pairs written on one line,
 * separated by single spaces. Keys are dotted identifiers; values contain
 * no whitespace ('_' replaces it). Records are appended, one per analysis.
 */
class KvRecord {
  public:
    KvRecord& add(const std::string& key, const std::string& value);
    KvRecord& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
    KvRecord& add(const std::string& key, double value);
    KvRecord& add(const std::string& key, std::uint64_t value);
    KvRecord& add(const std::string& key, int value);
    KvRecord& add(const std::string& key, unsigned value) { return add(key, static_cast<std::uint64_t>(value)); }
    KvRecord& add(const std::string& key, bool value);

    const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }
    // Value for key, or empty string.
    std::string get(const std::string& key) const;

    std::string to_line() const;
    static KvRecord parse_line(const std::string& line);

  private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// Appends record.to_line() + '\n'. Throws IoError.
void append_record(const std::filesystem::path& path, const KvRecord& record);

} // namespace spce
