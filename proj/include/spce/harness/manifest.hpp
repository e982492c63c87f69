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
#include <string>
#include <string_view>
#include <vector>

namespace spce::harness {

inline constexpr std::string_view kVersion = "0.1.0";

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

// First 16 hex digits of the hash of the canonical config text.
std::string run_id_for(const std::string& canonical_text);

// ISO-8601 UTC time; SOURCE_DATE_EPOCH overrides the clock.
std::string timestamp_utc();

/*!
 * Run manifest, one key=value per line:
 *
 *   run_id=3f2a...
 *   config_sha256=...
 *   seed=42
 *   model=contextual
 *   created=2026-01-01T00:00:00Z
 *   version=0.1.0
 *   artifact.0=config.txt
 *   artifact.1=series_0.csv
 */
struct RunManifest {
    std::string run_id;
    std::string config_sha256;
    std::uint64_t seed = 0;
    std::string model;
    std::string created;
    std::string version{kVersion};
    std::vector<std::string> artifacts;

    std::string to_text() const;
    // Throws ParseError for a malformed or incomplete manifest.
    static RunManifest parse(const std::string& text, const std::string& source = "<manifest>");
};

void write_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& run_dir);

// Checks that config.txt matches the recorded hash and run id and that all
// artifacts exist. Throws DataError describing the first mismatch.
RunManifest verify_run(const std::filesystem::path& run_dir);

} // namespace spce::harness
