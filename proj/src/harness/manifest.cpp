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

#include "spce/harness/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "spce/errors.hpp"

namespace spce::harness {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 15];
    }
    return out;
}

std::string run_id_for(const std::string& canonical_text) {
    return sha256_hex(canonical_text).substr(0, 16);
}

std::string timestamp_utc() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
        t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_text() const {
    std::ostringstream out;
    out << "run_id=" << run_id << '\n'
        << "config_sha256=" << config_sha256 << '\n'
        << "seed=" << seed << '\n'
        << "model=" << model << '\n'
        << "created=" << created << '\n'
        << "version=" << version << '\n';
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
        out << "artifact." << i << '=' << artifacts[i] << '\n';
    }
    return out.str();
}

RunManifest RunManifest::parse(const std::string& text, const std::string& source) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(source, row, "key", "expected key=value");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw ParseError(source, row, key, "missing entry");
        }
        return it->second;
    };
    RunManifest m;
    m.run_id = need("run_id");
    m.config_sha256 = need("config_sha256");
    try {
        m.seed = std::stoull(need("seed"));
    } catch (const std::logic_error&) {
        throw ParseError(source, row, "seed", "not an integer");
    }
    m.model = need("model");
    m.created = need("created");
    m.version = need("version");
    for (std::size_t i = 0;; ++i) {
        auto it = kv.find("artifact." + std::to_string(i));
        if (it == kv.end()) {
            break;
        }
        m.artifacts.push_back(it->second);
    }
    return m;
}

void write_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest) {
    std::ofstream out(run_dir / "manifest.txt", std::ios::binary);
    out << manifest.to_text();
    if (!out) {
        throw IoError("cannot write " + (run_dir / "manifest.txt").string());
    }
}

RunManifest read_manifest(const std::filesystem::path& run_dir) {
    auto path = run_dir / "manifest.txt";
    return RunManifest::parse(read_file(path), path.string());
}

RunManifest verify_run(const std::filesystem::path& run_dir) {
    RunManifest m = read_manifest(run_dir);
    std::string config = read_file(run_dir / "config.txt");
    std::string hash = sha256_hex(config);
    if (hash != m.config_sha256) {
        throw DataError("config.txt hash " + hash + " does not match manifest " + m.config_sha256);
    }
    if (hash.substr(0, 16) != m.run_id) {
        throw DataError("run id " + m.run_id + " does not match the config hash");
    }
    for (const auto& a : m.artifacts) {
        if (!std::filesystem::exists(run_dir / a)) {
            throw DataError("missing artifact " + a);
        }
    }
    return m;
}

} // namespace spce::harness
