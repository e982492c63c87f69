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

#include <stdexcept>
#include <string>

namespace spce {

// Invalid numerical input: non-normalized state, zero-probability
// conditioning, kernel rows that do not sum to one.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Caller supplied an argument outside the operation's precondition.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A model was used in a way its structure does not support, e.g. a
// non-factorizing response passed to the product formula.
class ContractError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// Input data that parses but cannot be analyzed (e.g. no detected pairs).
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed file content. Carries the 1-based row and the column name.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& source, std::size_t row, const std::string& column,
               const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(row) + ": column '" + column +
                             "': " + what),
          row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

  private:
    std::size_t row_;
    std::string column_;
};

// Invalid experiment configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace spce
