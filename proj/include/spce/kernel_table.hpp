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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spce/quantum.hpp"

namespace spce {

using LambdaId = std::uint32_t;
using ContextId = std::uint32_t;

/*!
 * Tabulated kernel p(x,y | context, lambda) with integer ids for the hidden
 * variable and for the experimental context (the setting pair).
 *
 * Plain-text file format, one entry per line:
 *
 *   lambda_id,direction_id,x,y,probability
 *
 * Fields may be separated by commas or whitespace; '#' starts a comment; a
 * header line naming the columns is optional. x and y are +1 or -1.
 * Outcomes not listed for a (lambda_id, direction_id) pair have probability
 * zero.
 */
class KernelTable {
  public:
    using Key = std::pair<LambdaId, ContextId>;

    void set(LambdaId lambda, ContextId context, Outcome out, double probability);

    bool contains(LambdaId lambda, ContextId context) const;
    // Throws ParameterError for an unknown key.
    const JointTable& at(LambdaId lambda, ContextId context) const;

    std::vector<Key> keys() const;
    std::vector<LambdaId> lambda_ids() const;
    std::vector<ContextId> context_ids() const;
    bool empty() const { return entries_.empty(); }

    // Throws DomainError if any row has entries outside [0, 1] or does not
    // sum to 1 within `tol`.
    void validate(double tol = 1e-9) const;

  private:
    std::map<Key, JointTable> entries_;
};

// Throws ParseError naming the row and column of the first bad field.
KernelTable read_kernel_table(std::istream& in, const std::string& source_name = "<stream>");
KernelTable load_kernel_table(const std::filesystem::path& path);

void write_kernel_table(std::ostream& out, const KernelTable& table);

} // namespace spce
