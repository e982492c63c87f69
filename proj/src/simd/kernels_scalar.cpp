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

#include "spce/simd/kernels.hpp"

namespace spce::simd::scalar {

MisalignmentMoments misalignment_moments(Vec3View a, Vec3View b) {
    const std::size_t n = a.size();
    const std::size_t n4 = n - n % 4;
    double sum[4] = {0.0, 0.0, 0.0, 0.0};
    double sum_sq[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n4; i += 4) {
        for (std::size_t lane = 0; lane < 4; ++lane) {
            std::size_t k = i + lane;
            double d = (a.x[k] * b.x[k] + a.y[k] * b.y[k]) + a.z[k] * b.z[k];
            double q = 1.0 - d;
            sum[lane] += q;
            sum_sq[lane] += q * q;
        }
    }
    MisalignmentMoments m;
    m.sum = (sum[0] + sum[1]) + (sum[2] + sum[3]);
    m.sum_sq = (sum_sq[0] + sum_sq[1]) + (sum_sq[2] + sum_sq[3]);
    for (std::size_t k = n4; k < n; ++k) {
        double d = (a.x[k] * b.x[k] + a.y[k] * b.y[k]) + a.z[k] * b.z[k];
        double q = 1.0 - d;
        m.sum += q;
        m.sum_sq += q * q;
    }
    return m;
}

QuadrantCounts sign_quadrant_counts(Vec3View lambda, const Direction& first, const Direction& second) {
    QuadrantCounts counts{};
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        double da = (first.x() * lambda.x[k] + first.y() * lambda.y[k]) + first.z() * lambda.z[k];
        double db = (second.x() * lambda.x[k] + second.y() * lambda.y[k]) + second.z() * lambda.z[k];
        unsigned idx = (da >= 0.0 ? 0u : 2u) + (db >= 0.0 ? 0u : 1u);
        ++counts[idx];
    }
    return counts;
}

BinaryRunStats binary_run_stats(std::span<const std::int8_t> signs) {
    BinaryRunStats s;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        s.ups += signs[i] > 0;
        if (i > 0) {
            s.transitions += signs[i] != signs[i - 1];
        }
    }
    return s;
}

} // namespace spce::simd::scalar
