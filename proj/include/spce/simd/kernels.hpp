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

// Data-parallel inner loops of the Monte Carlo estimators and the purity
// statistics. Every kernel has a scalar reference implementation and, on
// x86-64, an AVX2 variant selected at runtime. Both variants produce
// bit-identical results: the scalar code accumulates in the same four-lane
// order as the vector code and the build disables FMA contraction.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "spce/direction.hpp"

namespace spce::simd {

// Structure-of-arrays view over a batch of 3-vectors. All spans share a size.
struct Vec3View {
    std::span<const double> x;
    std::span<const double> y;
    std::span<const double> z;

    std::size_t size() const { return x.size(); }
};

// Owning batch of 3-vectors.
struct Vec3Batch {
    std::vector<double> x, y, z;

    explicit Vec3Batch(std::size_t n = 0) : x(n), y(n), z(n) {}
    std::size_t size() const { return x.size(); }
    void set(std::size_t i, const Direction& d) {
        x[i] = d.x();
        y[i] = d.y();
        z[i] = d.z();
    }
    Vec3View view() const { return {x, y, z}; }
};

// Sums of q = 1 - a.b and q^2 over paired directions.
struct MisalignmentMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

// Counts of (sign(A.l), sign(B.l)) over hidden-variable directions l, with
// sign(0) = +1. Index: 0 = (+,+), 1 = (+,-), 2 = (-,+), 3 = (-,-).
using QuadrantCounts = std::array<std::uint64_t, 4>;

// Summary of a +1/-1 sequence for the runs test.
struct BinaryRunStats {
    std::uint64_t ups = 0;          // entries equal to +1
    std::uint64_t transitions = 0;  // i >= 1 with s[i] != s[i-1]
};

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// Best instruction set supported by this CPU and build.
Isa detected_isa();

// Instruction set used by the dispatching entry points. Defaults to
// detected_isa(); the SPCE_SIMD environment variable ("scalar" or "avx2")
// overrides it at first use.
Isa active_isa();

MisalignmentMoments misalignment_moments(Vec3View a, Vec3View b);
QuadrantCounts sign_quadrant_counts(Vec3View lambda, const Direction& first, const Direction& second);
BinaryRunStats binary_run_stats(std::span<const std::int8_t> signs);

namespace scalar {
MisalignmentMoments misalignment_moments(Vec3View a, Vec3View b);
QuadrantCounts sign_quadrant_counts(Vec3View lambda, const Direction& first, const Direction& second);
BinaryRunStats binary_run_stats(std::span<const std::int8_t> signs);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SPCE_HAVE_AVX2_KERNELS 1
namespace avx2 {
// Callers must check detected_isa() == Isa::avx2 first.
MisalignmentMoments misalignment_moments(Vec3View a, Vec3View b);
QuadrantCounts sign_quadrant_counts(Vec3View lambda, const Direction& first, const Direction& second);
BinaryRunStats binary_run_stats(std::span<const std::int8_t> signs);
} // namespace avx2
#else
#define SPCE_HAVE_AVX2_KERNELS 0
#endif

} // namespace spce::simd
