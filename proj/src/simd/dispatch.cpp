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

#include <cstdlib>
#include <string>

#include "spce/simd/kernels.hpp"

namespace spce::simd {

namespace {

struct KernelTable {
    Isa isa;
    MisalignmentMoments (*misalignment_moments)(Vec3View, Vec3View);
    QuadrantCounts (*sign_quadrant_counts)(Vec3View, const Direction&, const Direction&);
    BinaryRunStats (*binary_run_stats)(std::span<const std::int8_t>);
};

constexpr KernelTable kScalar{Isa::scalar, &scalar::misalignment_moments, &scalar::sign_quadrant_counts,
                              &scalar::binary_run_stats};
#if SPCE_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{Isa::avx2, &avx2::misalignment_moments, &avx2::sign_quadrant_counts,
                            &avx2::binary_run_stats};
#endif

const KernelTable& select() {
    static const KernelTable& table = []() -> const KernelTable& {
        Isa isa = detected_isa();
        if (const char* env = std::getenv("SPCE_SIMD")) {
            if (std::string(env) == "scalar") {
                isa = Isa::scalar;
            }
        }
#if SPCE_HAVE_AVX2_KERNELS
        if (isa == Isa::avx2) {
            return kAvx2;
        }
#endif
        return kScalar;
    }();
    return table;
}

} // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
#if SPCE_HAVE_AVX2_KERNELS
    static const bool has_avx2 = __builtin_cpu_supports("avx2");
    return has_avx2 ? Isa::avx2 : Isa::scalar;
#else
    return Isa::scalar;
#endif
}

Isa active_isa() { return select().isa; }

MisalignmentMoments misalignment_moments(Vec3View a, Vec3View b) { return select().misalignment_moments(a, b); }

QuadrantCounts sign_quadrant_counts(Vec3View lambda, const Direction& first, const Direction& second) {
    return select().sign_quadrant_counts(lambda, first, second);
}

BinaryRunStats binary_run_stats(std::span<const std::int8_t> signs) { return select().binary_run_stats(signs); }

} // namespace spce::simd
