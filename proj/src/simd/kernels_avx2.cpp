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

#if SPCE_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <bit>

#define SPCE_AVX2 __attribute__((target("avx2")))

namespace spce::simd::avx2 {

namespace {

SPCE_AVX2 inline __m256d dot3(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
    return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
}

SPCE_AVX2 inline double pairwise_lanes(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

} // namespace

SPCE_AVX2 MisalignmentMoments misalignment_moments(Vec3View a, Vec3View b) {
    const std::size_t n = a.size();
    const std::size_t n4 = n - n % 4;
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d sum = _mm256_setzero_pd();
    __m256d sum_sq = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d d = dot3(_mm256_loadu_pd(&a.x[i]), _mm256_loadu_pd(&a.y[i]), _mm256_loadu_pd(&a.z[i]),
                         _mm256_loadu_pd(&b.x[i]), _mm256_loadu_pd(&b.y[i]), _mm256_loadu_pd(&b.z[i]));
        __m256d q = _mm256_sub_pd(one, d);
        sum = _mm256_add_pd(sum, q);
        sum_sq = _mm256_add_pd(sum_sq, _mm256_mul_pd(q, q));
    }
    MisalignmentMoments m;
    m.sum = pairwise_lanes(sum);
    m.sum_sq = pairwise_lanes(sum_sq);
    for (std::size_t k = n4; k < n; ++k) {
        double d = (a.x[k] * b.x[k] + a.y[k] * b.y[k]) + a.z[k] * b.z[k];
        double q = 1.0 - d;
        m.sum += q;
        m.sum_sq += q * q;
    }
    return m;
}

SPCE_AVX2 QuadrantCounts sign_quadrant_counts(Vec3View lambda, const Direction& first, const Direction& second) {
    const std::size_t n = lambda.size();
    const std::size_t n4 = n - n % 4;
    const __m256d fx = _mm256_set1_pd(first.x()), fy = _mm256_set1_pd(first.y()), fz = _mm256_set1_pd(first.z());
    const __m256d sx = _mm256_set1_pd(second.x()), sy = _mm256_set1_pd(second.y()),
                  sz = _mm256_set1_pd(second.z());
    const __m256d zero = _mm256_setzero_pd();
    std::uint64_t both = 0, only_first = 0, only_second = 0;
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d lx = _mm256_loadu_pd(&lambda.x[i]);
        __m256d ly = _mm256_loadu_pd(&lambda.y[i]);
        __m256d lz = _mm256_loadu_pd(&lambda.z[i]);
        int ma = _mm256_movemask_pd(_mm256_cmp_pd(dot3(fx, fy, fz, lx, ly, lz), zero, _CMP_GE_OQ));
        int mb = _mm256_movemask_pd(_mm256_cmp_pd(dot3(sx, sy, sz, lx, ly, lz), zero, _CMP_GE_OQ));
        both += std::popcount(static_cast<unsigned>(ma & mb));
        only_first += std::popcount(static_cast<unsigned>(ma & ~mb & 0xF));
        only_second += std::popcount(static_cast<unsigned>(~ma & mb & 0xF));
    }
    QuadrantCounts counts{both, only_first, only_second, n4 - both - only_first - only_second};
    QuadrantCounts tail =
        scalar::sign_quadrant_counts({lambda.x.subspan(n4), lambda.y.subspan(n4), lambda.z.subspan(n4)}, first, second);
    for (std::size_t k = 0; k < 4; ++k) {
        counts[k] += tail[k];
    }
    return counts;
}

SPCE_AVX2 BinaryRunStats binary_run_stats(std::span<const std::int8_t> signs) {
    const std::size_t n = signs.size();
    BinaryRunStats s;
    if (n == 0) {
        return s;
    }
    const std::int8_t* p = signs.data();
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    // Element 0 contributes to ups only; transitions compare i with i-1 for i >= 1.
    s.ups += p[0] > 0;
    i = 1;
    for (; i + 32 <= n; i += 32) {
        __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        __m256i prev = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i - 1));
        auto up_mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpgt_epi8(cur, zero)));
        auto eq_mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(cur, prev)));
        s.ups += std::popcount(up_mask);
        s.transitions += 32 - std::popcount(eq_mask);
    }
    for (; i < n; ++i) {
        s.ups += p[i] > 0;
        s.transitions += p[i] != p[i - 1];
    }
    return s;
}

} // namespace spce::simd::avx2

#endif
