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

#include <array>
#include <cstdint>
#include <limits>

namespace spce {

/*!
 * Philox4x32-10 block function (Salmon et al., SC'11).
 *
 * Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits. There
 * is no internal state; every stream below is a pure function of
 * (key, counter).
 */
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key);
};

/*!
 * Counter-based random stream.
 *
 * Scheme:
 *   key      = (seed & 0xffffffff, seed >> 32)
 *   counter  = (block_lo, block_hi, stream_lo, stream_hi)
 *
 * A stream is identified by (seed, stream_id). Each block yields four
 * 32-bit words; blocks are consumed in order starting at zero. Child streams
 * are derived with substream(child), whose id is
 *   splitmix64(stream_id ^ splitmix64(child + 1))
 * so the random numbers of a child depend only on the master seed and the
 * path of child indices, never on how work is split across threads.
 *
 * Satisfies UniformRandomBitGenerator (64-bit output).
 */
class RandomStream {
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Independent child stream; does not advance *this.
    RandomStream substream(std::uint64_t child) const;

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // 53-bit uniform in [0, 1).
    double uniform();

    // Unbiased integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    unsigned used_ = 4;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace spce
