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
#include <optional>

#include "spce/direction.hpp"
#include "spce/quantum.hpp"
#include "spce/random.hpp"

namespace spce {

// Monte Carlo estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

enum class CapProfile {
    // Uniform in area on the cap.
    uniform,
    // Von Mises-Fisher density exp(cos(theta)/sigma^2) truncated to the cap;
    // for small sigma this is a Gaussian of angular width sigma.
    truncated_gaussian,
};

/*!
 * Distribution of microscopic analyzer directions around a macroscopic
 * setting, supported on the cap { d : |1 - d.center| < epsilon }.
 *
 * Directions are parameterized by the misalignment t = 1 - d.center in
 * [0, epsilon) and an azimuth around the center. Area on the sphere is
 * uniform in (t, azimuth), so both profiles are sampled exactly by inverse
 * CDF in t.
 */
class CapDistribution {
  public:
    // Throws ParameterError unless 0 < epsilon < 2.
    static CapDistribution uniform(const Direction& center, double epsilon);
    // Throws ParameterError unless 0 < epsilon < 2 and sigma > 0.
    static CapDistribution truncated_gaussian(const Direction& center, double epsilon, double sigma);

    const Direction& center() const { return center_; }
    double epsilon() const { return epsilon_; }
    CapProfile profile() const { return profile_; }
    double sigma() const { return sigma_; }

    bool contains(const Direction& d) const { return std::abs(1.0 - d.dot(center_)) < epsilon_; }

    // Inverse CDF of the misalignment t for u in [0, 1); result in [0, epsilon).
    double misalignment_quantile(double u) const;

    // Unnormalized density of t on [0, epsilon).
    double misalignment_weight(double t) const;

    // Direction at misalignment t and azimuth phi, pulled inside the cap if
    // rounding puts it on the boundary.
    Direction direction_at(double t, double phi) const;

    bool same_as(const CapDistribution& other) const;

  private:
    CapDistribution(const Direction& center, double epsilon, CapProfile profile, double sigma);

    Direction center_;
    double epsilon_;
    CapProfile profile_;
    double sigma_;
    Vec3 u_{}, v_{};
};

/*!
 * Macroscopic experiment (A, B): the two cap distributions and the counting
 * efficiencies of the two sides.
 */
struct ExperimentSetting {
    CapDistribution cap_a;
    CapDistribution cap_b;
    double eta_a = 1.0;
    double eta_b = 1.0;

    // Throws ParameterError unless both efficiencies lie in (0, 1].
    void validate() const;
    double detection_probability() const { return eta_a * eta_b; }
};

// Consumes two uniforms from rng.
Direction sample_cap_direction(const CapDistribution& cap, RandomStream& rng);

// Minimum sample count accepted by the Monte Carlo estimators.
inline constexpr std::uint64_t kMinSmearedSamples = 100;

// Samples per Monte Carlo batch. Batch k draws from rng.substream(k), so
// results are fixed by (rng, n_samples) whatever the thread count.
inline constexpr std::uint64_t kSmearedBatch = 8192;

/*!
 * Monte Carlo estimate of the smeared coincidence probabilities
 *
 *   P(x,y|A,B) = eta_a eta_b E[ p(x,y|a,b) ],  a ~ cap_a, b ~ cap_b,
 *
 * with the singlet joint probability as integrand. All four outcomes are
 * estimated from the same draws. Throws ParameterError for
 * n_samples < kMinSmearedSamples.
 */
std::array<Estimate, 4> smeared_table(const ExperimentSetting& setting, std::uint64_t n_samples,
                                      const RandomStream& rng, unsigned threads = 1);

Estimate smeared_probability(const ExperimentSetting& setting, Outcome out, std::uint64_t n_samples,
                             const RandomStream& rng, unsigned threads = 1);

// P(+,+|A,A) + P(-,-|A,A). Throws ParameterError if the caps differ.
Estimate anti_correlation_gap(const ExperimentSetting& setting, std::uint64_t n_samples, const RandomStream& rng,
                              unsigned threads = 1);

// Deterministic product Gauss-Legendre rule over (t, azimuth) on both
// caps; an integrator independent of the Monte Carlo path.
JointTable smeared_quadrature(const ExperimentSetting& setting);

/*!
 * One generative trial: draw a and b from the caps, draw (x, y) from the
 * singlet distribution at (a, b), then keep the pair with probability
 * eta_a * eta_b. Returns nullopt for a lost pair. Always consumes six
 * uniforms so trial k of a stream is reproducible on its own.
 */
std::optional<Outcome> sample_contextual_trial(const ExperimentSetting& setting, RandomStream& rng);

} // namespace spce
