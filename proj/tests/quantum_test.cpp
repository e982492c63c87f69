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

#include "spce/quantum.hpp"

#include <gtest/gtest.h>

#include "spce/errors.hpp"
#include "spce/lrhv.hpp"

namespace spce {
namespace {

constexpr Outcome kPP{Spin::up, Spin::up};
constexpr Outcome kPM{Spin::up, Spin::down};

std::vector<Direction> random_directions(std::size_t n, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<Direction> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(sample_uniform_sphere(rng));
    }
    return out;
}

TEST(Singlet, Amplitudes) {
    TwoQubitState s = build_singlet();
    EXPECT_EQ(s[0], Complex(0.0));
    EXPECT_NEAR(s[1].real(), 1.0 / std::sqrt(2.0), 1e-16);
    EXPECT_NEAR(s[2].real(), -1.0 / std::sqrt(2.0), 1e-16);
    EXPECT_EQ(s[3], Complex(0.0));
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
}

TEST(TwoQubitState, RejectsUnnormalized) {
    EXPECT_THROW(TwoQubitState({Complex(1.0), Complex(1.0), Complex(0.0), Complex(0.0)}), DomainError);
}

TEST(SpinEigenstate, IsEigenvector) {
    auto dirs = random_directions(50, 1);
    dirs.push_back(Direction());
    dirs.push_back(-Direction());
    for (const auto& d : dirs) {
        for (Spin s : {Spin::up, Spin::down}) {
            QubitState e = spin_eigenstate(d, s);
            EXPECT_NEAR(e.norm_squared(), 1.0, 1e-14);
            EXPECT_NEAR(measure_probability(e, d, s), 1.0, 1e-14);
            EXPECT_NEAR(measure_probability(e, d, flip(s)), 0.0, 1e-14);
        }
    }
}

// Frozen values: (1 - x y cos(theta))/4 at theta = 60 degrees.
TEST(JointProbability, OracleAtSixtyDegrees) {
    TwoQubitState s = build_singlet();
    Direction a = Direction::planar_degrees(0.0), b = Direction::planar_degrees(60.0);
    EXPECT_NEAR(joint_probability(s, a, b, kPP), 0.125, 1e-15);
    EXPECT_NEAR(joint_probability(s, a, b, kPM), 0.375, 1e-15);
    EXPECT_NEAR(correlation(s, a, b), -0.5, 1e-15);
}

TEST(JointProbability, PerfectAnticorrelationAtEqualSettings) {
    TwoQubitState s = build_singlet();
    for (const auto& a : random_directions(20, 2)) {
        EXPECT_NEAR(joint_probability(s, a, a, kPP), 0.0, 1e-15);
        EXPECT_NEAR(correlation(s, a, a), -1.0, 1e-14);
    }
}

TEST(JointProbability, MatchesClosedFormEverywhere) {
    TwoQubitState s = build_singlet();
    auto as = random_directions(100, 3), bs = random_directions(100, 4);
    for (std::size_t i = 0; i < as.size(); ++i) {
        JointTable t = joint_table(s, as[i], bs[i]);
        JointTable c = singlet_joint_table(as[i], bs[i]);
        double total = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            EXPECT_NEAR(t[k], c[k], 1e-12);
            EXPECT_GE(t[k], 0.0);
            total += t[k];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        // marginals are 1/2 on each side
        EXPECT_NEAR(t[0] + t[1], 0.5, 1e-12);
        EXPECT_NEAR(t[0] + t[2], 0.5, 1e-12);
        EXPECT_NEAR(correlation_of(t), -as[i].dot(bs[i]), 1e-12);
    }
}

TEST(JointProbability, RotationInvariance) {
    TwoQubitState s = build_singlet();
    for (double shift : {13.0, 77.0, 200.0}) {
        Direction a = Direction::planar_degrees(20.0), b = Direction::planar_degrees(65.0);
        Direction ra = Direction::planar_degrees(20.0 + shift), rb = Direction::planar_degrees(65.0 + shift);
        EXPECT_NEAR(joint_probability(s, a, b, kPP), joint_probability(s, ra, rb, kPP), 1e-14);
    }
}

TEST(ReduceOnOutcome, SecondParticleIsOpposite) {
    TwoQubitState s = build_singlet();
    for (const auto& a : random_directions(20, 5)) {
        for (Spin x : {Spin::up, Spin::down}) {
            QubitState r = reduce_on_outcome(s, a, x);
            EXPECT_NEAR(r.norm_squared(), 1.0, 1e-14);
            EXPECT_NEAR(measure_probability(r, a, flip(x)), 1.0, 1e-13);
        }
    }
}

TEST(ReduceOnOutcome, ConditionalMatchesJoint) {
    TwoQubitState s = build_singlet();
    auto as = random_directions(30, 6), bs = random_directions(30, 7);
    for (std::size_t i = 0; i < as.size(); ++i) {
        for (Outcome o : kOutcomes) {
            double joint = joint_probability(s, as[i], bs[i], o);
            double conditional = measure_probability(reduce_on_outcome(s, as[i], o.x), bs[i], o.y);
            EXPECT_NEAR(joint, 0.5 * conditional, 1e-13);
        }
    }
}

TEST(ReduceOnOutcome, ZeroProbabilityConditioningThrows) {
    // |+z +z>: outcome -1 along +z on particle I is impossible
    TwoQubitState up_up({Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0)});
    EXPECT_THROW(reduce_on_outcome(up_up, Direction(), Spin::down), DomainError);
    EXPECT_NO_THROW(reduce_on_outcome(up_up, Direction(), Spin::up));
}

TEST(SampleOutcome, NeverPicksImpossibleOutcome) {
    JointTable t{0.0, 0.5, 0.5, 0.0};
    EXPECT_EQ(sample_outcome(t, 0.0), kPM);
    EXPECT_EQ(sample_outcome(t, 0.49), kPM);
    EXPECT_EQ(sample_outcome(t, 0.5), (Outcome{Spin::down, Spin::up}));
    EXPECT_EQ(sample_outcome(t, std::nextafter(1.0, 0.0)), (Outcome{Spin::down, Spin::up}));
    // total below one by rounding: the last possible outcome absorbs the rest
    JointTable r{0.3, 0.3, 0.3999999999, 0.0};
    EXPECT_EQ(sample_outcome(r, 0.99999999999), (Outcome{Spin::down, Spin::up}));
}

TEST(SampleTrial, FrequenciesMatchTable) {
    TwoQubitState s = build_singlet();
    Direction a = Direction::planar_degrees(0.0), b = Direction::planar_degrees(60.0);
    RandomStream rng(12);
    const int n = 200000;
    std::array<int, 4> counts{};
    for (int i = 0; i < n; ++i) {
        ++counts[outcome_index(sample_trial(s, a, b, rng))];
    }
    JointTable p = singlet_joint_table(a, b);
    for (std::size_t k = 0; k < 4; ++k) {
        double se = std::sqrt(p[k] * (1 - p[k]) / n);
        EXPECT_NEAR(counts[k] / double(n), p[k], 4 * se);
    }
}

TEST(SampleTrial, EqualSettingsAlwaysOpposite) {
    TwoQubitState s = build_singlet();
    RandomStream rng(13);
    Direction a = Direction::planar_degrees(40.0);
    for (int i = 0; i < 10000; ++i) {
        Outcome o = sample_trial(s, a, a, rng);
        ASSERT_NE(o.x, o.y);
    }
}

} // namespace
} // namespace spce
