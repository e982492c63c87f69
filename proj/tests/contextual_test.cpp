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

#include "spce/contextual.hpp"

#include <gtest/gtest.h>

#include <bit>

#include "spce/chsh.hpp"
#include "spce/errors.hpp"

namespace spce {
namespace {

constexpr Outcome kPP{Spin::up, Spin::up};
constexpr Outcome kMM{Spin::down, Spin::down};

// Mean misalignment 1 - a.A under each profile.
double mean_misalignment(const CapDistribution& cap) {
    double eps = cap.epsilon();
    if (cap.profile() == CapProfile::uniform) {
        return eps / 2;
    }
    double s2 = cap.sigma() * cap.sigma();
    double r = eps / s2;
    return s2 - eps * std::exp(-r) / (-std::expm1(-r));
}

// Independent caps: E[a.b] = (1 - ma)(1 - mb) A.B.
double smeared_correlation(const ExperimentSetting& s) {
    return -(1 - mean_misalignment(s.cap_a)) * (1 - mean_misalignment(s.cap_b)) * s.cap_a.center().dot(s.cap_b.center());
}

ExperimentSetting uniform_setting(double deg_a, double deg_b, double eps, double eta = 1.0) {
    return {CapDistribution::uniform(Direction::planar_degrees(deg_a), eps),
            CapDistribution::uniform(Direction::planar_degrees(deg_b), eps), eta, eta};
}

TEST(CapDistribution, ParameterChecks) {
    Direction c;
    EXPECT_THROW(CapDistribution::uniform(c, 0.0), ParameterError);
    EXPECT_THROW(CapDistribution::uniform(c, 2.0), ParameterError);
    EXPECT_THROW(CapDistribution::uniform(c, -0.1), ParameterError);
    EXPECT_THROW(CapDistribution::truncated_gaussian(c, 0.1, 0.0), ParameterError);
    EXPECT_NO_THROW(CapDistribution::uniform(c, 1.999));
}

TEST(CapDistribution, QuantileStaysBelowEpsilon) {
    for (auto cap : {CapDistribution::uniform(Direction(), 0.05),
                     CapDistribution::truncated_gaussian(Direction(), 0.05, 0.1)}) {
        EXPECT_EQ(cap.misalignment_quantile(0.0), 0.0);
        EXPECT_LT(cap.misalignment_quantile(std::nextafter(1.0, 0.0)), 0.05);
        double prev = -1.0;
        for (double u = 0.0; u < 1.0; u += 0.01) {
            double t = cap.misalignment_quantile(u);
            EXPECT_GE(t, prev);
            prev = t;
        }
    }
}

TEST(CapDistribution, SamplesInsideCap) {
    RandomStream rng(1);
    for (auto cap : {CapDistribution::uniform(Direction::planar_degrees(70), 0.01),
                     CapDistribution::uniform(-Direction(), 1.5),
                     CapDistribution::truncated_gaussian(Direction::planar_degrees(10), 0.2, 0.05)}) {
        for (int i = 0; i < 20000; ++i) {
            ASSERT_TRUE(cap.contains(sample_cap_direction(cap, rng)));
        }
        // boundary node is pulled inside
        EXPECT_TRUE(cap.contains(cap.direction_at(cap.epsilon(), 1.0)));
    }
}

TEST(CapDistribution, MeanMisalignmentMatchesProfile) {
    RandomStream rng(2);
    for (auto cap : {CapDistribution::uniform(Direction::planar_degrees(30), 0.1),
                     CapDistribution::truncated_gaussian(Direction::planar_degrees(30), 0.1, 0.1)}) {
        const int n = 200000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            double t = 1.0 - sample_cap_direction(cap, rng).dot(cap.center());
            sum += t;
            sum_sq += t * t;
        }
        double mean = sum / n;
        double se = std::sqrt((sum_sq / n - mean * mean) / n);
        EXPECT_NEAR(mean, mean_misalignment(cap), 4 * se);
    }
}

TEST(CapDistribution, AzimuthIsIsotropic) {
    // the mean direction lies on the axis
    RandomStream rng(3);
    auto cap = CapDistribution::uniform(Direction::planar_degrees(50), 0.3);
    Vec3 u, v;
    orthonormal_basis(cap.center(), u, v);
    double su = 0.0, sv = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        Direction d = sample_cap_direction(cap, rng);
        su += dot(d.components(), u);
        sv += dot(d.components(), v);
    }
    // transverse component has variance below t(2 - t)/2 <= 0.3
    EXPECT_NEAR(su / n, 0.0, 4 * std::sqrt(0.3 / n));
    EXPECT_NEAR(sv / n, 0.0, 4 * std::sqrt(0.3 / n));
}

TEST(ExperimentSetting, EfficiencyRange) {
    EXPECT_THROW(uniform_setting(0, 0, 0.1, 0.0).validate(), ParameterError);
    EXPECT_THROW(uniform_setting(0, 0, 0.1, 1.1).validate(), ParameterError);
    EXPECT_NO_THROW(uniform_setting(0, 0, 0.1, 1.0).validate());
}

// Uniform caps: gap = (1 - (1 - eps/2)^2)/2; 0.0246875 at eps = 0.05.
TEST(AntiCorrelationGap, OracleUniformCap) {
    auto s = uniform_setting(0, 0, 0.05);
    Estimate g = anti_correlation_gap(s, 400000, RandomStream(4));
    EXPECT_NEAR(g.value, 0.0246875, 4 * g.std_error);
    EXPECT_GT(g.std_error, 0.0);
    EXPECT_LT(g.std_error, 1e-3);
    EXPECT_NEAR(smeared_quadrature(s)[0] + smeared_quadrature(s)[3], 0.0246875, 1e-10);
}

TEST(AntiCorrelationGap, PositiveAndGrowingWithEpsilon) {
    double prev = 0.0;
    for (double eps : {0.001, 0.01, 0.05, 0.1}) {
        Estimate g = anti_correlation_gap(uniform_setting(20, 20, eps), 100000, RandomStream(5));
        EXPECT_GT(g.value, 5 * g.std_error) << eps;
        EXPECT_GT(g.value, prev);
        prev = g.value;
    }
}

TEST(AntiCorrelationGap, ScalesWithEfficiency) {
    auto full = anti_correlation_gap(uniform_setting(0, 0, 0.1, 1.0), 10000, RandomStream(6));
    auto half = anti_correlation_gap(uniform_setting(0, 0, 0.1, 0.5), 10000, RandomStream(6));
    EXPECT_DOUBLE_EQ(half.value, 0.25 * full.value);
}

TEST(AntiCorrelationGap, TruncatedGaussianOracle) {
    ExperimentSetting s{CapDistribution::truncated_gaussian(Direction(), 0.05, 0.1),
                        CapDistribution::truncated_gaussian(Direction(), 0.05, 0.1)};
    double m = mean_misalignment(s.cap_a);
    double expected = (1 - (1 - m) * (1 - m)) / 2;
    Estimate g = anti_correlation_gap(s, 400000, RandomStream(7));
    EXPECT_NEAR(g.value, expected, 4 * g.std_error);
    EXPECT_NEAR(smeared_quadrature(s)[0] + smeared_quadrature(s)[3], expected, 1e-9);
}

TEST(AntiCorrelationGap, Preconditions) {
    EXPECT_THROW(anti_correlation_gap(uniform_setting(0, 10, 0.1), 1000, RandomStream(1)), ParameterError);
    EXPECT_THROW(anti_correlation_gap(uniform_setting(0, 0, 0.1), 99, RandomStream(1)), ParameterError);
}

TEST(SmearedTable, AgreesWithQuadratureAndClosedForm) {
    for (auto [da, db, eps] : {std::tuple{0.0, 45.0, 0.05}, {10.0, 130.0, 0.3}, {0.0, 90.0, 0.01}}) {
        auto s = uniform_setting(da, db, eps, 0.8);
        auto mc = smeared_table(s, 200000, RandomStream(8));
        JointTable q = smeared_quadrature(s);
        double e = smeared_correlation(s);
        double eta = s.detection_probability();
        for (std::size_t k = 0; k < 4; ++k) {
            double exact = eta * (1 - value(kOutcomes[k].x) * value(kOutcomes[k].y) * -e) / 4;
            EXPECT_NEAR(q[k], exact, 1e-10);
            EXPECT_NEAR(mc[k].value, exact, 4 * mc[k].std_error + 1e-15);
        }
    }
}

TEST(SmearedTable, ThreadCountDoesNotChangeResult) {
    auto s = uniform_setting(0, 60, 0.2);
    RandomStream rng(9);
    auto one = smeared_table(s, 50000, rng, 1);
    auto four = smeared_table(s, 50000, rng, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(one[k].value), std::bit_cast<std::uint64_t>(four[k].value));
        EXPECT_EQ(std::bit_cast<std::uint64_t>(one[k].std_error), std::bit_cast<std::uint64_t>(four[k].std_error));
    }
    EXPECT_EQ(smeared_probability(s, kMM, 50000, rng, 2).value, one[3].value);
}

TEST(SmearedTable, ChshShrinksBySmearing) {
    double eps = 0.1;
    auto settings = ChshSettings::planar_degrees(0, 90, 45, 135);
    auto prob = [&](const Direction& a, const Direction& b, Outcome o) {
        ExperimentSetting s{CapDistribution::uniform(a, eps), CapDistribution::uniform(b, eps)};
        return smeared_quadrature(s)[outcome_index(o)];
    };
    ChshReport r = chsh_from_model(prob, settings);
    double shrink = (1 - eps / 2) * (1 - eps / 2);
    EXPECT_NEAR(std::abs(r.s_value), 2 * std::sqrt(2.0) * shrink, 1e-9);
}

TEST(ContextualTrial, DetectionRateAndSameSignRate) {
    auto s = uniform_setting(0, 0, 0.1, 0.7);
    RandomStream rng(10);
    const int n = 200000;
    int detected = 0, same = 0;
    for (int i = 0; i < n; ++i) {
        auto o = sample_contextual_trial(s, rng);
        if (o) {
            ++detected;
            same += o->x == o->y;
        }
    }
    double pd = 0.49;
    EXPECT_NEAR(detected / double(n), pd, 4 * std::sqrt(pd * (1 - pd) / n));
    double gap = (1 - 0.95 * 0.95) / 2;  // among detected pairs
    EXPECT_NEAR(same / double(detected), gap, 4 * std::sqrt(gap * (1 - gap) / detected));
}

TEST(ContextualTrial, ConsumesFixedUniforms) {
    auto s = uniform_setting(0, 30, 0.1, 0.5);
    RandomStream a(11), b(11);
    sample_contextual_trial(s, a);
    for (int i = 0; i < 6; ++i) {
        b.uniform();
    }
    EXPECT_EQ(a.next_u64(), b.next_u64());
}

} // namespace
} // namespace spce
