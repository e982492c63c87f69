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

#include "spce/direction.hpp"

#include <gtest/gtest.h>

#include "spce/errors.hpp"

namespace spce {
namespace {

TEST(Direction, DefaultIsPlusZ) {
    Direction d;
    EXPECT_EQ(d.z(), 1.0);
    EXPECT_EQ(d.x(), 0.0);
}

TEST(Direction, RejectsNonUnit) {
    EXPECT_THROW(Direction(1.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(Direction(0.0, 0.0, 1.0 + 1e-9), DomainError);
    EXPECT_NO_THROW(Direction(0.0, 0.0, 1.0 + 1e-13));
}

TEST(Direction, Normalized) {
    Direction d = Direction::normalized({3.0, 0.0, 4.0});
    EXPECT_DOUBLE_EQ(d.x(), 0.6);
    EXPECT_DOUBLE_EQ(d.z(), 0.8);
    EXPECT_THROW(Direction::normalized({0.0, 0.0, 0.0}), DomainError);
    EXPECT_THROW(Direction::normalized({NAN, 0.0, 1.0}), DomainError);
}

TEST(Direction, PlanarAngles) {
    Direction d = Direction::planar_degrees(90.0);
    EXPECT_NEAR(d.x(), 1.0, 1e-15);
    EXPECT_NEAR(d.z(), 0.0, 1e-15);
    EXPECT_EQ(d.y(), 0.0);
    EXPECT_NEAR(Direction::planar_degrees(0).dot(Direction::planar_degrees(45)), std::sqrt(0.5), 1e-15);
}

TEST(Direction, AngleTo) {
    Direction a = Direction::planar_degrees(10.0), b = Direction::planar_degrees(100.0);
    EXPECT_NEAR(a.angle_to(b), kPi / 2, 1e-14);
    EXPECT_NEAR(a.angle_to(-a), kPi, 1e-14);
    EXPECT_EQ(a.angle_to(a), 0.0);
    // atan2 form stays accurate for nearly parallel vectors
    Direction c = Direction::planar(1e-9);
    EXPECT_NEAR(Direction().angle_to(c), 1e-9, 1e-20);
}

TEST(Direction, Spherical) {
    Direction d = Direction::spherical(kPi / 2, kPi / 2);
    EXPECT_NEAR(d.y(), 1.0, 1e-15);
}

TEST(Direction, OrthonormalBasis) {
    for (auto n : {Direction(), -Direction(), Direction::planar_degrees(33), Direction::normalized({1, -2, 0.5})}) {
        Vec3 u, v;
        orthonormal_basis(n, u, v);
        EXPECT_NEAR(dot(u, u), 1.0, 1e-14);
        EXPECT_NEAR(dot(v, v), 1.0, 1e-14);
        EXPECT_NEAR(dot(u, v), 0.0, 1e-14);
        EXPECT_NEAR(dot(u, n.components()), 0.0, 1e-14);
        EXPECT_NEAR(dot(v, n.components()), 0.0, 1e-14);
        // right-handed: u x v = n
        Vec3 c{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
        EXPECT_NEAR(dot(c, n.components()), 1.0, 1e-14);
    }
}

TEST(Direction, ApproxEqualAndText) {
    EXPECT_TRUE(Direction::planar_degrees(30).approx_equal(Direction::planar(kPi / 6)));
    EXPECT_FALSE(Direction().approx_equal(-Direction()));
    EXPECT_FALSE(Direction().to_string().empty());
}

} // namespace
} // namespace spce
