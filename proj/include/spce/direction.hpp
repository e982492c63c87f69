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
#include <cmath>
#include <string>

namespace spce {

using Vec3 = std::array<double, 3>;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kPi = 3.14159265358979323846;

inline double dot(const Vec3& u, const Vec3& v) { return (u[0] * v[0] + u[1] * v[1]) + u[2] * v[2]; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/*!
 * Unit vector on the Bloch sphere: an analyzer orientation, either the
 * macroscopic setting or a microscopic direction drawn inside a cap, or a
 * hidden-variable direction.
 *
 * Construction from components checks the norm against kUnitTolerance;
 * use normalized() to project an arbitrary non-zero vector.
 */
class Direction {
  public:
    // Reference axis (+z).
    Direction() = default;

    // Throws DomainError if |v| differs from 1 by more than kUnitTolerance.
    explicit Direction(const Vec3& v);
    Direction(double x, double y, double z) : Direction(Vec3{x, y, z}) {}

    // Throws DomainError for zero or non-finite input.
    static Direction normalized(const Vec3& v);

    // Direction in the x-z measurement plane at `theta` radians from +z.
    static Direction planar(double theta);
    static Direction planar_degrees(double degrees) { return planar(degrees * kPi / 180.0); }

    // Polar angle theta from +z, azimuth phi from +x (radians).
    static Direction spherical(double theta, double phi);

    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }
    const Vec3& components() const { return v_; }

    double dot(const Direction& other) const { return spce::dot(v_, other.v_); }

    // Angle in [0, pi] between the two directions.
    double angle_to(const Direction& other) const;

    Direction operator-() const;

    bool approx_equal(const Direction& other, double tol = kUnitTolerance) const;

    std::string to_string() const;

  private:
    struct Unchecked {};
    Direction(const Vec3& v, Unchecked) : v_(v) {}

    Vec3 v_{0.0, 0.0, 1.0};
};

// Right-handed orthonormal pair (u, v) completing `n` to a basis.
void orthonormal_basis(const Direction& n, Vec3& u, Vec3& v);

} // namespace spce
