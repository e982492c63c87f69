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

#include <cstdio>

#include "spce/errors.hpp"

namespace spce {

Direction::Direction(const Vec3& v) : v_(v) {
    double n = norm(v);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTolerance) {
        throw DomainError("direction is not a unit vector (norm " + std::to_string(n) + ")");
    }
}

Direction Direction::normalized(const Vec3& v) {
    double n = norm(v);
    if (!std::isfinite(n) || n == 0.0) {
        throw DomainError("cannot normalize a zero or non-finite vector");
    }
    return Direction(Vec3{v[0] / n, v[1] / n, v[2] / n}, Unchecked{});
}

Direction Direction::planar(double theta) {
    return Direction(Vec3{std::sin(theta), 0.0, std::cos(theta)}, Unchecked{});
}

Direction Direction::spherical(double theta, double phi) {
    double s = std::sin(theta);
    return Direction(Vec3{s * std::cos(phi), s * std::sin(phi), std::cos(theta)}, Unchecked{});
}

double Direction::angle_to(const Direction& other) const {
    // atan2 form stays accurate near 0 and pi where acos loses digits.
    const Vec3& a = v_;
    const Vec3& b = other.v_;
    Vec3 c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    return std::atan2(norm(c), dot(other));
}

Direction Direction::operator-() const { return Direction(Vec3{-v_[0], -v_[1], -v_[2]}, Unchecked{}); }

bool Direction::approx_equal(const Direction& other, double tol) const {
    return std::abs(v_[0] - other.v_[0]) <= tol && std::abs(v_[1] - other.v_[1]) <= tol &&
           std::abs(v_[2] - other.v_[2]) <= tol;
}

std::string Direction::to_string() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", v_[0], v_[1], v_[2]);
    return buf;
}

void orthonormal_basis(const Direction& n, Vec3& u, Vec3& v) {
    // Branchless construction of Duff et al. (2017); valid at both poles.
    double sign = std::copysign(1.0, n.z());
    double a = -1.0 / (sign + n.z());
    double b = n.x() * n.y() * a;
    u = {1.0 + sign * n.x() * n.x() * a, sign * b, -sign * n.x()};
    v = {b, sign + n.y() * n.y() * a, -n.y()};
}

} // namespace spce
