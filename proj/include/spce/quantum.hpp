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
#include <complex>
#include <cstddef>
#include <cstdint>

#include "spce/direction.hpp"
#include "spce/random.hpp"

namespace spce {

using Complex = std::complex<double>;

// Measured spin projection; the numeric value is the outcome +1 or -1.
enum class Spin : std::int8_t { down = -1, up = 1 };

constexpr int value(Spin s) { return static_cast<int>(s); }
constexpr Spin flip(Spin s) { return s == Spin::up ? Spin::down : Spin::up; }

// Coincidence outcome (x on particle I, y on particle II).
struct Outcome {
    Spin x = Spin::up;
    Spin y = Spin::up;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Canonical outcome order used by every table in the library.
inline constexpr std::array<Outcome, 4> kOutcomes{{
    {Spin::up, Spin::up},
    {Spin::up, Spin::down},
    {Spin::down, Spin::up},
    {Spin::down, Spin::down},
}};

constexpr std::size_t outcome_index(Outcome o) {
    return (o.x == Spin::up ? 0u : 2u) + (o.y == Spin::up ? 0u : 1u);
}

// Probabilities P(x,y) in kOutcomes order.
using JointTable = std::array<double, 4>;

// Sum of x*y*P(x,y).
double correlation_of(const JointTable& table);

// Single-qubit pure state (amplitudes on |+z>, |-z>).
struct QubitState {
    std::array<Complex, 2> amplitudes;

    double norm_squared() const { return std::norm(amplitudes[0]) + std::norm(amplitudes[1]); }
};

/*!
 * Two-qubit pure state over the product basis (++, +-, -+, --) of the
 * reference axis (+z). Construction checks normalization to kUnitTolerance.
 */
class TwoQubitState {
  public:
    explicit TwoQubitState(const std::array<Complex, 4>& amplitudes);

    const std::array<Complex, 4>& amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
    double norm_squared() const;

  private:
    std::array<Complex, 4> amplitudes_;
};

// (|+-> - |-+>)/sqrt(2), with the global phase fixed as (0, 1/sqrt2, -1/sqrt2, 0).
TwoQubitState build_singlet();

// Eigenvector of d.sigma with eigenvalue s, in closed form from the
// components of d (no numerical eigensolver; well-defined at both poles).
QubitState spin_eigenstate(const Direction& d, Spin s);

// <psi| P_a(x) (x) P_b(y) |psi>, P_d(s) = (I + s d.sigma)/2.
// Throws DomainError for a state that is not normalized.
double joint_probability(const TwoQubitState& state, const Direction& a, const Direction& b, Outcome out);
JointTable joint_table(const TwoQubitState& state, const Direction& a, const Direction& b);

// Closed form for the singlet: (1 - x y a.b)/4.
inline double singlet_joint_probability(const Direction& a, const Direction& b, Outcome out) {
    return 0.25 * (1.0 - value(out.x) * value(out.y) * a.dot(b));
}
JointTable singlet_joint_table(const Direction& a, const Direction& b);

// Sum over outcomes of x*y*p(x,y|a,b).
double correlation(const TwoQubitState& state, const Direction& a, const Direction& b);

/*!
 * Conditional state of particle II given that particle I gave `x` along `a`.
 *
 * This describes the sub-ensemble of particles II whose partners produced
 * x; it is a selection from the whole ensemble of pairs, not a change of
 * any individual particle II.
 *
 * Throws DomainError if the conditioning outcome has zero probability.
 */
QubitState reduce_on_outcome(const TwoQubitState& state, const Direction& a, Spin x);

// Probability that particle II in `state` yields `s` along `d`.
double measure_probability(const QubitState& state, const Direction& d, Spin s);

// Draws one outcome from `table` with a single uniform variate.
Outcome sample_outcome(const JointTable& table, double u);

// One Monte Carlo trial from the exact joint distribution.
Outcome sample_trial(const TwoQubitState& state, const Direction& a, const Direction& b, RandomStream& rng);

} // namespace spce
