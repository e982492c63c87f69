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

#include <algorithm>
#include <cmath>

#include "spce/errors.hpp"

namespace spce {

namespace {

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

// (I + s d.sigma)/2
Matrix2 projector(const Direction& d, Spin s) {
    double sv = value(s);
    return {{{Complex(0.5 * (1.0 + sv * d.z()), 0.0), Complex(0.5 * sv * d.x(), -0.5 * sv * d.y())},
             {Complex(0.5 * sv * d.x(), 0.5 * sv * d.y()), Complex(0.5 * (1.0 - sv * d.z()), 0.0)}}};
}

void require_normalized(const TwoQubitState& state) {
    if (std::abs(state.norm_squared() - 1.0) > kUnitTolerance) {
        throw DomainError("two-qubit state is not normalized");
    }
}

} // namespace

double correlation_of(const JointTable& table) {
    double e = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        e += value(kOutcomes[k].x) * value(kOutcomes[k].y) * table[k];
    }
    return e;
}

TwoQubitState::TwoQubitState(const std::array<Complex, 4>& amplitudes) : amplitudes_(amplitudes) {
    if (std::abs(norm_squared() - 1.0) > kUnitTolerance) {
        throw DomainError("two-qubit state is not normalized");
    }
}

double TwoQubitState::norm_squared() const {
    double s = 0.0;
    for (const auto& c : amplitudes_) {
        s += std::norm(c);
    }
    return s;
}

TwoQubitState build_singlet() {
    const double h = 1.0 / std::sqrt(2.0);
    return TwoQubitState({Complex(0.0), Complex(h), Complex(-h), Complex(0.0)});
}

QubitState spin_eigenstate(const Direction& d, Spin s) {
    double c = std::sqrt(std::max(0.0, 0.5 * (1.0 + d.z())));  // cos(theta/2)
    double sn = std::sqrt(std::max(0.0, 0.5 * (1.0 - d.z()))); // sin(theta/2)
    double rho = std::hypot(d.x(), d.y());
    Complex phase = rho > 0.0 ? Complex(d.x() / rho, d.y() / rho) : Complex(1.0, 0.0);
    if (s == Spin::up) {
        return {{Complex(c), phase * sn}};
    }
    return {{-std::conj(phase) * sn, Complex(c)}};
}

double joint_probability(const TwoQubitState& state, const Direction& a, const Direction& b, Outcome out) {
    require_normalized(state);
    Matrix2 pa = projector(a, out.x);
    Matrix2 pb = projector(b, out.y);
    Complex acc(0.0);
    // Amplitude index 2*i + j: i for particle I, j for particle II.
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Complex applied(0.0);
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    applied += pa[i][k] * pb[j][l] * state[2 * k + l];
                }
            }
            acc += std::conj(state[2 * i + j]) * applied;
        }
    }
    return std::clamp(acc.real(), 0.0, 1.0);
}

JointTable joint_table(const TwoQubitState& state, const Direction& a, const Direction& b) {
    JointTable t{};
    for (std::size_t k = 0; k < 4; ++k) {
        t[k] = joint_probability(state, a, b, kOutcomes[k]);
    }
    return t;
}

JointTable singlet_joint_table(const Direction& a, const Direction& b) {
    double c = a.dot(b);
    return {0.25 * (1.0 - c), 0.25 * (1.0 + c), 0.25 * (1.0 + c), 0.25 * (1.0 - c)};
}

double correlation(const TwoQubitState& state, const Direction& a, const Direction& b) {
    return correlation_of(joint_table(state, a, b));
}

QubitState reduce_on_outcome(const TwoQubitState& state, const Direction& a, Spin x) {
    require_normalized(state);
    QubitState e = spin_eigenstate(a, x);
    QubitState out{{Complex(0.0), Complex(0.0)}};
    for (int j = 0; j < 2; ++j) {
        out.amplitudes[j] = std::conj(e.amplitudes[0]) * state[j] + std::conj(e.amplitudes[1]) * state[2 + j];
    }
    double p = out.norm_squared();
    if (p < 1e-15) {
        throw DomainError("conditioning outcome has zero probability");
    }
    double scale = 1.0 / std::sqrt(p);
    out.amplitudes[0] *= scale;
    out.amplitudes[1] *= scale;
    return out;
}

double measure_probability(const QubitState& state, const Direction& d, Spin s) {
    QubitState e = spin_eigenstate(d, s);
    Complex overlap = std::conj(e.amplitudes[0]) * state.amplitudes[0] + std::conj(e.amplitudes[1]) * state.amplitudes[1];
    return std::norm(overlap);
}

Outcome sample_outcome(const JointTable& table, double u) {
    double cumulative = 0.0;
    std::size_t last_possible = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (table[k] <= 0.0) {
            continue;
        }
        cumulative += table[k];
        last_possible = k;
        if (u < cumulative) {
            return kOutcomes[k];
        }
    }
    // Rounding left u above the accumulated total; never return a
    // zero-probability outcome.
    return kOutcomes[last_possible];
}

Outcome sample_trial(const TwoQubitState& state, const Direction& a, const Direction& b, RandomStream& rng) {
    return sample_outcome(joint_table(state, a, b), rng.uniform());
}

} // namespace spce
