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
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "spce/contextual.hpp"
#include "spce/direction.hpp"
#include "spce/kernel_table.hpp"
#include "spce/quantum.hpp"
#include "spce/random.hpp"

namespace spce {

// Hidden variable: a direction (default parameterization) or an opaque id
// into a response table.
class HiddenVariable {
  public:
    HiddenVariable(const Direction& d) : value_(d) {}  // NOLINT(implicit)
    static HiddenVariable from_id(LambdaId id) { return HiddenVariable(id); }

    bool is_direction() const { return std::holds_alternative<Direction>(value_); }
    // Throws ContractError on kind mismatch.
    const Direction& direction() const;
    LambdaId id() const;

  private:
    explicit HiddenVariable(LambdaId id) : value_(id) {}
    std::variant<Direction, LambdaId> value_;
};

struct Atom {
    HiddenVariable lambda;
    std::uint64_t count;
};

/*!
 * Finite mixed ensemble: n_k pairs described by lambda_k. Drawing a pair
 * selects atom k with probability n_k / sum(n).
 */
class AtomicEnsemble {
  public:
    // Throws ParameterError for an empty list or a zero count.
    explicit AtomicEnsemble(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    std::uint64_t total() const { return total_; }
    double weight(std::size_t k) const { return static_cast<double>(atoms_[k].count) / static_cast<double>(total_); }

    // Index of a randomly drawn atom (with replacement).
    std::size_t draw(RandomStream& rng) const;

  private:
    std::vector<Atom> atoms_;
    std::vector<std::uint64_t> cumulative_;
    std::uint64_t total_ = 0;
};

// lambda uniform on the unit sphere, rho = 1/(4 pi).
struct UniformSphereEnsemble {
    static constexpr double density() { return 1.0 / (4.0 * kPi); }
};

using HiddenVariableEnsemble = std::variant<AtomicEnsemble, UniformSphereEnsemble>;

// Uniform direction on the sphere from two uniforms.
Direction sample_uniform_sphere(RandomStream& rng);

enum class ResponseKind { deterministic_sign, stochastic_independent, table };

// A setting pair (A, B).
struct SettingPair {
    Direction a;
    Direction b;
};

/*!
 * Local response functions p1(x|A,lambda) and p2(y|B,lambda).
 *
 *  - deterministic_sign: x = sign(A.lambda), y = -sign(B.lambda), with
 *    sign(0) = +1. Requires direction-valued lambda.
 *  - stochastic_independent: x and y independent given lambda with
 *    P(x = +1) = up_first(A, lambda), P(y = +1) = up_second(B, lambda).
 *  - table: per-context marginals of a factorizing KernelTable; the
 *    context id of (A, B) is its index in the registered setting list.
 */
class ResponseModel {
  public:
    using UpProbability = std::function<double(const Direction&, const HiddenVariable&)>;

    static ResponseModel deterministic_sign();
    static ResponseModel stochastic_independent(UpProbability up_first, UpProbability up_second);
    // Throws ContractError if some (lambda, context) row does not factorize
    // within 1e-10, DomainError if rows do not sum to 1.
    static ResponseModel table(KernelTable kernel, std::vector<SettingPair> contexts);

    ResponseKind kind() const { return kind_; }

    // True when every p1, p2 value is 0 or 1 (situation of strict determinism).
    bool is_deterministic() const;

    double first(Spin x, const Direction& a, const Direction& b, const HiddenVariable& lambda) const;
    double second(Spin y, const Direction& a, const Direction& b, const HiddenVariable& lambda) const;

    // p1(x|A,lambda) p2(y|B,lambda) for the four outcomes.
    JointTable product_table(const Direction& a, const Direction& b, const HiddenVariable& lambda) const;

    // Context id for (A, B) under the table kind. Throws ParameterError if
    // the pair was not registered.
    ContextId context_of(const Direction& a, const Direction& b) const;

  private:
    ResponseKind kind_ = ResponseKind::deterministic_sign;
    UpProbability up_first_, up_second_;
    std::shared_ptr<const KernelTable> kernel_;
    std::vector<SettingPair> contexts_;
};

Spin sign_response(const Direction& d, const Direction& lambda);

struct MonteCarloOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/*!
 * P(x,y|A,B) = integral over Lambda of p1(x|A,l) p2(y|B,l) rho(l).
 *
 * Exact sum for atomic ensembles; closed form for the sign model on the
 * uniform sphere; Monte Carlo (per `mc`) otherwise. Exact routes return a
 * zero standard error.
 */
std::array<Estimate, 4> lrhv_table(const HiddenVariableEnsemble& ensemble, const ResponseModel& response,
                                   const Direction& a, const Direction& b, const MonteCarloOptions& mc = {});
Estimate lrhv_probability(const HiddenVariableEnsemble& ensemble, const ResponseModel& response, const Direction& a,
                          const Direction& b, Outcome out, const MonteCarloOptions& mc = {});

// Closed form for the sign model under uniform lambda: correlations
// -1 + 2 theta/pi, uniform marginals.
JointTable sign_model_uniform_table(const Direction& a, const Direction& b);

// Monte Carlo route for the same model through the vectorized quadrant
// counter. Used to cross-check the closed form.
std::array<Estimate, 4> sign_model_monte_carlo(const Direction& a, const Direction& b, std::uint64_t samples,
                                               const RandomStream& rng, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Context-dependent decomposition
// ---------------------------------------------------------------------------

struct WeightedLambda {
    HiddenVariable lambda;
    double weight;
};

// Lambda(A,B) with weights rho_AB.
using ContextualSpace = std::function<std::vector<WeightedLambda>(const Direction&, const Direction&)>;
// p(x,y|A,B,lambda).
using ContextKernel = std::function<JointTable(const Direction&, const Direction&, const HiddenVariable&)>;

/*!
 * P(x,y|A,B) = sum over Lambda(A,B) of p(x,y|A,B,l) rho_AB(l).
 *
 * Throws DomainError if a kernel row does not sum to 1 within 1e-9 or the
 * weights of Lambda(A,B) do not sum to 1 within 1e-9.
 */
JointTable contextual_table(const ContextualSpace& space, const ContextKernel& kernel, const Direction& a,
                            const Direction& b);
double contextual_probability(const ContextualSpace& space, const ContextKernel& kernel, const Direction& a,
                              const Direction& b, Outcome out);

// One atom per context whose kernel row is the exact singlet table.
ContextualSpace single_atom_space();
ContextKernel singlet_kernel();

// Context-independent space and product kernel of a local model.
ContextualSpace context_free_space(const AtomicEnsemble& ensemble);
ContextKernel product_kernel(const ResponseModel& response);

// Kernel backed by a KernelTable with contexts registered in order.
ContextKernel table_kernel(std::shared_ptr<const KernelTable> kernel, std::vector<SettingPair> contexts);

// ---------------------------------------------------------------------------
// Factorization check
// ---------------------------------------------------------------------------

inline constexpr double kFactorizationTolerance = 1e-10;

struct FactorizationPoint {
    Direction a;
    Direction b;
    HiddenVariable lambda;
};

struct FactorizationResult {
    double violation;  // max over outcomes of |p - p1 p2|
    bool pass;
};

struct FactorizationReport {
    std::vector<FactorizationResult> points;
    double max_violation = 0.0;
    std::size_t worst_point = 0;
    double tolerance = kFactorizationTolerance;

    bool factorizes() const { return max_violation <= tolerance; }
};

// Largest |p(x,y) - p1(x) p2(y)| where p1, p2 are the marginals of `table`.
double factorization_violation(const JointTable& table);

// Throws ParameterError for an empty grid.
FactorizationReport check_factorization(const ContextKernel& kernel, std::span<const FactorizationPoint> grid,
                                        double tolerance = kFactorizationTolerance);
// Every (lambda, direction) row of a table, in key order.
FactorizationReport check_factorization(const KernelTable& table, double tolerance = kFactorizationTolerance);

// ---------------------------------------------------------------------------
// Random-experiment protocol
// ---------------------------------------------------------------------------

// Coincidence counts in kOutcomes order.
struct JointCounts {
    std::array<std::uint64_t, 4> counts{};

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    JointTable frequencies() const;
    // Binomial standard errors of the frequencies.
    std::array<double, 4> std_errors() const;

    friend bool operator==(const JointCounts&, const JointCounts&) = default;
};

// Step (i)-(ii) draws from an atomic ensemble: n_draws atom indices taken
// with replacement from rng.
std::vector<std::size_t> protocol_draws(const AtomicEnsemble& ensemble, std::uint64_t n_draws,
                                        const RandomStream& rng);

// Step (iii) for a recorded draw sequence. Order of `draws` is irrelevant.
std::vector<JointCounts> tally_protocol(const AtomicEnsemble& ensemble, const ResponseModel& response,
                                        std::span<const SettingPair> settings, std::span<const std::size_t> draws);

/*!
 * The three-step random experiment: draw a pair from the ensemble, measure
 * it in every listed setting, put it back; tally per setting.
 *
 * Requires a deterministic response when more than one setting is listed
 * (ContractError otherwise); a stochastic response is run in single-setting
 * mode. Throws ParameterError for n_draws == 0 or no settings.
 */
std::vector<JointCounts> run_protocol(const HiddenVariableEnsemble& ensemble, const ResponseModel& response,
                                      std::span<const SettingPair> settings, std::uint64_t n_draws,
                                      const RandomStream& rng, unsigned threads = 1);

// Per-draw outcomes in every setting for a recorded draw sequence.
// Deterministic responses only.
std::vector<std::vector<Outcome>> protocol_outcomes(const AtomicEnsemble& ensemble, const ResponseModel& response,
                                                    std::span<const SettingPair> settings,
                                                    std::span<const std::size_t> draws);

// Per-draw outcomes for uniform lambda and the sign model; draw i comes from
// batch i / kSmearedBatch of rng.
std::vector<std::vector<Outcome>> uniform_sign_protocol_outcomes(std::span<const SettingPair> settings,
                                                                 std::uint64_t n_draws, const RandomStream& rng,
                                                                 unsigned threads = 1);

// Single-setting sequential mode for any response: outcomes for draw i
// sampled from p1 and p2 independently.
std::vector<Outcome> single_setting_outcomes(const HiddenVariableEnsemble& ensemble, const ResponseModel& response,
                                             const SettingPair& setting, std::uint64_t n_draws,
                                             const RandomStream& rng);

} // namespace spce
