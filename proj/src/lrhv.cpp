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

#include "spce/lrhv.hpp"

#include <algorithm>
#include <cmath>

#include "spce/errors.hpp"
#include "spce/parallel.hpp"
#include "spce/simd/kernels.hpp"

namespace spce {

const Direction& HiddenVariable::direction() const {
    if (const auto* d = std::get_if<Direction>(&value_)) {
        return *d;
    }
    throw ContractError("hidden variable is an id, not a direction");
}

LambdaId HiddenVariable::id() const {
    if (const auto* id = std::get_if<LambdaId>(&value_)) {
        return *id;
    }
    throw ContractError("hidden variable is a direction, not an id");
}

AtomicEnsemble::AtomicEnsemble(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) {
        throw ParameterError("ensemble needs at least one atom");
    }
    for (const Atom& a : atoms_) {
        if (a.count == 0) {
            throw ParameterError("ensemble atom counts must be positive");
        }
        total_ += a.count;
        cumulative_.push_back(total_);
    }
}

std::size_t AtomicEnsemble::draw(RandomStream& rng) const {
    std::uint64_t r = rng.below(total_);
    return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), r) - cumulative_.begin());
}

Direction sample_uniform_sphere(RandomStream& rng) {
    double z = 1.0 - 2.0 * rng.uniform();
    double phi = 2.0 * kPi * rng.uniform();
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Direction::normalized({r * std::cos(phi), r * std::sin(phi), z});
}

Spin sign_response(const Direction& d, const Direction& lambda) {
    return d.dot(lambda) >= 0.0 ? Spin::up : Spin::down;
}

// --- ResponseModel ---------------------------------------------------------

namespace {

std::pair<std::array<double, 2>, std::array<double, 2>> marginals(const JointTable& t) {
    // index 0: +1, index 1: -1
    return {{t[0] + t[1], t[2] + t[3]}, {t[0] + t[2], t[1] + t[3]}};
}

double spin_probability(Spin s, double p_up) { return s == Spin::up ? p_up : 1.0 - p_up; }

} // namespace

ResponseModel ResponseModel::deterministic_sign() { return ResponseModel{}; }

ResponseModel ResponseModel::stochastic_independent(UpProbability up_first, UpProbability up_second) {
    ResponseModel r;
    r.kind_ = ResponseKind::stochastic_independent;
    r.up_first_ = std::move(up_first);
    r.up_second_ = std::move(up_second);
    return r;
}

ResponseModel ResponseModel::table(KernelTable kernel, std::vector<SettingPair> contexts) {
    kernel.validate();
    FactorizationReport report = check_factorization(kernel);
    if (!report.factorizes()) {
        throw ContractError("kernel table does not factorize (max violation " +
                            std::to_string(report.max_violation) + "); use the contextual formula instead");
    }
    for (ContextId id : kernel.context_ids()) {
        if (id >= contexts.size()) {
            throw ParameterError("kernel table refers to direction id " + std::to_string(id) +
                                 " with no registered setting");
        }
    }
    ResponseModel r;
    r.kind_ = ResponseKind::table;
    r.kernel_ = std::make_shared<const KernelTable>(std::move(kernel));
    r.contexts_ = std::move(contexts);
    return r;
}

bool ResponseModel::is_deterministic() const {
    switch (kind_) {
    case ResponseKind::deterministic_sign:
        return true;
    case ResponseKind::stochastic_independent:
        return false;
    case ResponseKind::table:
        for (const auto& key : kernel_->keys()) {
            auto [m1, m2] = marginals(kernel_->at(key.first, key.second));
            for (double p : {m1[0], m2[0]}) {
                if (std::abs(p) > kFactorizationTolerance && std::abs(p - 1.0) > kFactorizationTolerance) {
                    return false;
                }
            }
        }
        return true;
    }
    return false;
}

ContextId ResponseModel::context_of(const Direction& a, const Direction& b) const {
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
        if (contexts_[i].a.approx_equal(a) && contexts_[i].b.approx_equal(b)) {
            return static_cast<ContextId>(i);
        }
    }
    throw ParameterError("setting pair " + a.to_string() + ", " + b.to_string() + " is not a registered context");
}

double ResponseModel::first(Spin x, const Direction& a, const Direction& b, const HiddenVariable& lambda) const {
    switch (kind_) {
    case ResponseKind::deterministic_sign:
        return sign_response(a, lambda.direction()) == x ? 1.0 : 0.0;
    case ResponseKind::stochastic_independent:
        return spin_probability(x, up_first_(a, lambda));
    case ResponseKind::table: {
        auto m = marginals(kernel_->at(lambda.id(), context_of(a, b))).first;
        return x == Spin::up ? m[0] : m[1];
    }
    }
    return 0.0;
}

double ResponseModel::second(Spin y, const Direction& a, const Direction& b, const HiddenVariable& lambda) const {
    switch (kind_) {
    case ResponseKind::deterministic_sign:
        return flip(sign_response(b, lambda.direction())) == y ? 1.0 : 0.0;
    case ResponseKind::stochastic_independent:
        return spin_probability(y, up_second_(b, lambda));
    case ResponseKind::table: {
        auto m = marginals(kernel_->at(lambda.id(), context_of(a, b))).second;
        return y == Spin::up ? m[0] : m[1];
    }
    }
    return 0.0;
}

JointTable ResponseModel::product_table(const Direction& a, const Direction& b, const HiddenVariable& lambda) const {
    double p1[2] = {first(Spin::up, a, b, lambda), first(Spin::down, a, b, lambda)};
    double p2[2] = {second(Spin::up, a, b, lambda), second(Spin::down, a, b, lambda)};
    return {p1[0] * p2[0], p1[0] * p2[1], p1[1] * p2[0], p1[1] * p2[1]};
}

// --- Product formula -------------------------------------------------------

JointTable sign_model_uniform_table(const Direction& a, const Direction& b) {
    double theta = a.angle_to(b);
    double aligned = 0.5 * (1.0 - theta / kPi);  // sign(A.l) == sign(B.l), split over ++ and --
    double crossed = 0.5 * theta / kPi;
    // x = sign(A.l), y = -sign(B.l)
    return {crossed, aligned, aligned, crossed};
}

namespace {

std::array<Estimate, 4> frequencies_with_errors(const std::array<std::uint64_t, 4>& counts) {
    JointCounts jc{counts};
    JointTable f = jc.frequencies();
    std::array<double, 4> se = jc.std_errors();
    return {Estimate{f[0], se[0]}, Estimate{f[1], se[1]}, Estimate{f[2], se[2]}, Estimate{f[3], se[3]}};
}

// Quadrant (sign A.l, sign B.l) to outcome (x, y) = (sA, -sB).
constexpr std::size_t kQuadrantToOutcome[4] = {1, 0, 3, 2};

simd::Vec3Batch uniform_batch(std::uint64_t count, RandomStream rng) {
    simd::Vec3Batch lambda(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        lambda.set(i, sample_uniform_sphere(rng));
    }
    return lambda;
}

std::vector<std::array<std::uint64_t, 4>> uniform_sign_counts(std::span<const SettingPair> settings,
                                                              std::uint64_t n, const RandomStream& rng,
                                                              unsigned threads) {
    std::uint64_t n_batches = (n + kSmearedBatch - 1) / kSmearedBatch;
    std::vector<std::vector<std::array<std::uint64_t, 4>>> parts(n_batches);
    parallel_for(n_batches, threads, [&](std::size_t k) {
        std::uint64_t count = std::min(kSmearedBatch, n - k * kSmearedBatch);
        simd::Vec3Batch lambda = uniform_batch(count, rng.substream(k));
        parts[k].resize(settings.size());
        for (std::size_t s = 0; s < settings.size(); ++s) {
            simd::QuadrantCounts q = simd::sign_quadrant_counts(lambda.view(), settings[s].a, settings[s].b);
            for (std::size_t j = 0; j < 4; ++j) {
                parts[k][s][kQuadrantToOutcome[j]] = q[j];
            }
        }
    });
    std::vector<std::array<std::uint64_t, 4>> total(settings.size(), std::array<std::uint64_t, 4>{});
    for (const auto& part : parts) {
        for (std::size_t s = 0; s < settings.size(); ++s) {
            for (std::size_t j = 0; j < 4; ++j) {
                total[s][j] += part[s][j];
            }
        }
    }
    return total;
}

std::array<Estimate, 4> stochastic_uniform_table(const ResponseModel& response, const Direction& a,
                                                 const Direction& b, const MonteCarloOptions& mc) {
    if (mc.samples < 2) {
        throw ParameterError("Monte Carlo integration needs at least 2 samples");
    }
    RandomStream rng(mc.seed);
    std::uint64_t n_batches = (mc.samples + kSmearedBatch - 1) / kSmearedBatch;
    std::vector<std::array<double, 8>> parts(n_batches);
    parallel_for(n_batches, mc.threads, [&](std::size_t k) {
        RandomStream s = rng.substream(k);
        std::uint64_t count = std::min(kSmearedBatch, mc.samples - k * kSmearedBatch);
        std::array<double, 8> acc{};
        for (std::uint64_t i = 0; i < count; ++i) {
            JointTable t = response.product_table(a, b, sample_uniform_sphere(s));
            for (std::size_t j = 0; j < 4; ++j) {
                acc[j] += t[j];
                acc[4 + j] += t[j] * t[j];
            }
        }
        parts[k] = acc;
    });
    std::array<double, 8> acc{};
    for (const auto& p : parts) {
        for (std::size_t j = 0; j < 8; ++j) {
            acc[j] += p[j];
        }
    }
    double n = static_cast<double>(mc.samples);
    std::array<Estimate, 4> out;
    for (std::size_t j = 0; j < 4; ++j) {
        double mean = acc[j] / n;
        double var = std::max(0.0, (acc[4 + j] - n * mean * mean) / (n - 1.0));
        out[j] = {mean, std::sqrt(var / n)};
    }
    return out;
}

} // namespace

std::array<Estimate, 4> sign_model_monte_carlo(const Direction& a, const Direction& b, std::uint64_t samples,
                                               const RandomStream& rng, unsigned threads) {
    if (samples == 0) {
        throw ParameterError("Monte Carlo integration needs at least 1 sample");
    }
    SettingPair setting{a, b};
    return frequencies_with_errors(uniform_sign_counts({&setting, 1}, samples, rng, threads)[0]);
}

std::array<Estimate, 4> lrhv_table(const HiddenVariableEnsemble& ensemble, const ResponseModel& response,
                                   const Direction& a, const Direction& b, const MonteCarloOptions& mc) {
    if (const auto* atomic = std::get_if<AtomicEnsemble>(&ensemble)) {
        JointTable sum{};
        for (std::size_t k = 0; k < atomic->size(); ++k) {
            JointTable t = response.product_table(a, b, atomic->atoms()[k].lambda);
            for (std::size_t j = 0; j < 4; ++j) {
                sum[j] += atomic->weight(k) * t[j];
            }
        }
        return {Estimate{sum[0], 0.0}, Estimate{sum[1], 0.0}, Estimate{sum[2], 0.0}, Estimate{sum[3], 0.0}};
    }
    switch (response.kind()) {
    case ResponseKind::deterministic_sign: {
        JointTable t = sign_model_uniform_table(a, b);
        return {Estimate{t[0], 0.0}, Estimate{t[1], 0.0}, Estimate{t[2], 0.0}, Estimate{t[3], 0.0}};
    }
    case ResponseKind::stochastic_independent:
        return stochastic_uniform_table(response, a, b, mc);
    case ResponseKind::table:
        break;
    }
    throw ContractError("table responses need an atomic ensemble of lambda ids");
}

Estimate lrhv_probability(const HiddenVariableEnsemble& ensemble, const ResponseModel& response, const Direction& a,
                          const Direction& b, Outcome out, const MonteCarloOptions& mc) {
    return lrhv_table(ensemble, response, a, b, mc)[outcome_index(out)];
}

// --- Context-dependent formula ---------------------------------------------

JointTable contextual_table(const ContextualSpace& space, const ContextKernel& kernel, const Direction& a,
                            const Direction& b) {
    std::vector<WeightedLambda> atoms = space(a, b);
    double total_weight = 0.0;
    JointTable sum{};
    for (const auto& atom : atoms) {
        if (!(atom.weight >= 0.0)) {
            throw DomainError("negative weight in Lambda(A,B)");
        }
        total_weight += atom.weight;
        JointTable row = kernel(a, b, atom.lambda);
        double row_sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw DomainError("kernel entry outside [0, 1]");
            }
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > 1e-9) {
            throw DomainError("kernel row sums to " + std::to_string(row_sum));
        }
        for (std::size_t j = 0; j < 4; ++j) {
            sum[j] += atom.weight * row[j];
        }
    }
    if (std::abs(total_weight - 1.0) > 1e-9) {
        throw DomainError("weights of Lambda(A,B) sum to " + std::to_string(total_weight));
    }
    return sum;
}

double contextual_probability(const ContextualSpace& space, const ContextKernel& kernel, const Direction& a,
                              const Direction& b, Outcome out) {
    return contextual_table(space, kernel, a, b)[outcome_index(out)];
}

ContextualSpace single_atom_space() {
    return [](const Direction&, const Direction&) {
        return std::vector<WeightedLambda>{{HiddenVariable::from_id(0), 1.0}};
    };
}

ContextKernel singlet_kernel() {
    return [singlet = build_singlet()](const Direction& a, const Direction& b, const HiddenVariable&) {
        return joint_table(singlet, a, b);
    };
}

ContextualSpace context_free_space(const AtomicEnsemble& ensemble) {
    std::vector<WeightedLambda> atoms;
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        atoms.push_back({ensemble.atoms()[k].lambda, ensemble.weight(k)});
    }
    return [atoms](const Direction&, const Direction&) { return atoms; };
}

ContextKernel product_kernel(const ResponseModel& response) {
    return [response](const Direction& a, const Direction& b, const HiddenVariable& lambda) {
        return response.product_table(a, b, lambda);
    };
}

ContextKernel table_kernel(std::shared_ptr<const KernelTable> kernel, std::vector<SettingPair> contexts) {
    return [kernel = std::move(kernel), contexts = std::move(contexts)](const Direction& a, const Direction& b,
                                                                        const HiddenVariable& lambda) {
        for (std::size_t i = 0; i < contexts.size(); ++i) {
            if (contexts[i].a.approx_equal(a) && contexts[i].b.approx_equal(b)) {
                return kernel->at(lambda.id(), static_cast<ContextId>(i));
            }
        }
        throw ParameterError("setting pair is not a registered context");
    };
}

// --- Factorization ---------------------------------------------------------

double factorization_violation(const JointTable& table) {
    auto [m1, m2] = marginals(table);
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        double p1 = m1[kOutcomes[k].x == Spin::up ? 0 : 1];
        double p2 = m2[kOutcomes[k].y == Spin::up ? 0 : 1];
        worst = std::max(worst, std::abs(table[k] - p1 * p2));
    }
    return worst;
}

namespace {

void record(FactorizationReport& report, double violation) {
    if (report.points.empty() || violation > report.max_violation) {
        report.max_violation = violation;
        report.worst_point = report.points.size();
    }
    report.points.push_back({violation, violation <= report.tolerance});
}

} // namespace

FactorizationReport check_factorization(const ContextKernel& kernel, std::span<const FactorizationPoint> grid,
                                        double tolerance) {
    if (grid.empty()) {
        throw ParameterError("factorization check needs a non-empty grid");
    }
    FactorizationReport report;
    report.tolerance = tolerance;
    for (const auto& point : grid) {
        record(report, factorization_violation(kernel(point.a, point.b, point.lambda)));
    }
    return report;
}

FactorizationReport check_factorization(const KernelTable& table, double tolerance) {
    if (table.empty()) {
        throw ParameterError("factorization check needs a non-empty table");
    }
    FactorizationReport report;
    report.tolerance = tolerance;
    for (const auto& key : table.keys()) {
        record(report, factorization_violation(table.at(key.first, key.second)));
    }
    return report;
}

// --- Protocol --------------------------------------------------------------

JointTable JointCounts::frequencies() const {
    double n = static_cast<double>(total());
    if (n == 0.0) {
        return {};
    }
    return {counts[0] / n, counts[1] / n, counts[2] / n, counts[3] / n};
}

std::array<double, 4> JointCounts::std_errors() const {
    double n = static_cast<double>(total());
    JointTable f = frequencies();
    std::array<double, 4> se{};
    if (n == 0.0) {
        return se;
    }
    for (std::size_t k = 0; k < 4; ++k) {
        se[k] = std::sqrt(f[k] * (1.0 - f[k]) / n);
    }
    return se;
}

std::vector<std::size_t> protocol_draws(const AtomicEnsemble& ensemble, std::uint64_t n_draws,
                                        const RandomStream& rng) {
    RandomStream s = rng;
    std::vector<std::size_t> draws(n_draws);
    for (auto& d : draws) {
        d = ensemble.draw(s);
    }
    return draws;
}

namespace {

void require_settings(std::span<const SettingPair> settings) {
    if (settings.empty()) {
        throw ParameterError("protocol needs at least one setting");
    }
}

// Outcome index per (atom, setting) under a deterministic response.
std::vector<std::vector<std::size_t>> deterministic_outcomes(const AtomicEnsemble& ensemble,
                                                             const ResponseModel& response,
                                                             std::span<const SettingPair> settings) {
    if (!response.is_deterministic()) {
        throw ContractError("measuring every setting on one draw requires a deterministic response; "
                            "use single-setting mode");
    }
    std::vector<std::vector<std::size_t>> out(ensemble.size(), std::vector<std::size_t>(settings.size()));
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        for (std::size_t s = 0; s < settings.size(); ++s) {
            JointTable t = response.product_table(settings[s].a, settings[s].b, ensemble.atoms()[k].lambda);
            out[k][s] = static_cast<std::size_t>(std::max_element(t.begin(), t.end()) - t.begin());
        }
    }
    return out;
}

} // namespace

std::vector<JointCounts> tally_protocol(const AtomicEnsemble& ensemble, const ResponseModel& response,
                                        std::span<const SettingPair> settings, std::span<const std::size_t> draws) {
    require_settings(settings);
    auto outcome = deterministic_outcomes(ensemble, response, settings);
    // Tally per atom first; the result cannot depend on draw order.
    std::vector<std::uint64_t> per_atom(ensemble.size(), 0);
    for (std::size_t d : draws) {
        ++per_atom.at(d);
    }
    std::vector<JointCounts> tables(settings.size());
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        for (std::size_t s = 0; s < settings.size(); ++s) {
            tables[s].counts[outcome[k][s]] += per_atom[k];
        }
    }
    return tables;
}

std::vector<std::vector<Outcome>> protocol_outcomes(const AtomicEnsemble& ensemble, const ResponseModel& response,
                                                    std::span<const SettingPair> settings,
                                                    std::span<const std::size_t> draws) {
    require_settings(settings);
    auto outcome = deterministic_outcomes(ensemble, response, settings);
    std::vector<std::vector<Outcome>> out(settings.size(), std::vector<Outcome>(draws.size()));
    for (std::size_t i = 0; i < draws.size(); ++i) {
        for (std::size_t s = 0; s < settings.size(); ++s) {
            out[s][i] = kOutcomes[outcome.at(draws[i])[s]];
        }
    }
    return out;
}

std::vector<std::vector<Outcome>> uniform_sign_protocol_outcomes(std::span<const SettingPair> settings,
                                                                 std::uint64_t n_draws, const RandomStream& rng,
                                                                 unsigned threads) {
    require_settings(settings);
    std::vector<std::vector<Outcome>> out(settings.size(), std::vector<Outcome>(n_draws));
    std::uint64_t n_batches = (n_draws + kSmearedBatch - 1) / kSmearedBatch;
    parallel_for(n_batches, threads, [&](std::size_t k) {
        std::uint64_t begin = k * kSmearedBatch;
        std::uint64_t count = std::min(kSmearedBatch, n_draws - begin);
        RandomStream s = rng.substream(k);
        for (std::uint64_t i = 0; i < count; ++i) {
            Direction lambda = sample_uniform_sphere(s);
            for (std::size_t j = 0; j < settings.size(); ++j) {
                out[j][begin + i] = {sign_response(settings[j].a, lambda), flip(sign_response(settings[j].b, lambda))};
            }
        }
    });
    return out;
}

std::vector<Outcome> single_setting_outcomes(const HiddenVariableEnsemble& ensemble, const ResponseModel& response,
                                             const SettingPair& setting, std::uint64_t n_draws,
                                             const RandomStream& rng) {
    RandomStream s = rng;
    const auto* atomic = std::get_if<AtomicEnsemble>(&ensemble);
    std::vector<Outcome> out(n_draws);
    for (auto& o : out) {
        HiddenVariable lambda = atomic ? atomic->atoms()[atomic->draw(s)].lambda : HiddenVariable(sample_uniform_sphere(s));
        double p_up_first = response.first(Spin::up, setting.a, setting.b, lambda);
        double p_up_second = response.second(Spin::up, setting.a, setting.b, lambda);
        o.x = s.uniform() < p_up_first ? Spin::up : Spin::down;
        o.y = s.uniform() < p_up_second ? Spin::up : Spin::down;
    }
    return out;
}

std::vector<JointCounts> run_protocol(const HiddenVariableEnsemble& ensemble, const ResponseModel& response,
                                      std::span<const SettingPair> settings, std::uint64_t n_draws,
                                      const RandomStream& rng, unsigned threads) {
    require_settings(settings);
    if (n_draws == 0) {
        throw ParameterError("protocol needs at least one draw");
    }
    if (!response.is_deterministic()) {
        if (settings.size() > 1) {
            throw ContractError("a stochastic response cannot be measured in every setting on one draw; "
                                "run one setting at a time");
        }
        std::vector<JointCounts> tables(1);
        for (const Outcome& o : single_setting_outcomes(ensemble, response, settings[0], n_draws, rng)) {
            ++tables[0].counts[outcome_index(o)];
        }
        return tables;
    }
    if (const auto* atomic = std::get_if<AtomicEnsemble>(&ensemble)) {
        return tally_protocol(*atomic, response, settings, protocol_draws(*atomic, n_draws, rng));
    }
    if (response.kind() != ResponseKind::deterministic_sign) {
        throw ContractError("table responses need an atomic ensemble of lambda ids");
    }
    std::vector<JointCounts> tables;
    for (const auto& counts : uniform_sign_counts(settings, n_draws, rng, threads)) {
        tables.push_back(JointCounts{counts});
    }
    return tables;
}

} // namespace spce
