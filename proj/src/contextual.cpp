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

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <vector>

#include "spce/errors.hpp"
#include "spce/parallel.hpp"
#include "spce/simd/kernels.hpp"

namespace spce {

CapDistribution::CapDistribution(const Direction& center, double epsilon, CapProfile profile, double sigma)
    : center_(center), epsilon_(epsilon), profile_(profile), sigma_(sigma) {
    if (!(epsilon > 0.0 && epsilon < 2.0)) {
        throw ParameterError("cap epsilon must lie in (0, 2), got " + std::to_string(epsilon));
    }
    if (profile == CapProfile::truncated_gaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
        throw ParameterError("truncated-gaussian cap needs sigma > 0, got " + std::to_string(sigma));
    }
    orthonormal_basis(center_, u_, v_);
}

CapDistribution CapDistribution::uniform(const Direction& center, double epsilon) {
    return CapDistribution(center, epsilon, CapProfile::uniform, 0.0);
}

CapDistribution CapDistribution::truncated_gaussian(const Direction& center, double epsilon, double sigma) {
    return CapDistribution(center, epsilon, CapProfile::truncated_gaussian, sigma);
}

double CapDistribution::misalignment_quantile(double u) const {
    double t;
    if (profile_ == CapProfile::uniform) {
        t = epsilon_ * u;
    } else {
        // Truncated exponential in t with rate kappa = 1/sigma^2.
        double s2 = sigma_ * sigma_;
        t = -s2 * std::log1p(u * std::expm1(-epsilon_ / s2));
    }
    return std::min(std::max(t, 0.0), std::nextafter(epsilon_, 0.0));
}

double CapDistribution::misalignment_weight(double t) const {
    if (profile_ == CapProfile::uniform) {
        return 1.0;
    }
    return std::exp(-t / (sigma_ * sigma_));
}

Direction CapDistribution::direction_at(double t, double phi) const {
    const Vec3& c = center_.components();
    for (;;) {
        double cos_theta = 1.0 - t;
        double sin_theta = std::sqrt(t * (2.0 - t));
        double cu = sin_theta * std::cos(phi);
        double cv = sin_theta * std::sin(phi);
        Direction d = Direction::normalized({cos_theta * c[0] + cu * u_[0] + cv * v_[0],
                                             cos_theta * c[1] + cu * u_[1] + cv * v_[1],
                                             cos_theta * c[2] + cu * u_[2] + cv * v_[2]});
        if (contains(d)) {
            return d;
        }
        t *= 1.0 - 1e-12;
    }
}

bool CapDistribution::same_as(const CapDistribution& other) const {
    return center_.approx_equal(other.center_, 0.0) && epsilon_ == other.epsilon_ && profile_ == other.profile_ &&
           (profile_ == CapProfile::uniform || sigma_ == other.sigma_);
}

void ExperimentSetting::validate() const {
    if (!(eta_a > 0.0 && eta_a <= 1.0) || !(eta_b > 0.0 && eta_b <= 1.0)) {
        throw ParameterError("efficiencies must lie in (0, 1]");
    }
}

Direction sample_cap_direction(const CapDistribution& cap, RandomStream& rng) {
    double t = cap.misalignment_quantile(rng.uniform());
    double phi = 2.0 * kPi * rng.uniform();
    return cap.direction_at(t, phi);
}

namespace {

simd::MisalignmentMoments batch_moments(const ExperimentSetting& setting, std::uint64_t count, RandomStream rng) {
    simd::Vec3Batch a(count), b(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        a.set(i, sample_cap_direction(setting.cap_a, rng));
        b.set(i, sample_cap_direction(setting.cap_b, rng));
    }
    return simd::misalignment_moments(a.view(), b.view());
}

struct MisalignmentSummary {
    double mean;
    double std_error;
};

MisalignmentSummary misalignment_summary(const ExperimentSetting& setting, std::uint64_t n_samples,
                                         const RandomStream& rng, unsigned threads) {
    if (n_samples < kMinSmearedSamples) {
        throw ParameterError("smeared probability needs at least " + std::to_string(kMinSmearedSamples) +
                             " samples");
    }
    setting.validate();
    std::uint64_t n_batches = (n_samples + kSmearedBatch - 1) / kSmearedBatch;
    std::vector<simd::MisalignmentMoments> parts(n_batches);
    parallel_for(n_batches, threads, [&](std::size_t k) {
        std::uint64_t begin = k * kSmearedBatch;
        std::uint64_t count = std::min(kSmearedBatch, n_samples - begin);
        parts[k] = batch_moments(setting, count, rng.substream(k));
    });
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : parts) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    double n = static_cast<double>(n_samples);
    double mean = sum / n;
    double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

} // namespace

std::array<Estimate, 4> smeared_table(const ExperimentSetting& setting, std::uint64_t n_samples,
                                      const RandomStream& rng, unsigned threads) {
    // Singlet integrand: p(x,y|a,b) = (1 - xy + xy q)/4 with q = 1 - a.b.
    // Same-sign outcomes are eta q/4, opposite-sign (2 - q) eta/4.
    MisalignmentSummary s = misalignment_summary(setting, n_samples, rng, threads);
    double eta = setting.detection_probability();
    Estimate same{eta * 0.25 * s.mean, eta * 0.25 * s.std_error};
    Estimate opposite{eta * 0.25 * (2.0 - s.mean), eta * 0.25 * s.std_error};
    return {same, opposite, opposite, same};
}

Estimate smeared_probability(const ExperimentSetting& setting, Outcome out, std::uint64_t n_samples,
                             const RandomStream& rng, unsigned threads) {
    return smeared_table(setting, n_samples, rng, threads)[outcome_index(out)];
}

Estimate anti_correlation_gap(const ExperimentSetting& setting, std::uint64_t n_samples, const RandomStream& rng,
                              unsigned threads) {
    if (!setting.cap_a.same_as(setting.cap_b)) {
        throw ParameterError("anti-correlation gap needs identical caps on both sides");
    }
    MisalignmentSummary s = misalignment_summary(setting, n_samples, rng, threads);
    double eta = setting.detection_probability();
    return {eta * 0.5 * s.mean, eta * 0.5 * s.std_error};
}

namespace {

struct Node {
    double t;
    double phi;
    double weight;
};

std::vector<Node> cap_nodes(const CapDistribution& cap) {
    using Rule = boost::math::quadrature::gauss<double, 16>;
    std::vector<double> x, w;
    for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
        double xi = Rule::abscissa()[i];
        double wi = Rule::weights()[i];
        x.push_back(xi);
        w.push_back(wi);
        if (xi != 0.0) {
            x.push_back(-xi);
            w.push_back(wi);
        }
    }
    std::vector<Node> nodes;
    double total = 0.0;
    double eps = cap.epsilon();
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = 0.5 * eps * (x[i] + 1.0);
        double wt = 0.5 * eps * w[i] * cap.misalignment_weight(t);
        for (std::size_t j = 0; j < x.size(); ++j) {
            double phi = kPi * (x[j] + 1.0);
            double weight = wt * kPi * w[j];
            nodes.push_back({t, phi, weight});
            total += weight;
        }
    }
    for (auto& n : nodes) {
        n.weight /= total;
    }
    return nodes;
}

} // namespace

JointTable smeared_quadrature(const ExperimentSetting& setting) {
    setting.validate();
    const TwoQubitState singlet = build_singlet();
    std::vector<Node> na = cap_nodes(setting.cap_a);
    std::vector<Node> nb = cap_nodes(setting.cap_b);
    std::vector<Direction> db;
    db.reserve(nb.size());
    for (const auto& n : nb) {
        db.push_back(setting.cap_b.direction_at(n.t, n.phi));
    }
    JointTable table{};
    for (const auto& ma : na) {
        Direction a = setting.cap_a.direction_at(ma.t, ma.phi);
        for (std::size_t j = 0; j < nb.size(); ++j) {
            JointTable p = joint_table(singlet, a, db[j]);
            for (std::size_t k = 0; k < 4; ++k) {
                table[k] += ma.weight * nb[j].weight * p[k];
            }
        }
    }
    for (double& p : table) {
        p *= setting.detection_probability();
    }
    return table;
}

std::optional<Outcome> sample_contextual_trial(const ExperimentSetting& setting, RandomStream& rng) {
    Direction a = sample_cap_direction(setting.cap_a, rng);
    Direction b = sample_cap_direction(setting.cap_b, rng);
    Outcome out = sample_outcome(singlet_joint_table(a, b), rng.uniform());
    bool detected = rng.uniform() < setting.detection_probability();
    if (!detected) {
        return std::nullopt;
    }
    return out;
}

} // namespace spce
