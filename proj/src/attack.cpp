// Copyright 2026 The qseal Authors
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

#include "qseal/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qseal {

namespace {

void check_nu(double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) {
        throw std::invalid_argument("nu must lie in [0, 1]");
    }
}

}  // namespace

MeasurementCoefficients chau_coefficients(double nu, std::size_t dim) {
    check_nu(nu);
    if (dim < 2) {
        throw std::invalid_argument("measurement needs N >= 2");
    }
    const double floor = (1.0 - nu) / static_cast<double>(dim);
    const double c_base = std::sqrt(floor);
    const double c_top = std::sqrt(nu + floor);
    return {nu, dim, c_base, c_top - c_base};
}

double completeness_defect(const MeasurementCoefficients &coeffs) {
    const double top = coeffs.c_base + coeffs.c_boost;
    return std::abs(top * top + static_cast<double>(coeffs.dim - 1) * coeffs.c_base * coeffs.c_base - 1.0);
}

DiagonalKraus::DiagonalKraus(std::size_t target, MeasurementCoefficients coeffs) : target_(target), coeffs_(coeffs) {
    if (target >= coeffs.dim) {
        throw std::out_of_range("Kraus target index out of range");
    }
}

KrausResult apply_kraus(const StateVector &state, const DiagonalKraus &kraus) {
    const std::size_t dim = kraus.coefficients().dim;
    if (state.dim() != dim) {
        throw std::invalid_argument("apply_kraus: state has dimension " + std::to_string(state.dim()) +
                                    ", operator has " + std::to_string(dim));
    }
    if (!state.is_normalized()) {
        throw std::invalid_argument("apply_kraus: input state is not normalized");
    }
    std::vector<double> out(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        out[j] = kraus.diagonal(j) * state[j];
    }
    StateVector image(std::move(out));
    const double probability = image.norm_sq();
    if (probability < kDegenerateBranchProbability) {
        throw DegenerateBranchError("outcome " + std::to_string(kraus.target()) + " has probability " +
                                    std::to_string(probability) + "; post-state is undefined");
    }
    return {image.normalized(), probability};
}

Distribution outcome_distribution(const AmplitudeMatrix &amps, Message i_prime, double nu) {
    check_nu(nu);
    const double floor = (1.0 - nu) / static_cast<double>(amps.dimension());
    auto p = amps.row(i_prime);
    for (double &x : p) {
        x = floor + nu * x * x;
    }
    return Distribution(std::move(p));
}

double identify_probability(const AmplitudeMatrix &amps, Message i_prime, double nu) {
    check_nu(nu);
    return (1.0 - nu) / static_cast<double>(amps.dimension()) + nu * amps.weight(i_prime, i_prime);
}

double escape_probability(const AmplitudeMatrix &amps, Message i_prime, double nu) {
    const auto c = chau_coefficients(nu, amps.dimension());
    if (amps.is_product_form()) {
        if (i_prime >= amps.dimension()) {
            throw std::out_of_range("message index out of range");
        }
        // Every row has C(n, d) entries at distance d.
        const unsigned n = amps.bits();
        double total = 0.0;
        double binom = 1.0;
        for (unsigned d = 0; d <= n; ++d) {
            const double pass = c.c_base + c.c_boost * amps.class_weight(d);
            total += binom * pass * pass;
            binom = binom * (n - d) / (d + 1);
        }
        return std::clamp(total, 0.0, 1.0);
    }
    double total = 0.0;
    for (double lambda : amps.row(i_prime)) {
        const double pass = c.c_base + c.c_boost * lambda * lambda;
        total += pass * pass;
    }
    return std::clamp(total, 0.0, 1.0);
}

AttackOutcome measurement_attack(const AmplitudeMatrix &amps, Message i_prime, double nu, Rng &rng) {
    const auto dist = outcome_distribution(amps, i_prime, nu);
    const std::size_t decoded = sample_outcome(dist, rng);
    const DiagonalKraus kraus(decoded, chau_coefficients(nu, amps.dimension()));
    auto result = apply_kraus(sealed_state(amps, i_prime), kraus);
    return {decoded, std::move(result.post_state), result.probability, true};
}

AttackOutcome coin_toss_attack(const AmplitudeMatrix &amps, Message i_prime, Rng &rng) {
    auto sealed = sealed_state(amps, i_prime);
    if (uniform01(rng) >= 0.5) {
        return {std::nullopt, std::move(sealed), 0.5, false};
    }
    const std::size_t decoded = sample_outcome(honest_readout_distribution(amps, i_prime), rng);
    const DiagonalKraus projector(decoded, chau_coefficients(1.0, amps.dimension()));
    auto result = apply_kraus(sealed, projector);
    return {decoded, std::move(result.post_state), 0.5 * result.probability, true};
}

double coin_toss_escape(const AmplitudeMatrix &amps, Message i_prime) {
    return 0.5 + 0.5 * escape_probability(amps, i_prime, 1.0);
}

double verification_pass_probability(const StateVector &sealed, const AttackOutcome &outcome) {
    if (!outcome.acted) {
        return 1.0;
    }
    const double overlap = sealed.overlap(outcome.post_state);
    return std::clamp(overlap * overlap, 0.0, 1.0);
}

bool projective_verification(const StateVector &sealed, const AttackOutcome &outcome, Rng &rng) {
    return uniform01(rng) < verification_pass_probability(sealed, outcome);
}

}  // namespace qseal
