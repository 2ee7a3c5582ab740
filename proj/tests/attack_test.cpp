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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gtest/gtest.h"

using namespace qseal;

namespace {

constexpr double kPi = std::numbers::pi;

// M_i as a full N x N matrix, multiplied out the long way.
double materialized_branch_probability(const StateVector &state, std::size_t target,
                                       const MeasurementCoefficients &c) {
    const std::size_t dim = state.dim();
    double norm_sq = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        double v = 0.0;
        for (std::size_t col = 0; col < dim; ++col) {
            const double m = r != col ? 0.0 : (r == target ? c.c_base + c.c_boost : c.c_base);
            v += m * state[col];
        }
        norm_sq += v * v;
    }
    return norm_sq;
}

// Escape probability by explicit collapse: run every Kraus branch, then
// project the normalized post-state onto the sealed state.
double escape_by_collapse(const AmplitudeMatrix &amps, Message i_prime, double nu) {
    const auto sealed = sealed_state(amps, i_prime);
    const auto c = chau_coefficients(nu, amps.dimension());
    double total = 0.0;
    for (std::size_t i = 0; i < amps.dimension(); ++i) {
        try {
            const auto r = apply_kraus(sealed, DiagonalKraus(i, c));
            const double overlap = sealed.overlap(r.post_state);
            total += r.probability * overlap * overlap;
        } catch (const DegenerateBranchError &) {
        }
    }
    return total;
}

}  // namespace

TEST(ChauCoefficients, limits_and_half) {
    for (std::size_t dim : {2, 5, 64}) {
        const auto none = chau_coefficients(0.0, dim);
        EXPECT_DOUBLE_EQ(none.c_base, 1 / std::sqrt(double(dim)));
        EXPECT_EQ(none.c_boost, 0.0);
        const auto full = chau_coefficients(1.0, dim);
        EXPECT_EQ(full.c_base, 0.0);
        EXPECT_EQ(full.c_boost, 1.0);
    }
    const auto half = chau_coefficients(0.5, 2);
    EXPECT_DOUBLE_EQ(half.c_base, 0.5);
    EXPECT_NEAR(half.c_boost, 0.36602540378443864676, 1e-15);
}

TEST(ChauCoefficients, rejects_bad_arguments) {
    EXPECT_THROW(chau_coefficients(-0.01, 4), std::invalid_argument);
    EXPECT_THROW(chau_coefficients(1.01, 4), std::invalid_argument);
    EXPECT_THROW(chau_coefficients(std::nan(""), 4), std::invalid_argument);
    EXPECT_THROW(chau_coefficients(0.5, 1), std::invalid_argument);
}

TEST(CompletenessDefect, examples) {
    EXPECT_LE(completeness_defect(chau_coefficients(0.5, 2)), 1e-15);
    EXPECT_LE(completeness_defect(chau_coefficients(0.0, 2)), 1e-15);
    EXPECT_EQ(completeness_defect(chau_coefficients(0.0, 4)), 0.0);
    EXPECT_EQ(completeness_defect(chau_coefficients(1.0, 4096)), 0.0);
}

TEST(CompletenessDefect, small_on_grid) {
    for (int k = 0; k <= 10; ++k) {
        for (std::size_t dim = 2; dim <= 4096; dim *= 2) {
            ASSERT_LE(completeness_defect(chau_coefficients(k / 10.0, dim)), 1e-12);
        }
    }
}

TEST(DiagonalKraus, image_norm_is_bounded) {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        const std::size_t dim = 2 + rng() % 30;
        const auto c = chau_coefficients(uniform01(rng), dim);
        std::vector<double> v(dim);
        for (double &x : v) {
            x = uniform01(rng) - 0.5;
        }
        const auto state = StateVector(v).normalized();
        const double p = materialized_branch_probability(state, rng() % dim, c);
        ASSERT_GE(p, c.c_base * c.c_base - 1e-15);
        ASSERT_LE(p, (c.c_base + c.c_boost) * (c.c_base + c.c_boost) + 1e-15);
    }
    EXPECT_THROW(DiagonalKraus(4, chau_coefficients(0.5, 4)), std::out_of_range);
}

TEST(OutcomeDistribution, half_strength_formula) {
    const auto amps = canonical_amplitudes(make_params(3, kPi / 8, 0.25));
    const auto d = outcome_distribution(amps, 5, 0.5);
    for (Message i = 0; i < 8; ++i) {
        EXPECT_NEAR(d[i], 1.0 / 16 + amps.weight(5, i) / 2, 1e-15);
    }
}

TEST(OutcomeDistribution, eigenstate_seal) {
    const auto d = outcome_distribution(AmplitudeMatrix::identity(8), 6, 0.5);
    for (Message i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(d[i], i == 6 ? 1.0 / 16 + 0.5 : 1.0 / 16);
    }
}

TEST(OutcomeDistribution, floor_and_normalization_hold_for_random_rows) {
    Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        const std::size_t dim = std::size_t{2} << (rng() % 7);
        const auto amps = AmplitudeMatrix::random_dense(dim, rng);
        const double nu = uniform01(rng);
        const auto d = outcome_distribution(amps, rng() % dim, nu);
        double total = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            ASSERT_GE(d[i], (1 - nu) / dim - 1e-12);
            total += d[i];
        }
        ASSERT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(OutcomeDistribution, errors) {
    const auto amps = AmplitudeMatrix::identity(4);
    EXPECT_THROW(outcome_distribution(amps, 4, 0.5), std::out_of_range);
    EXPECT_THROW(outcome_distribution(amps, 0, 1.5), std::invalid_argument);
}

TEST(ApplyKraus, scalar_measurement_leaves_state) {
    Rng rng(4);
    const auto amps = AmplitudeMatrix::random_dense(8, rng);
    const auto state = sealed_state(amps, 3);
    const auto r = apply_kraus(state, DiagonalKraus(6, chau_coefficients(0.0, 8)));
    EXPECT_NEAR(r.probability, 1.0 / 8, 1e-15);
    for (std::size_t j = 0; j < 8; ++j) {
        EXPECT_NEAR(r.post_state[j], state[j], 1e-15);
    }
}

TEST(ApplyKraus, projective_eigenstate) {
    const auto state = StateVector::basis(4, 1);
    const auto r = apply_kraus(state, DiagonalKraus(1, chau_coefficients(1.0, 4)));
    EXPECT_EQ(r.probability, 1.0);
    EXPECT_EQ(r.post_state, state);
    EXPECT_THROW(apply_kraus(state, DiagonalKraus(2, chau_coefficients(1.0, 4))), DegenerateBranchError);
}

TEST(ApplyKraus, single_bit_half_strength) {
    const auto amps = canonical_amplitudes(make_params(1, kPi / 8, 0.25));
    const auto state = sealed_state(amps, 0);
    const auto c = chau_coefficients(0.5, 2);
    const auto r = apply_kraus(state, DiagonalKraus(0, c));
    EXPECT_NEAR(r.probability, 0.6767766952966368811, 1e-15);
    EXPECT_NEAR(r.probability, materialized_branch_probability(state, 0, c), 1e-15);
    EXPECT_TRUE(r.post_state.is_normalized(1e-14));
}

TEST(ApplyKraus, rejects_mismatch_and_unnormalized_input) {
    const auto c = chau_coefficients(0.5, 4);
    EXPECT_THROW(apply_kraus(StateVector::basis(8, 0), DiagonalKraus(0, c)), std::invalid_argument);
    EXPECT_THROW(apply_kraus(StateVector({1.0, 1.0, 0.0, 0.0}), DiagonalKraus(0, c)), std::invalid_argument);
}

TEST(ApplyKraus, matches_closed_form_for_random_rows) {
    Rng rng(31);
    for (int t = 0; t < 40; ++t) {
        const std::size_t dim = std::size_t{2} << (rng() % 8);
        const auto amps = AmplitudeMatrix::random_dense(dim, rng);
        const Message ip = rng() % dim;
        const auto state = sealed_state(amps, ip);
        for (int k = 0; k <= 10; ++k) {
            const double nu = k / 10.0;
            const auto c = chau_coefficients(nu, dim);
            double branch_total = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double closed = (1 - nu) / dim + nu * amps.weight(ip, i);
                const double p = apply_kraus(state, DiagonalKraus(i, c)).probability;
                ASSERT_NEAR(p, closed, 1e-12);
                branch_total += p;
            }
            ASSERT_NEAR(branch_total, 1.0, 1e-10);
        }
    }
}

TEST(IdentifyProbability, limits) {
    const auto p = make_params(5, kPi / 8, 0.25);
    const auto amps = canonical_amplitudes(p);
    EXPECT_NEAR(identify_probability(amps, 9, 1.0), p_max(p).exact, 1e-12);
    EXPECT_DOUBLE_EQ(identify_probability(amps, 9, 0.0), 1.0 / 32);
}

TEST(IdentifyProbability, two_routes_at_eight_bits) {
    const auto p = make_params(8, kPi / 8, 0.25);
    const auto amps = canonical_amplitudes(p);
    const double closed = 0.5 / 256 + 0.5 * std::pow(1 - p.epsilon(), 8);
    const double via_distribution = outcome_distribution(amps, 0x5a, 0.5)[0x5a];
    EXPECT_NEAR(identify_probability(amps, 0x5a, 0.5), closed, 1e-12);
    EXPECT_NEAR(via_distribution, closed, 1e-12);
    EXPECT_NEAR(closed, 0.32390655286284018581, 1e-12);
}

TEST(IdentifyProbability, works_beyond_dense_limit) {
    const auto p = make_params(40, kPi / 8, 0.25);
    const auto amps = canonical_amplitudes(p);
    EXPECT_NEAR(identify_probability(amps, 12345, 1.0), p_max(p).exact, 1e-12);
}

TEST(EscapeProbability, limits) {
    Rng rng(8);
    const auto amps = AmplitudeMatrix::random_dense(16, rng);
    EXPECT_NEAR(escape_probability(amps, 3, 0.0), 1.0, 1e-12);
    EXPECT_NEAR(escape_probability(AmplitudeMatrix::identity(16), 3, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(escape_probability(AmplitudeMatrix::uniform(16), 3, 1.0), 1.0 / 16, 1e-12);
    EXPECT_NEAR(escape_by_collapse(AmplitudeMatrix::uniform(16), 3, 1.0), 1.0 / 16, 1e-12);
    EXPECT_THROW(escape_probability(amps, 16, 0.5), std::out_of_range);
}

TEST(EscapeProbability, canonical_reference_values) {
    const double expected[] = {0.93488822124905430556, 0.86270534514695217179, 0.79668317916395699139};
    const unsigned ns[] = {2, 4, 6};
    for (int k = 0; k < 3; ++k) {
        const auto amps = canonical_amplitudes(make_params(ns[k], kPi / 8, 0.25));
        EXPECT_NEAR(escape_probability(amps, 0, 0.5), expected[k], 1e-12);
    }
}

TEST(EscapeProbability, product_form_sum_agrees_with_collapse) {
    for (unsigned n = 1; n <= 10; ++n) {
        const auto amps = canonical_amplitudes(make_params(n, 0.7, 0.3));
        const auto dense = amps.materialize();
        for (double nu : {0.0, 0.25, 0.5, 0.9, 1.0}) {
            const Message ip = (Message{1} << n) - 1;
            const double fast = escape_probability(amps, ip, nu);
            EXPECT_NEAR(fast, escape_probability(dense, ip, nu), 1e-12);
            EXPECT_NEAR(fast, escape_by_collapse(amps, ip, nu), 1e-12);
        }
    }
}

TEST(EscapeProbability, at_least_half_at_half_strength) {
    for (unsigned n = 2; n <= 10; ++n) {
        const auto amps = canonical_amplitudes(make_params(n, kPi / 8, 0.25));
        EXPECT_GE(escape_probability(amps, 0, 0.5), 0.5 - 1e-10);
    }
}

TEST(CoinToss, idle_branch_keeps_state) {
    Rng rng(12);
    const auto amps = canonical_amplitudes(make_params(4, kPi / 8, 0.25));
    const auto sealed = sealed_state(amps, 7);
    int idle = 0;
    for (int t = 0; t < 200; ++t) {
        const auto o = coin_toss_attack(amps, 7, rng);
        if (!o.acted) {
            ++idle;
            EXPECT_FALSE(o.decoded.has_value());
            EXPECT_EQ(o.post_state, sealed);
            EXPECT_EQ(o.branch_probability, 0.5);
            EXPECT_EQ(verification_pass_probability(sealed, o), 1.0);
        } else {
            ASSERT_TRUE(o.decoded.has_value());
            EXPECT_NEAR(std::abs(o.post_state[*o.decoded]), 1.0, 1e-15);
        }
    }
    EXPECT_GT(idle, 0);
    EXPECT_LT(idle, 200);
}

TEST(CoinToss, eigenstate_reads_correctly) {
    Rng rng(13);
    const auto amps = AmplitudeMatrix::identity(8);
    for (int t = 0; t < 200; ++t) {
        const auto o = coin_toss_attack(amps, 5, rng);
        if (o.acted) {
            ASSERT_EQ(*o.decoded, 5u);
            ASSERT_EQ(o.branch_probability, 0.5);
        }
    }
}

TEST(CoinToss, acted_frequency_is_half) {
    Rng rng(14);
    const auto amps = canonical_amplitudes(make_params(3, kPi / 8, 0.25));
    const int trials = 100000;
    int acted = 0;
    for (int t = 0; t < trials; ++t) {
        acted += coin_toss_attack(amps, 2, rng).acted ? 1 : 0;
    }
    EXPECT_LT(std::abs(acted / double(trials) - 0.5), 3 * std::sqrt(0.25 / trials));
}

TEST(CoinTossEscape, examples) {
    EXPECT_DOUBLE_EQ(coin_toss_escape(AmplitudeMatrix::identity(8), 2), 1.0);
    EXPECT_NEAR(coin_toss_escape(AmplitudeMatrix::uniform(8), 2), 0.5 + 1.0 / 16, 1e-12);
    Rng rng(15);
    for (int t = 0; t < 30; ++t) {
        const auto amps = AmplitudeMatrix::random_dense(std::size_t{2} << (rng() % 6), rng);
        ASSERT_GE(coin_toss_escape(amps, 0), 0.5);
    }
}

TEST(MeasurementAttack, sampled_outcome_is_consistent) {
    Rng rng(16);
    const auto amps = canonical_amplitudes(make_params(3, kPi / 8, 0.25));
    const auto sealed = sealed_state(amps, 1);
    for (int t = 0; t < 100; ++t) {
        const auto o = measurement_attack(amps, 1, 0.5, rng);
        ASSERT_TRUE(o.acted);
        ASSERT_TRUE(o.decoded.has_value());
        ASSERT_NEAR(o.branch_probability, outcome_distribution(amps, 1, 0.5)[*o.decoded], 1e-12);
        ASSERT_TRUE(o.post_state.is_normalized());
        const double pass = verification_pass_probability(sealed, o);
        ASSERT_GE(pass, 0.0);
        ASSERT_LE(pass, 1.0);
    }
}
