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

#include "qseal/infometrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gtest/gtest.h"

#include "qseal/attack.hpp"

using namespace qseal;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid() {
    std::vector<double> g;
    for (int k = 0; k <= 10; ++k) {
        g.push_back(k / 10.0);
    }
    return g;
}

// Best success over every deterministic guess map output -> input.
double brute_force_guessing(const ChannelMatrix &ch, const Distribution &prior) {
    const std::size_t dim = ch.dim();
    std::size_t maps = 1;
    for (std::size_t k = 0; k < dim; ++k) {
        maps *= dim;
    }
    double best = 0.0;
    for (std::size_t code = 0; code < maps; ++code) {
        std::size_t rest = code;
        double success = 0.0;
        for (std::size_t out = 0; out < dim; ++out) {
            const std::size_t guess = rest % dim;
            rest /= dim;
            success += prior[guess] * ch(guess, out);
        }
        best = std::max(best, success);
    }
    return best;
}

}  // namespace

TEST(ChannelMatrix, limits) {
    Rng rng(1);
    const auto amps = AmplitudeMatrix::random_dense(8, rng);
    const auto blind = channel_matrix(amps, 0.0);
    for (double p : blind.entries()) {
        EXPECT_DOUBLE_EQ(p, 1.0 / 8);
    }
    const auto id = channel_matrix(AmplitudeMatrix::identity(8), 1.0);
    const auto half = channel_matrix(AmplitudeMatrix::identity(8), 0.5);
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            EXPECT_EQ(id(r, c), r == c ? 1.0 : 0.0);
            EXPECT_DOUBLE_EQ(half(r, c), r == c ? 1.0 / 16 + 0.5 : 1.0 / 16);
        }
    }
    EXPECT_EQ(id.nu(), 1.0);
}

TEST(ChannelMatrix, enforces_limit_and_invariants) {
    EXPECT_THROW(channel_matrix(canonical_amplitudes(make_params(13, 0.3, 0.25)), 0.5), std::length_error);
    EXPECT_THROW(ChannelMatrix(2, {0.5, 0.5, 0.9, 0.1}, 0.5), std::invalid_argument);  // 0.1 < 0.25 floor
    EXPECT_THROW(ChannelMatrix(2, {0.5, 0.6, 0.5, 0.5}, 1.0), std::invalid_argument);
    EXPECT_NO_THROW(ChannelMatrix(2, {0.5, 0.5, 0.75, 0.25}, 0.5));
}

TEST(MutualInformation, extremes) {
    const auto prior = Distribution::uniform(16);
    EXPECT_NEAR(mutual_information(ChannelMatrix::uniform(16), prior), 0.0, 1e-15);
    EXPECT_NEAR(mutual_information(channel_matrix(AmplitudeMatrix::identity(16), 1.0), prior), 4.0, 1e-12);
    EXPECT_THROW(mutual_information(ChannelMatrix::uniform(16), Distribution::uniform(8)), std::invalid_argument);
}

TEST(MutualInformation, reference_values) {
    const auto four = canonical_amplitudes(make_params(4, kPi / 8, 0.25));
    const auto six = canonical_amplitudes(make_params(6, kPi / 8, 0.25));
    EXPECT_NEAR(mutual_information(channel_matrix(four, 1.0), Distribution::uniform(16)), 2.4606560560465504885,
                1e-12);
    EXPECT_NEAR(mutual_information(channel_matrix(four, 0.5), Distribution::uniform(16)), 0.71426810075815863618,
                1e-12);
    EXPECT_NEAR(mutual_information(channel_matrix(six, 0.3), Distribution::uniform(64)), 0.60447498592524774156,
                1e-12);
}

TEST(MutualInformation, honest_canonical_factorizes_into_binary_symmetric_channels) {
    for (unsigned n = 2; n <= 10; ++n) {
        const auto p = make_params(n, kPi / 8, 0.25);
        const double exact =
            mutual_information(channel_matrix(canonical_amplitudes(p), 1.0), Distribution::uniform(1u << n));
        const double h = -p.epsilon() * std::log2(p.epsilon()) - (1 - p.epsilon()) * std::log2(1 - p.epsilon());
        EXPECT_NEAR(exact, n * (1 - h), 1e-9) << "n=" << n;
    }
}

TEST(MutualInformation, class_sum_matches_matrix_route) {
    for (unsigned n = 1; n <= 10; ++n) {
        const auto p = make_params(n, 0.5, 0.2);
        const auto amps = canonical_amplitudes(p);
        for (double nu : grid()) {
            const double matrix = mutual_information(channel_matrix(amps, nu), Distribution::uniform(1u << n));
            EXPECT_NEAR(canonical_mutual_information(p, nu), matrix, 1e-9) << "n=" << n << " nu=" << nu;
        }
    }
    // Beyond the channel limit only the class sum exists; honest limit still factorizes.
    const auto big = make_params(48, kPi / 8, 0.25);
    EXPECT_NEAR(canonical_mutual_information(big, 1.0), 48 * (1 - binary_entropy(big.epsilon())), 1e-9);
}

TEST(MutualInformation, bounded_by_honest_fraction_and_monotone) {
    Rng rng(2);
    std::vector<AmplitudeMatrix> schemes;
    for (int t = 0; t < 10; ++t) {
        schemes.push_back(AmplitudeMatrix::random_dense(std::size_t{2} << (rng() % 6), rng));
    }
    for (unsigned n = 1; n <= 6; ++n) {
        schemes.push_back(canonical_amplitudes(make_params(n, kPi / 8, 0.25)));
    }
    for (const auto &amps : schemes) {
        const auto prior = Distribution::uniform(amps.dimension());
        const double honest = mutual_information(channel_matrix(amps, 1.0), prior);
        double previous = -1.0;
        for (double nu : grid()) {
            const double info = mutual_information(channel_matrix(amps, nu), prior);
            EXPECT_LE(info, nu * honest + 1e-9);
            EXPECT_GE(info, previous - 1e-12);
            previous = info;
        }
    }
}

TEST(NoiseFloorDecomposition, weights) {
    const auto amps = canonical_amplitudes(make_params(4, kPi / 8, 0.25));
    EXPECT_NEAR(noise_floor_decomposition(channel_matrix(amps, 0.5)).uniform_weight, 0.5, 1e-10);
    EXPECT_EQ(noise_floor_decomposition(channel_matrix(AmplitudeMatrix::identity(4), 1.0)).uniform_weight, 0.0);
    EXPECT_EQ(max_uniform_weight(channel_matrix(AmplitudeMatrix::identity(4), 1.0)), 0.0);
    EXPECT_EQ(noise_floor_decomposition(channel_matrix(amps, 0.0)).uniform_weight, 1.0);
}

TEST(NoiseFloorDecomposition, residual_is_honest_channel_and_recomposes) {
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        const auto amps = AmplitudeMatrix::random_dense(std::size_t{2} << (rng() % 5), rng);
        const auto honest = channel_matrix(amps, 1.0);
        for (double nu : grid()) {
            const auto ch = channel_matrix(amps, nu);
            const auto split = noise_floor_decomposition(ch);
            EXPECT_NEAR(split.uniform_weight, 1 - nu, 1e-15);
            EXPECT_LE(split.uniform_weight, max_uniform_weight(ch) + 1e-12);
            const double u = 1.0 / ch.dim();
            for (std::size_t k = 0; k < ch.entries().size(); ++k) {
                const double recomposed =
                    split.uniform_weight * u + (1 - split.uniform_weight) * split.residual.entries()[k];
                ASSERT_NEAR(recomposed, ch.entries()[k], 1e-10);
                if (nu > 0) {
                    ASSERT_NEAR(split.residual.entries()[k], honest.entries()[k], 1e-10);
                }
            }
        }
    }
}

TEST(NoiseFloorDecomposition, max_weight_includes_seal_noise) {
    // Canonical rows never vanish, so the largest extractable uniform part is
    // strictly above the measurement's own 1 - nu.
    const auto amps = canonical_amplitudes(make_params(2, kPi / 8, 0.25));
    const auto ch = channel_matrix(amps, 0.5);
    EXPECT_GT(max_uniform_weight(ch), 0.5);
    EXPECT_NEAR(max_uniform_weight(ch), 0.5 + 0.5 * 4 * amps.weight(0, 3), 1e-12);
}

TEST(GuessingProbability, examples) {
    const auto prior = Distribution::uniform(8);
    EXPECT_NEAR(guessing_probability(ChannelMatrix::uniform(8), prior), 1.0 / 8, 1e-15);
    EXPECT_NEAR(guessing_probability(channel_matrix(AmplitudeMatrix::identity(8), 1.0), prior), 1.0, 1e-15);
    for (std::size_t dim : {2, 4, 8, 16}) {
        for (double nu : grid()) {
            const auto ch = channel_matrix(AmplitudeMatrix::identity(dim), nu);
            EXPECT_NEAR(guessing_probability(ch, Distribution::uniform(dim)), (1 - nu) / dim + nu, 1e-12);
        }
    }
    EXPECT_THROW(guessing_probability(ChannelMatrix::uniform(8), Distribution::uniform(4)), std::invalid_argument);
}

TEST(GuessingProbability, agrees_with_exhaustive_guess_maps) {
    Rng rng(4);
    for (std::size_t dim : {2, 4}) {
        for (int t = 0; t < 5; ++t) {
            const auto amps = AmplitudeMatrix::random_dense(dim, rng);
            std::vector<double> w(dim);
            double total = 0.0;
            for (double &x : w) {
                x = 0.1 + uniform01(rng);
                total += x;
            }
            for (double &x : w) {
                x /= total;
            }
            const Distribution prior(w);
            for (double nu : {0.0, 0.3, 1.0}) {
                const auto ch = channel_matrix(amps, nu);
                EXPECT_NEAR(guessing_probability(ch, prior), brute_force_guessing(ch, prior), 1e-12);
            }
        }
    }
}

TEST(GuessingProbability, mixture_bound) {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto amps = AmplitudeMatrix::random_dense(std::size_t{2} << (rng() % 5), rng);
        const auto prior = Distribution::uniform(amps.dimension());
        const double honest = guessing_probability(channel_matrix(amps, 1.0), prior);
        for (double nu : grid()) {
            const double g = guessing_probability(channel_matrix(amps, nu), prior);
            EXPECT_LE(g, (1 - nu) / amps.dimension() + nu * honest + 1e-10);
        }
    }
}

TEST(PerBitErrorRate, canonical_limits_and_mixture) {
    const auto p = make_params(5, kPi / 8, 0.25);
    const auto amps = canonical_amplitudes(p);
    EXPECT_NEAR(per_bit_error_rate(amps, 3, 1.0), p.epsilon(), 1e-15);
    EXPECT_NEAR(per_bit_error_rate(amps, 3, 0.0), 0.5, 1e-15);
    EXPECT_NEAR(per_bit_error_rate(amps, 3, 0.5), 0.25 + p.epsilon() / 2, 1e-15);
    EXPECT_NEAR(per_bit_error_rate(amps, 3, 0.5), 0.28369751506402532482, 1e-12);
    EXPECT_THROW(per_bit_error_rate(amps, 32, 0.5), std::out_of_range);
}

TEST(PerBitErrorRate, closed_form_matches_exact_expectation) {
    for (unsigned n = 1; n <= 10; ++n) {
        const auto amps = canonical_amplitudes(make_params(n, 0.6, 0.35));
        const auto dense = amps.materialize();
        for (double nu : grid()) {
            const Message ip = (Message{0x2b5} & ((Message{1} << n) - 1));
            EXPECT_NEAR(per_bit_error_rate(amps, ip, nu), per_bit_error_rate(dense, ip, nu), 1e-12);
        }
    }
    EXPECT_NEAR(per_bit_error_rate(AmplitudeMatrix::uniform(8), 0, 1.0), 0.5, 1e-12);
}

TEST(Entropy, conventions) {
    const double ps[] = {0.5, 0.5, 0.0, 1e-16};
    EXPECT_DOUBLE_EQ(entropy_bits(ps), 1.0);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
}
