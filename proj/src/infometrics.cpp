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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qseal/attack.hpp"

namespace qseal {

namespace {

// Entropy terms below this are exact zeros.
constexpr double kEntropyZero = 1e-15;
constexpr double kFloorSlack = 1e-12;

void check_nu(double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) {
        throw std::invalid_argument("nu must lie in [0, 1]");
    }
}

void check_prior(const ChannelMatrix &channel, const Distribution &prior) {
    if (prior.size() != channel.dim()) {
        throw std::invalid_argument("prior has " + std::to_string(prior.size()) + " entries, channel has N = " +
                                    std::to_string(channel.dim()));
    }
}

}  // namespace

ChannelMatrix::ChannelMatrix(std::size_t dim, std::vector<double> row_major, double nu)
    : dim_(dim), nu_(nu), entries_(std::move(row_major)) {
    check_nu(nu);
    if (dim == 0 || entries_.size() != dim * dim) {
        throw std::invalid_argument("channel matrix: expected N*N entries with N >= 1");
    }
    const double floor = (1.0 - nu) / static_cast<double>(dim) - kFloorSlack;
    for (std::size_t r = 0; r < dim; ++r) {
        double total = 0.0;
        for (double p : row(r)) {
            if (!(p >= floor) || !std::isfinite(p)) {
                throw std::invalid_argument("channel matrix: row " + std::to_string(r) +
                                            " has an entry below the (1 - nu)/N floor");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > kNormalizationTolerance) {
            throw std::invalid_argument("channel matrix: row " + std::to_string(r) + " sums to " +
                                        std::to_string(total));
        }
    }
}

ChannelMatrix ChannelMatrix::uniform(std::size_t dim) {
    return ChannelMatrix(dim, std::vector<double>(dim * dim, 1.0 / static_cast<double>(dim)), 0.0);
}

ChannelMatrix channel_matrix(const AmplitudeMatrix &amps, double nu) {
    check_nu(nu);
    const unsigned limit = channel_limit_bits();
    if (amps.bits() > limit) {
        throw std::length_error("channel matrix for n = " + std::to_string(amps.bits()) +
                                " exceeds the channel limit n <= " + std::to_string(limit));
    }
    const std::size_t dim = amps.dimension();
    std::vector<double> entries;
    entries.reserve(dim * dim);
    for (Message r = 0; r < dim; ++r) {
        const auto row = outcome_distribution(amps, r, nu);
        entries.insert(entries.end(), row.probabilities().begin(), row.probabilities().end());
    }
    return ChannelMatrix(dim, std::move(entries), nu);
}

double entropy_bits(std::span<const double> probabilities) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p >= kEntropyZero) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

double binary_entropy(double p) {
    const double q[2] = {p, 1.0 - p};
    return entropy_bits(q);
}

double mutual_information(const ChannelMatrix &channel, const Distribution &prior) {
    check_prior(channel, prior);
    const std::size_t dim = channel.dim();
    std::vector<double> output(dim, 0.0);
    double conditional = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        if (prior[r] == 0.0) {
            continue;
        }
        const auto row = channel.row(r);
        for (std::size_t c = 0; c < dim; ++c) {
            output[c] += prior[r] * row[c];
        }
        conditional += prior[r] * entropy_bits(row);
    }
    return std::clamp(entropy_bits(output) - conditional, 0.0, std::log2(static_cast<double>(dim)));
}

double canonical_mutual_information(const SealParameters &params, double nu) {
    check_nu(nu);
    const auto amps = canonical_amplitudes(params);
    const unsigned n = params.n();
    const double floor = (1.0 - nu) / static_cast<double>(amps.dimension());
    // Columns of this channel also sum to 1, so a uniform prior gives a
    // uniform output and I = n - H(row).
    double row_entropy = 0.0;
    double binom = 1.0;
    for (unsigned d = 0; d <= n; ++d) {
        const double p = floor + nu * amps.class_weight(d);
        if (p > 0.0) {
            row_entropy -= binom * p * std::log2(p);
        }
        binom = binom * (n - d) / (d + 1);
    }
    return std::clamp(static_cast<double>(n) - row_entropy, 0.0, static_cast<double>(n));
}

NoiseFloorDecomposition noise_floor_decomposition(const ChannelMatrix &channel) {
    const std::size_t dim = channel.dim();
    const double w = 1.0 - channel.nu();
    if (w >= 1.0) {
        return {1.0, ChannelMatrix(dim, std::vector<double>(dim * dim, 1.0 / static_cast<double>(dim)), 1.0)};
    }
    const double floor = w / static_cast<double>(dim);
    std::vector<double> residual(channel.entries().begin(), channel.entries().end());
    for (double &p : residual) {
        p = std::max(0.0, (p - floor) / (1.0 - w));
    }
    return {w, ChannelMatrix(dim, std::move(residual), 1.0)};
}

double max_uniform_weight(const ChannelMatrix &channel) {
    const auto entries = channel.entries();
    const double smallest = *std::min_element(entries.begin(), entries.end());
    return std::clamp(smallest * static_cast<double>(channel.dim()), 0.0, 1.0);
}

double guessing_probability(const ChannelMatrix &channel, const Distribution &prior) {
    check_prior(channel, prior);
    const std::size_t dim = channel.dim();
    double total = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
        double best = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            best = std::max(best, prior[r] * channel(r, c));
        }
        total += best;
    }
    return total;
}

double per_bit_error_rate(const AmplitudeMatrix &amps, Message i_prime, double nu) {
    check_nu(nu);
    if (i_prime >= amps.dimension()) {
        throw std::out_of_range("message index out of range");
    }
    if (amps.is_product_form()) {
        return 0.5 * (1.0 - nu) + nu * amps.params()->epsilon();
    }
    const auto dist = outcome_distribution(amps, i_prime, nu);
    double expected = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        expected += dist[i] * hamming(i, i_prime);
    }
    return expected / static_cast<double>(amps.bits());
}

}  // namespace qseal
