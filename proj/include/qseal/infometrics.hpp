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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qseal/distribution.hpp"
#include "qseal/seal_model.hpp"

namespace qseal {

/// Decode channel p(i | i'), one row per sealed message, together with the
/// attack strength nu it was built with. Every entry is at least
/// (1 - nu)/N - 1e-12.
class ChannelMatrix {
  public:
    ChannelMatrix(std::size_t dim, std::vector<double> row_major, double nu);

    static ChannelMatrix uniform(std::size_t dim);

    std::size_t dim() const { return dim_; }
    double nu() const { return nu_; }
    double operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    std::span<const double> row(std::size_t r) const { return {entries_.data() + r * dim_, dim_}; }
    std::span<const double> entries() const { return entries_; }

  private:
    std::size_t dim_;
    double nu_;
    std::vector<double> entries_;
};

/// Throws std::length_error when N exceeds 2^channel_limit_bits().
ChannelMatrix channel_matrix(const AmplitudeMatrix &amps, double nu);

/// Shannon entropy in bits; entries below 1e-15 count as zero.
double entropy_bits(std::span<const double> probabilities);
double binary_entropy(double p);

/// I(I'; I) in bits for the given prior over sealed messages.
double mutual_information(const ChannelMatrix &channel, const Distribution &prior);

/// Exact uniform-prior mutual information of the canonical scheme's channel,
/// summed over Hamming-distance classes. O(n), so it applies at any n <= 63.
double canonical_mutual_information(const SealParameters &params, double nu);

struct NoiseFloorDecomposition {
    double uniform_weight;
    ChannelMatrix residual;
};

/// channel = w * uniform + (1 - w) * residual with w = 1 - nu, the weight of
/// the measurement's own noise floor. The residual is the honest (nu = 1)
/// channel; for w = 1 it is reported as the uniform channel.
NoiseFloorDecomposition noise_floor_decomposition(const ChannelMatrix &channel);

/// Largest w for which channel - w * uniform stays entrywise non-negative,
/// i.e. N times the smallest entry. Includes noise the seal itself adds.
double max_uniform_weight(const ChannelMatrix &channel);

/// sum_i max_{i'} prior(i') p(i | i').
double guessing_probability(const ChannelMatrix &channel, const Distribution &prior);

/// E[hamming(decoded, i')] / n under the nu-attack. Closed form
/// (1 - nu)/2 + nu * epsilon for product form, exact expectation otherwise.
double per_bit_error_rate(const AmplitudeMatrix &amps, Message i_prime, double nu);

}  // namespace qseal
