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

#include "qseal/random.hpp"

namespace qseal {

inline constexpr double kNormalizationTolerance = 1e-10;

/// A probability vector over message indices [0, N).
///
/// Entries are non-negative and sum to 1 within kNormalizationTolerance;
/// the constructor rejects anything else.
class Distribution {
  public:
    explicit Distribution(std::vector<double> probabilities);

    static Distribution uniform(std::size_t dim);
    static Distribution point_mass(std::size_t dim, std::size_t index);

    std::size_t size() const { return probabilities_.size(); }
    double operator[](std::size_t i) const { return probabilities_[i]; }
    double at(std::size_t i) const;
    std::span<const double> probabilities() const { return probabilities_; }

    double min() const;
    /// Most likely index; ties go to the lowest index.
    std::size_t argmax() const;

  private:
    std::vector<double> probabilities_;
};

/// Inverse-CDF index draw: the first index whose running sum exceeds a
/// uniform draw in [0, 1).
std::size_t sample_outcome(const Distribution &dist, Rng &rng);

/// Inverse-CDF sampler that keeps the prefix sums for repeated draws. Draws
/// the same index as sample_outcome for the same generator state.
class OutcomeSampler {
  public:
    explicit OutcomeSampler(const Distribution &dist);
    std::size_t operator()(Rng &rng) const;
    std::size_t size() const { return cumulative_.size(); }

  private:
    std::vector<double> cumulative_;
    std::size_t last_positive_ = 0;
};

}  // namespace qseal
