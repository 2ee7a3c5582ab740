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

#include "qseal/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qseal {

Distribution::Distribution(std::vector<double> probabilities) : probabilities_(std::move(probabilities)) {
    if (probabilities_.empty()) {
        throw std::invalid_argument("distribution must have at least one entry");
    }
    double total = 0.0;
    for (double p : probabilities_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("distribution entries must be finite and non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw std::invalid_argument("distribution sums to " + std::to_string(total) + ", not 1");
    }
}

Distribution Distribution::uniform(std::size_t dim) {
    if (dim == 0) {
        throw std::invalid_argument("uniform distribution needs dim >= 1");
    }
    return Distribution(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

Distribution Distribution::point_mass(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::out_of_range("point mass index out of range");
    }
    std::vector<double> p(dim, 0.0);
    p[index] = 1.0;
    return Distribution(std::move(p));
}

double Distribution::at(std::size_t i) const {
    if (i >= probabilities_.size()) {
        throw std::out_of_range("distribution index out of range");
    }
    return probabilities_[i];
}

double Distribution::min() const {
    return *std::min_element(probabilities_.begin(), probabilities_.end());
}

std::size_t Distribution::argmax() const {
    // max_element returns the first maximum.
    return static_cast<std::size_t>(
        std::distance(probabilities_.begin(), std::max_element(probabilities_.begin(), probabilities_.end())));
}

OutcomeSampler::OutcomeSampler(const Distribution &dist) : cumulative_(dist.size()) {
    double running = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        running += dist[i];
        cumulative_[i] = running;
        if (dist[i] > 0.0) {
            last_positive_ = i;
        }
    }
}

std::size_t OutcomeSampler::operator()(Rng &rng) const {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) {
        // Rounding left the total a hair below u.
        return last_positive_;
    }
    return static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
}

std::size_t sample_outcome(const Distribution &dist, Rng &rng) { return OutcomeSampler(dist)(rng); }

}  // namespace qseal
