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
#include <optional>
#include <stdexcept>
#include <string>

#include "qseal/distribution.hpp"
#include "qseal/random.hpp"
#include "qseal/seal_model.hpp"

namespace qseal {

/// Branches whose probability falls below this are not normalized.
inline constexpr double kDegenerateBranchProbability = 1e-300;

class DegenerateBranchError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Coefficients of the diagonal Kraus family
///     M_i = (c_base + c_boost) |i><i| + c_base * sum_{j != i} |j><j|
/// with c_base^2 = (1 - nu) / N and (c_base + c_boost)^2 = nu + (1 - nu) / N.
struct MeasurementCoefficients {
    double nu;
    std::size_t dim;
    double c_base;
    double c_boost;
};

MeasurementCoefficients chau_coefficients(double nu, std::size_t dim);

/// |(c_base + c_boost)^2 + (N - 1) c_base^2 - 1|.
double completeness_defect(const MeasurementCoefficients &coeffs);

class DiagonalKraus {
  public:
    DiagonalKraus(std::size_t target, MeasurementCoefficients coeffs);

    std::size_t target() const { return target_; }
    const MeasurementCoefficients &coefficients() const { return coeffs_; }
    double diagonal(std::size_t j) const {
        return j == target_ ? coeffs_.c_base + coeffs_.c_boost : coeffs_.c_base;
    }

  private:
    std::size_t target_;
    MeasurementCoefficients coeffs_;
};

struct KrausResult {
    StateVector post_state;
    double probability;
};

/// M_i |state>, normalized, with its square norm as the branch probability.
/// Throws std::invalid_argument on dimension mismatch and
/// DegenerateBranchError when the probability is below 1e-300.
KrausResult apply_kraus(const StateVector &state, const DiagonalKraus &kraus);

/// p(i) = (1 - nu)/N + nu * lambda(i', i)^2.
Distribution outcome_distribution(const AmplitudeMatrix &amps, Message i_prime, double nu);

/// Probability that the attack decodes i' itself. Evaluated entry-wise, so it
/// works for product-form matrices of any size.
double identify_probability(const AmplitudeMatrix &amps, Message i_prime, double nu);

/// Pass probability of a projective test onto the sealed state after the
/// nu-attack, averaged over outcomes: sum_i (c_base + c_boost lambda(i', i)^2)^2.
double escape_probability(const AmplitudeMatrix &amps, Message i_prime, double nu);

struct AttackOutcome {
    std::optional<Message> decoded;
    StateVector post_state;
    double branch_probability;
    bool acted;
};

/// Samples one outcome of the nu-attack: the decoded index is drawn from
/// outcome_distribution and the post-state comes from apply_kraus.
AttackOutcome measurement_attack(const AmplitudeMatrix &amps, Message i_prime, double nu, Rng &rng);

/// Fair coin: heads reads honestly and collapses the state, tails leaves it.
AttackOutcome coin_toss_attack(const AmplitudeMatrix &amps, Message i_prime, Rng &rng);

/// 1/2 + escape_probability(nu = 1) / 2.
double coin_toss_escape(const AmplitudeMatrix &amps, Message i_prime);

/// Probability that the projective test onto `sealed` accepts `outcome`.
/// Untouched states pass with certainty.
double verification_pass_probability(const StateVector &sealed, const AttackOutcome &outcome);

/// One Bernoulli draw of the projective test.
bool projective_verification(const StateVector &sealed, const AttackOutcome &outcome, Rng &rng);

}  // namespace qseal
