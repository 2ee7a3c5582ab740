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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qseal/distribution.hpp"
#include "qseal/random.hpp"

namespace qseal {

/// Messages are n-bit strings stored as unsigned integers; bit k of the
/// integer is bit k of the string.
using Message = std::uint64_t;

// Largest n for which materialized state vectors are offered.
inline constexpr unsigned kDefaultDenseLimitBits = 20;
// Largest n for which N x N channel matrices are built.
inline constexpr unsigned kDefaultChannelLimitBits = 12;
// Product-form amplitudes index messages with 64-bit integers.
inline constexpr unsigned kMaxProductFormBits = 63;

/// Channel limit in bits: QSEAL_DENSE_LIMIT when set to an integer in
/// [1, kMaxProductFormBits], kDefaultChannelLimitBits otherwise.
unsigned channel_limit_bits();

enum class StorageMode { analytic, dense };

/// Constants of a string seal: length n, angle Theta and exponent alpha, with
/// the per-bit angle theta = Theta / n^alpha and error rate
/// epsilon = sin^2(theta).
class SealParameters {
  public:
    unsigned n() const { return n_; }
    double Theta() const { return Theta_; }
    double alpha() const { return alpha_; }
    double theta() const { return theta_; }
    double epsilon() const { return epsilon_; }
    /// N = 2^n. Throws std::overflow_error for n > 63.
    std::uint64_t dimension() const;

  private:
    friend SealParameters make_params(unsigned, double, double, StorageMode);
    SealParameters(unsigned n, double Theta, double alpha);

    unsigned n_;
    double Theta_;
    double alpha_;
    double theta_;
    double epsilon_;
};

/// Validates 0 < Theta < pi/4, 0 < alpha < 1/2, n >= 1, and n within the
/// dense limit when `mode` is dense. Throws std::invalid_argument.
SealParameters make_params(unsigned n, double Theta, double alpha, StorageMode mode = StorageMode::analytic);

/// A normalized-or-not real state vector with its cached square norm.
class StateVector {
  public:
    explicit StateVector(std::vector<double> amplitudes);

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amplitudes_.size(); }
    double operator[](std::size_t i) const { return amplitudes_[i]; }
    std::span<const double> amplitudes() const { return amplitudes_; }
    double norm_sq() const { return norm_sq_; }
    bool is_normalized(double tolerance = kNormalizationTolerance) const;
    StateVector normalized() const;

    /// Real inner product.
    double overlap(const StateVector &other) const;

    bool operator==(const StateVector &other) const { return amplitudes_ == other.amplitudes_; }

  private:
    std::vector<double> amplitudes_;
    double norm_sq_;
};

/// Real amplitudes lambda(i', j) of the sealed states in the readout basis,
/// one row per sealed message i'.
///
/// Dense matrices store all N^2 entries. Product-form matrices store only
/// (cos theta, sin theta, n) and evaluate
///     lambda(i', j) = cos(theta)^(n - d) * sin(theta)^d,  d = hamming(i', j)
/// in the log domain on demand, so they work far beyond the dense limit.
class AmplitudeMatrix {
  public:
    enum class Representation { dense, product_form };

    /// Rows must have unit square norm within kNormalizationTolerance and `dim`
    /// must be a power of two >= 2.
    static AmplitudeMatrix dense(std::size_t dim, std::vector<double> row_major);
    static AmplitudeMatrix product_form(const SealParameters &params);
    /// Kronecker delta: every sealed state is a readout eigenstate.
    static AmplitudeMatrix identity(std::size_t dim);
    /// Every amplitude is 1/sqrt(N).
    static AmplitudeMatrix uniform(std::size_t dim);
    /// Rows of independent Gaussian entries, normalized.
    static AmplitudeMatrix random_dense(std::size_t dim, Rng &rng);

    Representation representation() const { return representation_; }
    bool is_product_form() const { return representation_ == Representation::product_form; }
    std::uint64_t dimension() const { return dim_; }
    unsigned bits() const { return bits_; }
    /// Parameters a product-form matrix was built from.
    const std::optional<SealParameters> &params() const { return params_; }

    double entry(Message row, Message col) const;
    /// entry(row, col)^2, evaluated directly in the log domain for product form.
    double weight(Message row, Message col) const;
    /// Squared amplitude of one distance class of a product-form matrix:
    /// cos^2(theta)^(n - d) * sin^2(theta)^d.
    double class_weight(unsigned distance) const;

    /// Materializes one row. Throws std::length_error above the dense limit.
    std::vector<double> row(Message i_prime) const;
    /// Dense copy; limited to the channel limit.
    AmplitudeMatrix materialize() const;

  private:
    AmplitudeMatrix() = default;
    void check_row_index(Message row) const;

    Representation representation_ = Representation::dense;
    std::uint64_t dim_ = 0;
    unsigned bits_ = 0;
    std::vector<double> dense_;
    std::optional<SealParameters> params_;
    double log_cos_ = 0.0;
    double log_sin_ = 0.0;
};

AmplitudeMatrix canonical_amplitudes(const SealParameters &params);

StateVector sealed_state(const AmplitudeMatrix &amps, Message i_prime);

/// A fixed-length bit string; character k of the text form is bit k.
struct BitString {
    Message bits = 0;
    unsigned length = 0;

    static BitString from_text(std::string_view text);
    std::string to_text() const;
    BitString complement() const;
};

unsigned hamming(Message x, Message y);
/// Throws std::invalid_argument on length mismatch.
unsigned hamming(const BitString &x, const BitString &y);

/// distance <= epsilon * n, inclusive.
bool within_readability(unsigned distance, double epsilon, unsigned n);
/// Throws std::invalid_argument when a string length differs from params.n().
bool readability_check(const BitString &b, const BitString &b_prime, const SealParameters &params);

struct PMax {
    double exact;       // (1 - epsilon)^n
    double asymptotic;  // (1 - Theta^2 / n^(2 alpha))^n
};

PMax p_max(const SealParameters &params);

/// Born-rule distribution lambda(i', j)^2 of the honest readout.
Distribution honest_readout_distribution(const AmplitudeMatrix &amps, Message i_prime);

}  // namespace qseal
