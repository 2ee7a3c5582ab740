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

#include "qseal/seal_model.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qseal {

namespace {

bool is_power_of_two(std::uint64_t x) { return x >= 2 && std::has_single_bit(x); }

void check_dense_dim(std::uint64_t dim, unsigned limit_bits, const char *what) {
    if (dim > (std::uint64_t{1} << limit_bits)) {
        throw std::length_error(std::string(what) + ": dimension " + std::to_string(dim) + " exceeds 2^" +
                                std::to_string(limit_bits));
    }
}

}  // namespace

unsigned channel_limit_bits() {
    const char *env = std::getenv("QSEAL_DENSE_LIMIT");
    if (env == nullptr) {
        return kDefaultChannelLimitBits;
    }
    std::string_view text(env);
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1 || value > kMaxProductFormBits) {
        return kDefaultChannelLimitBits;
    }
    return value;
}

SealParameters::SealParameters(unsigned n, double Theta, double alpha)
    : n_(n),
      Theta_(Theta),
      alpha_(alpha),
      theta_(Theta / std::pow(static_cast<double>(n), alpha)),
      epsilon_(std::sin(theta_) * std::sin(theta_)) {}

std::uint64_t SealParameters::dimension() const {
    if (n_ > kMaxProductFormBits) {
        throw std::overflow_error("N = 2^" + std::to_string(n_) + " does not fit a 64-bit message index");
    }
    return std::uint64_t{1} << n_;
}

SealParameters make_params(unsigned n, double Theta, double alpha, StorageMode mode) {
    if (n == 0) {
        throw std::invalid_argument("n must be at least 1");
    }
    if (!(Theta > 0.0 && Theta < std::numbers::pi / 4)) {
        throw std::invalid_argument("Theta must lie in (0, pi/4)");
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("alpha must lie in (0, 1/2)");
    }
    if (mode == StorageMode::dense && n > kDefaultDenseLimitBits) {
        throw std::invalid_argument("n = " + std::to_string(n) + " exceeds the dense-mode limit of " +
                                    std::to_string(kDefaultDenseLimitBits));
    }
    return SealParameters(n, Theta, alpha);
}

StateVector::StateVector(std::vector<double> amplitudes) : amplitudes_(std::move(amplitudes)), norm_sq_(0.0) {
    for (double a : amplitudes_) {
        norm_sq_ += a * a;
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::out_of_range("basis index out of range");
    }
    std::vector<double> v(dim, 0.0);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

bool StateVector::is_normalized(double tolerance) const { return std::abs(norm_sq_ - 1.0) <= tolerance; }

StateVector StateVector::normalized() const {
    if (!(norm_sq_ > 0.0)) {
        throw std::domain_error("cannot normalize a zero vector");
    }
    const double scale = 1.0 / std::sqrt(norm_sq_);
    std::vector<double> v(amplitudes_);
    for (double &a : v) {
        a *= scale;
    }
    return StateVector(std::move(v));
}

double StateVector::overlap(const StateVector &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("overlap: dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        sum += amplitudes_[i] * other.amplitudes_[i];
    }
    return sum;
}

AmplitudeMatrix AmplitudeMatrix::dense(std::size_t dim, std::vector<double> row_major) {
    if (!is_power_of_two(dim)) {
        throw std::invalid_argument("dense amplitude matrix: N must be a power of two >= 2, got " +
                                    std::to_string(dim));
    }
    check_dense_dim(dim, channel_limit_bits(), "dense amplitude matrix");
    if (row_major.size() != dim * dim) {
        throw std::invalid_argument("dense amplitude matrix: expected N*N entries");
    }
    for (std::size_t r = 0; r < dim; ++r) {
        double norm_sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double a = row_major[r * dim + c];
            if (!std::isfinite(a)) {
                throw std::invalid_argument("dense amplitude matrix: non-finite entry in row " + std::to_string(r));
            }
            norm_sq += a * a;
        }
        if (std::abs(norm_sq - 1.0) > kNormalizationTolerance) {
            throw std::invalid_argument("dense amplitude matrix: row " + std::to_string(r) + " has square norm " +
                                        std::to_string(norm_sq));
        }
    }
    AmplitudeMatrix m;
    m.representation_ = Representation::dense;
    m.dim_ = dim;
    m.bits_ = static_cast<unsigned>(std::countr_zero(dim));
    m.dense_ = std::move(row_major);
    return m;
}

AmplitudeMatrix AmplitudeMatrix::product_form(const SealParameters &params) {
    if (params.n() > kMaxProductFormBits) {
        throw std::invalid_argument("product-form amplitudes need n <= 63");
    }
    AmplitudeMatrix m;
    m.representation_ = Representation::product_form;
    m.dim_ = params.dimension();
    m.bits_ = params.n();
    m.params_ = params;
    m.log_cos_ = std::log(std::cos(params.theta()));
    m.log_sin_ = std::log(std::sin(params.theta()));
    return m;
}

AmplitudeMatrix AmplitudeMatrix::identity(std::size_t dim) {
    std::vector<double> v(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i * dim + i] = 1.0;
    }
    return dense(dim, std::move(v));
}

AmplitudeMatrix AmplitudeMatrix::uniform(std::size_t dim) {
    return dense(dim, std::vector<double>(dim * dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

AmplitudeMatrix AmplitudeMatrix::random_dense(std::size_t dim, Rng &rng) {
    std::normal_distribution<double> gauss;
    std::vector<double> v(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        double norm_sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            v[r * dim + c] = gauss(rng);
            norm_sq += v[r * dim + c] * v[r * dim + c];
        }
        const double scale = 1.0 / std::sqrt(norm_sq);
        for (std::size_t c = 0; c < dim; ++c) {
            v[r * dim + c] *= scale;
        }
    }
    return dense(dim, std::move(v));
}

void AmplitudeMatrix::check_row_index(Message row) const {
    if (row >= dim_) {
        throw std::out_of_range("message index " + std::to_string(row) + " out of range for N = " +
                                std::to_string(dim_));
    }
}

double AmplitudeMatrix::entry(Message row, Message col) const {
    check_row_index(row);
    check_row_index(col);
    if (representation_ == Representation::dense) {
        return dense_[row * dim_ + col];
    }
    const unsigned d = hamming(row, col);
    return std::exp((bits_ - d) * log_cos_ + d * log_sin_);
}

double AmplitudeMatrix::weight(Message row, Message col) const {
    if (representation_ == Representation::dense) {
        const double a = entry(row, col);
        return a * a;
    }
    check_row_index(row);
    check_row_index(col);
    return class_weight(hamming(row, col));
}

double AmplitudeMatrix::class_weight(unsigned distance) const {
    if (representation_ != Representation::product_form) {
        throw std::logic_error("class_weight needs a product-form matrix");
    }
    if (distance > bits_) {
        throw std::out_of_range("distance exceeds n");
    }
    return std::exp(2.0 * ((bits_ - distance) * log_cos_ + distance * log_sin_));
}

std::vector<double> AmplitudeMatrix::row(Message i_prime) const {
    check_row_index(i_prime);
    check_dense_dim(dim_, kDefaultDenseLimitBits, "row materialization");
    if (representation_ == Representation::dense) {
        auto first = dense_.begin() + static_cast<std::ptrdiff_t>(i_prime * dim_);
        return {first, first + static_cast<std::ptrdiff_t>(dim_)};
    }
    // One exp per distance class.
    std::vector<double> by_distance(bits_ + 1);
    for (unsigned d = 0; d <= bits_; ++d) {
        by_distance[d] = std::exp((bits_ - d) * log_cos_ + d * log_sin_);
    }
    std::vector<double> out(dim_);
    for (Message j = 0; j < dim_; ++j) {
        out[j] = by_distance[hamming(i_prime, j)];
    }
    return out;
}

AmplitudeMatrix AmplitudeMatrix::materialize() const {
    if (representation_ == Representation::dense) {
        return *this;
    }
    check_dense_dim(dim_, channel_limit_bits(), "materialize");
    std::vector<double> v;
    v.reserve(dim_ * dim_);
    for (Message r = 0; r < dim_; ++r) {
        auto row_values = row(r);
        v.insert(v.end(), row_values.begin(), row_values.end());
    }
    return dense(dim_, std::move(v));
}

AmplitudeMatrix canonical_amplitudes(const SealParameters &params) { return AmplitudeMatrix::product_form(params); }

StateVector sealed_state(const AmplitudeMatrix &amps, Message i_prime) { return StateVector(amps.row(i_prime)); }

BitString BitString::from_text(std::string_view text) {
    if (text.empty() || text.size() > 64) {
        throw std::invalid_argument("bit string length must be in [1, 64]");
    }
    BitString out;
    out.length = static_cast<unsigned>(text.size());
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (text[k] == '1') {
            out.bits |= Message{1} << k;
        } else if (text[k] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return out;
}

std::string BitString::to_text() const {
    std::string s(length, '0');
    for (unsigned k = 0; k < length; ++k) {
        if ((bits >> k) & 1U) {
            s[k] = '1';
        }
    }
    return s;
}

BitString BitString::complement() const {
    const Message mask = length == 64 ? ~Message{0} : (Message{1} << length) - 1;
    return {~bits & mask, length};
}

unsigned hamming(Message x, Message y) { return static_cast<unsigned>(std::popcount(x ^ y)); }

unsigned hamming(const BitString &x, const BitString &y) {
    if (x.length != y.length) {
        throw std::invalid_argument("hamming: length mismatch (" + std::to_string(x.length) + " vs " +
                                    std::to_string(y.length) + ")");
    }
    return hamming(x.bits, y.bits);
}

bool within_readability(unsigned distance, double epsilon, unsigned n) {
    return static_cast<double>(distance) <= epsilon * static_cast<double>(n);
}

bool readability_check(const BitString &b, const BitString &b_prime, const SealParameters &params) {
    if (b.length != params.n() || b_prime.length != params.n()) {
        throw std::invalid_argument("readability_check: strings must have length n = " + std::to_string(params.n()));
    }
    return within_readability(hamming(b, b_prime), params.epsilon(), params.n());
}

PMax p_max(const SealParameters &params) {
    const double n = params.n();
    const double shrink = params.Theta() * params.Theta() / std::pow(n, 2.0 * params.alpha());
    return {std::exp(n * std::log1p(-params.epsilon())), std::exp(n * std::log1p(-shrink))};
}

Distribution honest_readout_distribution(const AmplitudeMatrix &amps, Message i_prime) {
    auto p = amps.row(i_prime);
    for (double &x : p) {
        x *= x;
    }
    return Distribution(std::move(p));
}

}  // namespace qseal
