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
#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qseal/distribution.hpp"
#include "qseal/random.hpp"
#include "qseal/seal_model.hpp"

namespace qseal {

/// Expected counts below this are pooled into one tail cell before z-scores
/// are computed, since the normal approximation does not hold there.
inline constexpr double kMinExpectedCount = 10.0;

struct ChannelRowEstimate {
    Distribution empirical;
    std::vector<double> standard_errors;  // binomial, per entry
    std::vector<double> z_scores; // (freq - analytic) / sqrt(p (1 - p) / trials)
    double max_abs_z;
    std::uint64_t trials;
};

/// z-scores of observed counts against analytic probabilities. Cells whose
/// expected count is below kMinExpectedCount are merged into one pooled
/// cell, appended last when its own expected count reaches the threshold.
std::vector<double> count_z_scores(std::span<const std::uint64_t> counts, std::span<const double> analytic,
                                   std::uint64_t trials);

/// Monte Carlo estimate of one channel row under the nu-attack. Requires
/// trials >= 100 and N within the dense limit.
ChannelRowEstimate estimate_channel_row(const AmplitudeMatrix &amps, Message i_prime, double nu,
                                        std::uint64_t trials, std::uint64_t seed);

struct CoinTossStats {
    std::uint64_t trials;
    double acted_frequency;
    double pass_frequency;
};

/// Runs coin_toss_attack followed by projective verification `trials` times.
CoinTossStats simulate_coin_toss(const AmplitudeMatrix &amps, Message i_prime, std::uint64_t trials,
                                 std::uint64_t seed);

struct CanonicalScheme {
    std::vector<unsigned> n_values;
    double Theta;
    double alpha;
};

struct DenseScheme {
    std::filesystem::path path;
};

struct AllMessages {};
struct SampleMessages {
    std::size_t count;
};
using MessageSelection = std::variant<AllMessages, SampleMessages, std::vector<Message>>;

inline constexpr std::size_t kDefaultMessageSample = 64;

struct ExperimentConfig {
    std::variant<CanonicalScheme, DenseScheme> scheme;
    std::vector<double> nu_grid;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    MessageSelection messages = SampleMessages{kDefaultMessageSample};
    unsigned threads = 1;  // 0 picks the hardware concurrency

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct MonteCarloSummary {
    std::uint64_t trials;
    double identify_frequency;
    double standard_error;
    double max_z;

    bool operator==(const MonteCarloSummary &) const = default;
};

struct ReportRow {
    unsigned n;
    std::optional<double> Theta;  // absent for dense schemes
    std::optional<double> alpha;
    double nu;
    std::optional<Message> message;  // absent on aggregate rows
    double identify_probability;
    double per_bit_error_rate;
    double mutual_information_bits;
    double uniform_weight;
    double escape_probability;
    double coin_toss_escape;
    std::optional<MonteCarloSummary> mc;

    bool operator==(const ReportRow &) const = default;
};

/// Analytic and Monte Carlo metrics for every (scheme point, nu, message),
/// followed by one aggregate row per (scheme point, nu). Rows come out in
/// lexicographic order of the sweep axes regardless of `threads`.
std::vector<ReportRow> run_experiment(const ExperimentConfig &config);

/// Messages selected for a scheme of dimension `dim`; sorted, no repeats.
std::vector<Message> select_messages(const MessageSelection &selection, std::uint64_t dim, std::uint64_t seed,
                                     std::size_t point_index);

struct ScalingRow {
    unsigned n;
    double epsilon;
    double p_max_exact;
    double p_max_asymptotic;
    double log_ratio;  // ln(exact) / ln(asymptotic)
};

std::vector<ScalingRow> scaling_table(double Theta, double alpha, std::span<const unsigned> n_values);

}  // namespace qseal
