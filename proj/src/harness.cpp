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

#include "qseal/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "qseal/attack.hpp"
#include "qseal/infometrics.hpp"
#include "qseal/report.hpp"

namespace qseal {

namespace {

// Domain tags keep sub-seed streams for different purposes apart.
constexpr std::uint64_t kMessageStream = 0x6d657373616765ULL;
constexpr std::uint64_t kTrialStream = 0x747269616cULL;

std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

struct CellTest {
    double z;
    bool tested;
};

CellTest cell_z(double observed, double expected_p, std::uint64_t trials) {
    const double t = static_cast<double>(trials);
    if (t * expected_p < kMinExpectedCount || t * (1.0 - expected_p) < kMinExpectedCount) {
        return {0.0, false};
    }
    const double se = std::sqrt(expected_p * (1.0 - expected_p) / t);
    return {(observed / t - expected_p) / se, true};
}

struct ScanResult {
    double identify_frequency;
    double standard_error;
    double max_z;
};

// Product-form schemes too large to materialize: draw from the outcome law
// as a mixture (uniform with weight 1 - nu, otherwise flip each bit with
// probability epsilon) and test the Hamming-distance histogram.
ScanResult estimate_distance_classes(const AmplitudeMatrix &amps, double nu, std::uint64_t trials,
                                     std::uint64_t seed) {
    const unsigned n = amps.bits();
    const double eps = amps.params()->epsilon();
    Rng rng(seed);
    std::vector<std::uint64_t> counts(n + 1, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        unsigned d = 0;
        if (uniform01(rng) < nu) {
            for (unsigned k = 0; k < n; ++k) {
                d += uniform01(rng) < eps ? 1U : 0U;
            }
        } else {
            d = static_cast<unsigned>(std::popcount(rng() & ((Message{1} << n) - 1)));
        }
        ++counts[d];
    }
    std::vector<double> analytic(n + 1);
    const double floor = (1.0 - nu) / static_cast<double>(amps.dimension());
    double binom = 1.0;
    for (unsigned d = 0; d <= n; ++d) {
        analytic[d] = binom * (floor + nu * amps.class_weight(d));
        binom = binom * (n - d) / (d + 1);
    }
    const auto z = count_z_scores(counts, analytic, trials);
    double max_z = 0.0;
    for (double v : z) {
        max_z = std::max(max_z, std::abs(v));
    }
    const double f = static_cast<double>(counts[0]) / static_cast<double>(trials);
    return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(trials)), max_z};
}

struct PointAnalytics {
    double mutual_information_bits;
    double uniform_weight;
};

struct SchemePoint {
    AmplitudeMatrix amps;
    std::optional<double> Theta;
    std::optional<double> alpha;
    std::vector<Message> messages;
};

struct WorkItem {
    std::size_t point;
    std::size_t nu_index;
    Message message;
};

template <typename Fn>
void for_each_index(std::size_t count, unsigned threads, Fn &&fn) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

std::vector<double> count_z_scores(std::span<const std::uint64_t> counts, std::span<const double> analytic,
                                   std::uint64_t trials) {
    if (counts.size() != analytic.size()) {
        throw std::invalid_argument("count_z_scores: size mismatch");
    }
    std::vector<double> z;
    double pooled_count = 0.0;
    double pooled_p = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (analytic[i] <= 0.0 && counts[i] > 0) {
            z.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        const auto cell = cell_z(static_cast<double>(counts[i]), analytic[i], trials);
        if (cell.tested) {
            z.push_back(cell.z);
        } else {
            pooled_count += static_cast<double>(counts[i]);
            pooled_p += analytic[i];
        }
    }
    const auto pooled = cell_z(pooled_count, std::min(pooled_p, 1.0), trials);
    if (pooled.tested) {
        z.push_back(pooled.z);
    }
    return z;
}

ChannelRowEstimate estimate_channel_row(const AmplitudeMatrix &amps, Message i_prime, double nu,
                                        std::uint64_t trials, std::uint64_t seed) {
    if (trials < 100) {
        throw std::invalid_argument("estimate_channel_row needs trials >= 100");
    }
    const auto analytic = outcome_distribution(amps, i_prime, nu);
    const OutcomeSampler sampler(analytic);
    Rng rng(seed);
    std::vector<std::uint64_t> counts(analytic.size(), 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        ++counts[sampler(rng)];
    }
    const double total = static_cast<double>(trials);
    std::vector<double> freq(counts.size());
    std::vector<double> se(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        freq[i] = static_cast<double>(counts[i]) / total;
        se[i] = std::sqrt(freq[i] * (1.0 - freq[i]) / total);
    }
    auto z = count_z_scores(counts, analytic.probabilities(), trials);
    double max_z = 0.0;
    for (double v : z) {
        max_z = std::max(max_z, std::abs(v));
    }
    return {Distribution(std::move(freq)), std::move(se), std::move(z), max_z, trials};
}

CoinTossStats simulate_coin_toss(const AmplitudeMatrix &amps, Message i_prime, std::uint64_t trials,
                                 std::uint64_t seed) {
    if (trials == 0) {
        throw std::invalid_argument("simulate_coin_toss needs trials >= 1");
    }
    const auto sealed = sealed_state(amps, i_prime);
    Rng rng(seed);
    std::uint64_t acted = 0;
    std::uint64_t passed = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto outcome = coin_toss_attack(amps, i_prime, rng);
        acted += outcome.acted ? 1 : 0;
        passed += projective_verification(sealed, outcome, rng) ? 1 : 0;
    }
    const double total = static_cast<double>(trials);
    return {trials, static_cast<double>(acted) / total, static_cast<double>(passed) / total};
}

void ExperimentConfig::validate() const {
    if (nu_grid.empty()) {
        throw std::invalid_argument("nu: grid must not be empty");
    }
    for (double nu : nu_grid) {
        if (!(nu >= 0.0 && nu <= 1.0)) {
            throw std::invalid_argument("nu: values must lie in [0, 1]");
        }
    }
    if (trials != 0 && trials < 100) {
        throw std::invalid_argument("trials: must be 0 (analytic only) or at least 100");
    }
    if (const auto *canonical = std::get_if<CanonicalScheme>(&scheme)) {
        if (canonical->n_values.empty()) {
            throw std::invalid_argument("n: list must not be empty");
        }
        for (unsigned n : canonical->n_values) {
            if (n > kMaxProductFormBits) {
                throw std::invalid_argument("n: values must be at most 63");
            }
            make_params(n, canonical->Theta, canonical->alpha);
        }
    }
    if (const auto *sample = std::get_if<SampleMessages>(&messages); sample && sample->count == 0) {
        throw std::invalid_argument("messages: sample count must be at least 1");
    }
    if (const auto *list = std::get_if<std::vector<Message>>(&messages); list && list->empty()) {
        throw std::invalid_argument("messages: explicit list must not be empty");
    }
}

std::vector<Message> select_messages(const MessageSelection &selection, std::uint64_t dim, std::uint64_t seed,
                                     std::size_t point_index) {
    if (std::holds_alternative<AllMessages>(selection)) {
        if (dim > (std::uint64_t{1} << channel_limit_bits())) {
            throw std::invalid_argument("messages: 'all' is limited to N <= 2^" + std::to_string(channel_limit_bits()));
        }
        std::vector<Message> all(dim);
        for (Message m = 0; m < dim; ++m) {
            all[m] = m;
        }
        return all;
    }
    if (const auto *list = std::get_if<std::vector<Message>>(&selection)) {
        std::set<Message> unique;
        for (Message m : *list) {
            if (m >= dim) {
                throw std::out_of_range("messages: index " + std::to_string(m) + " out of range for N = " +
                                        std::to_string(dim));
            }
            unique.insert(m);
        }
        return {unique.begin(), unique.end()};
    }
    const auto k = static_cast<std::uint64_t>(std::min<std::uint64_t>(std::get<SampleMessages>(selection).count, dim));
    // Floyd's sampling without replacement.
    Rng rng(derive_seed(seed, kMessageStream ^ point_index));
    std::set<Message> chosen;
    for (std::uint64_t j = dim - k; j < dim; ++j) {
        const Message t = uniform_below(rng, j + 1);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
        }
    }
    return {chosen.begin(), chosen.end()};
}

std::vector<ReportRow> run_experiment(const ExperimentConfig &config) {
    config.validate();

    std::vector<SchemePoint> points;
    if (const auto *canonical = std::get_if<CanonicalScheme>(&config.scheme)) {
        for (unsigned n : canonical->n_values) {
            points.push_back(
                {canonical_amplitudes(make_params(n, canonical->Theta, canonical->alpha)), canonical->Theta,
                 canonical->alpha, {}});
        }
    } else {
        points.push_back({load_dense_scheme(std::get<DenseScheme>(config.scheme).path), std::nullopt,
                          std::nullopt, {}});
    }
    for (std::size_t p = 0; p < points.size(); ++p) {
        points[p].messages = select_messages(config.messages, points[p].amps.dimension(), config.seed, p);
    }

    const std::size_t nu_count = config.nu_grid.size();
    std::vector<PointAnalytics> analytics(points.size() * nu_count);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto &amps = points[p].amps;
        for (std::size_t v = 0; v < nu_count; ++v) {
            const double nu = config.nu_grid[v];
            auto &out = analytics[p * nu_count + v];
            if (amps.is_product_form()) {
                // The canonical channel's noise floor is (1 - nu)/N by construction.
                out = {canonical_mutual_information(*amps.params(), nu), 1.0 - nu};
            } else {
                const auto channel = channel_matrix(amps, nu);
                out = {mutual_information(channel, Distribution::uniform(channel.dim())),
                       noise_floor_decomposition(channel).uniform_weight};
            }
        }
    }

    std::vector<WorkItem> items;
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t v = 0; v < nu_count; ++v) {
            for (Message m : points[p].messages) {
                items.push_back({p, v, m});
            }
        }
    }

    std::vector<ReportRow> message_rows(items.size());
    for_each_index(items.size(), config.threads, [&](std::size_t index) {
        const auto &item = items[index];
        const auto &point = points[item.point];
        const auto &amps = point.amps;
        const double nu = config.nu_grid[item.nu_index];
        const auto &a = analytics[item.point * nu_count + item.nu_index];
        ReportRow row{amps.bits(),
                      point.Theta,
                      point.alpha,
                      nu,
                      item.message,
                      identify_probability(amps, item.message, nu),
                      per_bit_error_rate(amps, item.message, nu),
                      a.mutual_information_bits,
                      a.uniform_weight,
                      escape_probability(amps, item.message, nu),
                      coin_toss_escape(amps, item.message),
                      std::nullopt};
        if (config.trials > 0) {
            const std::uint64_t seed = derive_seed(config.seed, kTrialStream ^ derive_seed(index, item.point));
            if (amps.bits() <= kDefaultDenseLimitBits) {
                const auto est = estimate_channel_row(amps, item.message, nu, config.trials, seed);
                row.mc = MonteCarloSummary{config.trials, est.empirical[item.message],
                                           est.standard_errors[item.message], est.max_abs_z};
            } else {
                const auto scan = estimate_distance_classes(amps, nu, config.trials, seed);
                row.mc = MonteCarloSummary{config.trials, scan.identify_frequency, scan.standard_error, scan.max_z};
            }
        }
        message_rows[index] = std::move(row);
    });

    std::vector<ReportRow> rows;
    std::size_t cursor = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const std::size_t k = points[p].messages.size();
        for (std::size_t v = 0; v < nu_count; ++v) {
            ReportRow aggregate = message_rows[cursor];
            aggregate.message = std::nullopt;
            double identify = 0.0, bit_error = 0.0, escape = 0.0, coin = 0.0;
            double mc_freq = 0.0, mc_var = 0.0, mc_max_z = 0.0;
            for (std::size_t m = 0; m < k; ++m) {
                const auto &r = message_rows[cursor + m];
                identify += r.identify_probability;
                bit_error += r.per_bit_error_rate;
                escape += r.escape_probability;
                coin += r.coin_toss_escape;
                if (r.mc) {
                    mc_freq += r.mc->identify_frequency;
                    mc_var += r.mc->standard_error * r.mc->standard_error;
                    mc_max_z = std::max(mc_max_z, r.mc->max_z);
                }
                rows.push_back(r);
            }
            const double kd = static_cast<double>(k);
            aggregate.identify_probability = identify / kd;
            aggregate.per_bit_error_rate = bit_error / kd;
            aggregate.escape_probability = escape / kd;
            aggregate.coin_toss_escape = coin / kd;
            if (aggregate.mc) {
                aggregate.mc = MonteCarloSummary{config.trials * k, mc_freq / kd, std::sqrt(mc_var) / kd, mc_max_z};
            }
            rows.push_back(std::move(aggregate));
            cursor += k;
        }
    }
    return rows;
}

std::vector<ScalingRow> scaling_table(double Theta, double alpha, std::span<const unsigned> n_values) {
    std::vector<ScalingRow> rows;
    rows.reserve(n_values.size());
    for (unsigned n : n_values) {
        const auto params = make_params(n, Theta, alpha);
        const double nd = n;
        const double log_exact = nd * std::log1p(-params.epsilon());
        const double log_asymptotic = nd * std::log1p(-Theta * Theta / std::pow(nd, 2.0 * alpha));
        rows.push_back({n, params.epsilon(), std::exp(log_exact), std::exp(log_asymptotic),
                        log_exact / log_asymptotic});
    }
    return rows;
}

}  // namespace qseal
