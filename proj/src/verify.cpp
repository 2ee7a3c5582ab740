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

#include "qseal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qseal/attack.hpp"
#include "qseal/harness.hpp"
#include "qseal/infometrics.hpp"
#include "qseal/seal_model.hpp"

namespace qseal {

namespace {

std::string describe(const char *label, double value) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s = %.3g", label, value);
    return buf;
}

std::vector<double> nu_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) {
        grid.push_back(k / 10.0);
    }
    return grid;
}

// Random dense schemes plus canonical ones, small enough for N x N work.
std::vector<AmplitudeMatrix> sample_schemes() {
    std::vector<AmplitudeMatrix> schemes;
    Rng rng(20060301);
    for (std::size_t dim : {2, 4, 8, 16, 32, 64}) {
        schemes.push_back(AmplitudeMatrix::random_dense(dim, rng));
    }
    for (unsigned n : {1, 3, 6}) {
        schemes.push_back(canonical_amplitudes(make_params(n, std::numbers::pi / 8, 0.25)));
    }
    schemes.push_back(AmplitudeMatrix::identity(8));
    return schemes;
}

CheckResult check_completeness() {
    double worst = 0.0;
    for (double nu : nu_grid()) {
        for (std::size_t dim = 2; dim <= 4096; ++dim) {
            worst = std::max(worst, completeness_defect(chau_coefficients(nu, dim)));
        }
    }
    return {"measurement completeness, N in [2, 4096]", worst <= 1e-12, describe("max defect", worst)};
}

CheckResult check_kraus_law(const std::vector<AmplitudeMatrix> &schemes) {
    double worst = 0.0;
    for (const auto &amps : schemes) {
        const auto dim = amps.dimension();
        for (double nu : nu_grid()) {
            const auto coeffs = chau_coefficients(nu, dim);
            for (Message ip = 0; ip < dim; ++ip) {
                const auto state = sealed_state(amps, ip);
                for (Message i = 0; i < dim; ++i) {
                    const double lambda = amps.entry(ip, i);
                    const double closed = (1.0 - nu) / static_cast<double>(dim) + nu * lambda * lambda;
                    double p = 0.0;
                    try {
                        p = apply_kraus(state, DiagonalKraus(i, coeffs)).probability;
                    } catch (const DegenerateBranchError &) {
                        p = 0.0;
                    }
                    worst = std::max(worst, std::abs(p - closed));
                }
            }
        }
    }
    return {"Kraus norm matches (1-nu)/N + nu*lambda^2", worst <= 1e-12, describe("max deviation", worst)};
}

CheckResult check_mixture(const std::vector<AmplitudeMatrix> &schemes) {
    double worst_mix = 0.0;
    double worst_sum = 0.0;
    double worst_floor = 0.0;
    double worst_limits = 0.0;
    for (const auto &amps : schemes) {
        const auto dim = amps.dimension();
        const double u = 1.0 / static_cast<double>(dim);
        for (Message ip = 0; ip < dim; ++ip) {
            const auto honest = outcome_distribution(amps, ip, 1.0);
            const auto born = honest_readout_distribution(amps, ip);
            const auto uniform = outcome_distribution(amps, ip, 0.0);
            for (Message i = 0; i < dim; ++i) {
                worst_limits = std::max({worst_limits, std::abs(honest[i] - born[i]), std::abs(uniform[i] - u)});
            }
            for (double nu : nu_grid()) {
                const auto p = outcome_distribution(amps, ip, nu);
                double total = 0.0;
                for (Message i = 0; i < dim; ++i) {
                    worst_mix = std::max(worst_mix, std::abs(p[i] - ((1.0 - nu) * u + nu * honest[i])));
                    worst_floor = std::max(worst_floor, (1.0 - nu) * u - p[i]);
                    total += p[i];
                }
                worst_sum = std::max(worst_sum, std::abs(total - 1.0));
            }
        }
    }
    const bool ok = worst_mix <= 1e-12 && worst_sum <= 1e-10 && worst_floor <= 1e-12 && worst_limits <= 1e-12;
    return {"mixture identity, normalization, floor and nu in {0, 1} limits", ok,
            describe("max mixture deviation", worst_mix) + ", " + describe("max limit deviation", worst_limits)};
}

CheckResult check_noise_floor(const std::vector<AmplitudeMatrix> &schemes) {
    double worst_floor = 0.0;
    double worst_weight = 0.0;
    double worst_residual = 0.0;
    for (const auto &amps : schemes) {
        const auto channel = channel_matrix(amps, 0.5);
        const auto honest = channel_matrix(amps, 1.0);
        const double floor = 0.5 / static_cast<double>(channel.dim());
        for (double p : channel.entries()) {
            worst_floor = std::max(worst_floor, floor - p);
        }
        const auto split = noise_floor_decomposition(channel);
        worst_weight = std::max(worst_weight, std::abs(split.uniform_weight - 0.5));
        for (std::size_t k = 0; k < honest.entries().size(); ++k) {
            worst_residual = std::max(worst_residual, std::abs(split.residual.entries()[k] - honest.entries()[k]));
        }
    }
    const bool ok = worst_floor <= 1e-12 && worst_weight <= 1e-10 && worst_residual <= 1e-10;
    return {"noise floor 1/(2N) and uniform weight 1/2 at nu = 1/2", ok,
            describe("max weight deviation", worst_weight) + ", " + describe("max residual deviation", worst_residual)};
}

CheckResult check_triviality(const std::vector<AmplitudeMatrix> &schemes) {
    double worst = -1.0;
    for (const auto &amps : schemes) {
        const auto prior = Distribution::uniform(amps.dimension());
        const double honest = mutual_information(channel_matrix(amps, 1.0), prior);
        for (double nu : nu_grid()) {
            const double info = mutual_information(channel_matrix(amps, nu), prior);
            worst = std::max(worst, info - nu * honest);
        }
    }
    return {"I(nu) <= nu * I(1)", worst <= 1e-9, describe("max excess", worst)};
}

CheckResult check_bsc_factorization() {
    double worst = 0.0;
    for (unsigned n = 2; n <= 8; ++n) {
        const auto params = make_params(n, std::numbers::pi / 8, 0.25);
        const auto amps = canonical_amplitudes(params);
        const double exact = mutual_information(channel_matrix(amps, 1.0), Distribution::uniform(amps.dimension()));
        worst = std::max(worst, std::abs(exact - n * (1.0 - binary_entropy(params.epsilon()))));
    }
    return {"canonical honest information n(1 - H2(eps))", worst <= 1e-9, describe("max deviation", worst)};
}

CheckResult check_escape_half() {
    double lowest = 1.0;
    for (unsigned n = 2; n <= 10; ++n) {
        const auto amps = canonical_amplitudes(make_params(n, std::numbers::pi / 8, 0.25));
        lowest = std::min(lowest, escape_probability(amps, 0, 0.5));
    }
    return {"projective-test escape >= 1/2 at nu = 1/2 (canonical, n <= 10)", lowest >= 0.5 - 1e-10,
            describe("min escape", lowest)};
}

CheckResult check_product_form() {
    double worst_entry = 0.0;
    double worst_pmax = 0.0;
    for (unsigned n = 1; n <= 8; ++n) {
        const auto params = make_params(n, std::numbers::pi / 8, 0.25);
        const auto amps = canonical_amplitudes(params);
        const double c = std::cos(params.theta());
        const double s = std::sin(params.theta());
        const double exact = p_max(params).exact;
        for (Message r = 0; r < amps.dimension(); ++r) {
            worst_pmax = std::max(worst_pmax, std::abs(amps.weight(r, r) - exact));
            for (Message col = 0; col < amps.dimension(); ++col) {
                double direct = 1.0;
                for (unsigned k = 0; k < n; ++k) {
                    direct *= (((r ^ col) >> k) & 1U) ? s : c;
                }
                worst_entry = std::max(worst_entry, std::abs(amps.entry(r, col) - direct));
            }
        }
    }
    return {"product-form entries and p_max diagonal", worst_entry <= 1e-12 && worst_pmax <= 1e-10,
            describe("max entry deviation", worst_entry)};
}

CheckResult check_scaling() {
    const unsigned ns[] = {4, 8, 16, 32, 64};
    const auto rows = scaling_table(std::numbers::pi / 8, 0.25, ns);
    bool ok = true;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        ok = ok && rows[k].p_max_exact < rows[k - 1].p_max_exact && rows[k].epsilon < rows[k - 1].epsilon;
    }
    ok = ok && rows.back().p_max_exact < rows.front().p_max_exact / 2;
    ok = ok && rows.back().log_ratio >= 0.9 && rows.back().log_ratio <= 1.1;
    return {"p_max and epsilon decrease in n; log ratio near 1 at n = 64", ok,
            describe("log ratio at 64", rows.back().log_ratio)};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
    const auto schemes = sample_schemes();
    return {check_completeness(),        check_kraus_law(schemes), check_mixture(schemes),
            check_noise_floor(schemes),  check_triviality(schemes), check_bsc_factorization(),
            check_escape_half(),         check_product_form(),      check_scaling()};
}

}  // namespace qseal
