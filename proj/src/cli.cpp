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

#include "qseal/cli.hpp"

#include <charconv>
#include <fstream>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "qseal/infometrics.hpp"
#include "qseal/verify.hpp"

namespace qseal {

namespace {

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ',')) {
        parts.push_back(part);
    }
    return parts;
}

template <typename T>
T parse_number(std::string_view text, const std::string &flag) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError(flag + ": cannot parse '" + std::string(text) + "'");
    }
    return value;
}

template <typename T>
std::vector<T> parse_list(const std::string &text, const std::string &flag) {
    std::vector<T> out;
    for (const auto &part : split_list(text)) {
        out.push_back(parse_number<T>(part, flag));
    }
    if (out.empty()) {
        throw UsageError(flag + ": expected a comma-separated list");
    }
    return out;
}

struct RawFlags {
    std::string n;
    std::optional<double> theta;
    std::optional<double> theta_deg;
    double alpha = 0.25;
    std::string nu;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string messages;
    std::string scheme = "canonical";
    std::string format = "csv";
    std::string out;
    unsigned threads = 1;
    Message message = 0;
};

void write_channel(const ChannelMatrix &channel, ReportFormat format, std::ostream &out) {
    char buf[64];
    if (format == ReportFormat::csv) {
        out << "message";
        for (std::size_t c = 0; c < channel.dim(); ++c) {
            out << ",p" << c;
        }
        out << '\n';
    }
    for (std::size_t r = 0; r < channel.dim(); ++r) {
        out << (format == ReportFormat::csv ? std::to_string(r) : "{\"message\":" + std::to_string(r) + ",\"p\":[");
        for (std::size_t c = 0; c < channel.dim(); ++c) {
            std::snprintf(buf, sizeof buf, "%.12g", channel(r, c));
            out << (format == ReportFormat::csv || c > 0 ? "," : "") << buf;
        }
        out << (format == ReportFormat::csv ? "\n" : "]}\n");
    }
}

void write_checks(const std::vector<CheckResult> &checks, std::ostream &out) {
    for (const auto &c : checks) {
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
    }
}

template <typename Writer>
void deliver(const std::optional<std::filesystem::path> &path, std::ostream &out, Writer &&write) {
    if (!path) {
        write(out);
        return;
    }
    auto tmp = *path;
    tmp += ".tmp";
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::runtime_error("cannot open " + path->string() + " for writing");
    }
    write(file);
    file.close();
    if (!file) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("failed while writing " + path->string());
    }
    std::filesystem::rename(tmp, *path);
}

AmplitudeMatrix load_scheme(const std::variant<CanonicalScheme, DenseScheme> &scheme) {
    if (const auto *dense = std::get_if<DenseScheme>(&scheme)) {
        return load_dense_scheme(dense->path);
    }
    const auto &canonical = std::get<CanonicalScheme>(scheme);
    return canonical_amplitudes(make_params(canonical.n_values.front(), canonical.Theta, canonical.alpha));
}

}  // namespace

CliInvocation parse_args(const std::vector<std::string> &args) {
    CLI::App app{"Quantum string seal attack simulator", "qseal"};
    app.require_subcommand(1, 1);
    RawFlags raw;
    app.add_option("--n", raw.n, "String lengths, comma separated");
    auto *theta = app.add_option("--theta", raw.theta, "Theta in radians, in (0, pi/4)");
    app.add_option("--theta-deg", raw.theta_deg, "Theta in degrees")->excludes(theta);
    app.add_option("--alpha", raw.alpha, "Exponent alpha, in (0, 1/2)");
    app.add_option("--nu", raw.nu, "Attack strengths in [0, 1], comma separated");
    app.add_option("--trials", raw.trials, "Monte Carlo trials per point (0 = analytic only)");
    app.add_option("--seed", raw.seed, "Master seed");
    app.add_option("--messages", raw.messages, "'all' or a sample size K");
    app.add_option("--scheme", raw.scheme, "canonical or dense:PATH");
    app.add_option("--format", raw.format, "csv or jsonl");
    app.add_option("--out", raw.out, "Output file (default stdout)");
    app.add_option("--threads", raw.threads, "Worker threads for sweeps (0 = all cores)");
    app.add_option("--message", raw.message, "Sealed message index for `attack`");

    CliInvocation inv;
    const std::pair<const char *, Subcommand> subcommands[] = {{"verify", Subcommand::verify},
                                                               {"channel", Subcommand::channel},
                                                               {"attack", Subcommand::attack},
                                                               {"sweep", Subcommand::sweep},
                                                               {"scaling", Subcommand::scaling}};
    std::vector<std::pair<CLI::App *, Subcommand>> registered;
    for (const auto &[name, sub] : subcommands) {
        auto *s = app.add_subcommand(name);
        s->fallthrough();
        registered.emplace_back(s, sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }
    for (const auto &[s, sub] : registered) {
        if (s->parsed()) {
            inv.subcommand = sub;
        }
    }

    const bool needs_n = inv.subcommand != Subcommand::verify;
    const bool needs_nu = inv.subcommand == Subcommand::channel || inv.subcommand == Subcommand::attack ||
                          inv.subcommand == Subcommand::sweep;

    if (raw.format == "csv") {
        inv.format = ReportFormat::csv;
    } else if (raw.format == "jsonl") {
        inv.format = ReportFormat::jsonl;
    } else {
        throw UsageError("--format: must be csv or jsonl");
    }
    if (!raw.out.empty()) {
        inv.out_path = raw.out;
    }

    double Theta = std::numbers::pi / 8;
    if (raw.theta) {
        Theta = *raw.theta;
    } else if (raw.theta_deg) {
        Theta = *raw.theta_deg * std::numbers::pi / 180.0;
    }
    const std::string theta_flag = raw.theta_deg ? "--theta-deg" : "--theta";
    if (!(Theta > 0.0 && Theta < std::numbers::pi / 4)) {
        throw UsageError(theta_flag + ": Theta must lie in (0, pi/4)");
    }
    if (!(raw.alpha > 0.0 && raw.alpha < 0.5)) {
        throw UsageError("--alpha: alpha must lie in (0, 1/2)");
    }

    auto &config = inv.config;
    config.trials = raw.trials;
    config.seed = raw.seed;
    config.threads = raw.threads;
    if (config.trials != 0 && config.trials < 100) {
        throw UsageError("--trials: must be 0 (analytic only) or at least 100");
    }

    std::vector<unsigned> n_values;
    if (!raw.n.empty()) {
        n_values = parse_list<unsigned>(raw.n, "--n");
        // Scaling only needs the closed forms, so it is not bound to 64-bit indices.
        const unsigned max_n = inv.subcommand == Subcommand::scaling ? 1U << 20 : kMaxProductFormBits;
        for (unsigned n : n_values) {
            if (n < 1 || n > max_n) {
                throw UsageError("--n: n must lie in [1, " + std::to_string(max_n) + "]");
            }
        }
    }
    if (raw.scheme == "canonical") {
        if (needs_n && n_values.empty()) {
            throw UsageError("--n: required for this subcommand");
        }
        config.scheme = CanonicalScheme{n_values, Theta, raw.alpha};
    } else if (raw.scheme.rfind("dense:", 0) == 0 && raw.scheme.size() > 6) {
        if (inv.subcommand == Subcommand::scaling) {
            throw UsageError("--scheme: scaling works on the canonical scheme only");
        }
        config.scheme = DenseScheme{raw.scheme.substr(6)};
    } else {
        throw UsageError("--scheme: must be canonical or dense:PATH");
    }
    const bool single_point = inv.subcommand == Subcommand::channel || inv.subcommand == Subcommand::attack;
    if (single_point && std::holds_alternative<CanonicalScheme>(config.scheme) && n_values.size() != 1) {
        throw UsageError("--n: " + std::string(inv.subcommand == Subcommand::channel ? "channel" : "attack") +
                         " takes a single n");
    }

    if (!raw.nu.empty()) {
        config.nu_grid = parse_list<double>(raw.nu, "--nu");
        for (double nu : config.nu_grid) {
            if (!(nu >= 0.0 && nu <= 1.0)) {
                throw UsageError("--nu: nu must lie in [0, 1]");
            }
        }
    } else if (needs_nu) {
        throw UsageError("--nu: required");
    }
    if (inv.subcommand == Subcommand::channel && config.nu_grid.size() != 1) {
        throw UsageError("--nu: channel takes a single nu");
    }

    if (raw.messages.empty()) {
        config.messages = SampleMessages{kDefaultMessageSample};
    } else if (raw.messages == "all") {
        config.messages = AllMessages{};
    } else {
        const auto k = parse_number<std::size_t>(raw.messages, "--messages");
        if (k == 0) {
            throw UsageError("--messages: K must be at least 1");
        }
        config.messages = SampleMessages{k};
    }
    inv.message = raw.message;
    if (inv.subcommand == Subcommand::attack) {
        config.messages = std::vector<Message>{raw.message};
        if (n_values.size() == 1 && n_values.front() <= kMaxProductFormBits &&
            raw.message >= (Message{1} << n_values.front())) {
            throw UsageError("--message: index must be below N = 2^n");
        }
    }
    return inv;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CliInvocation inv;
    try {
        inv = parse_args(args);
    } catch (const UsageError &e) {
        err << "qseal: " << e.what() << "\n";
        return 2;
    }
    try {
        switch (inv.subcommand) {
        case Subcommand::verify: {
            const auto checks = run_invariant_suite();
            deliver(inv.out_path, out, [&](std::ostream &o) { write_checks(checks, o); });
            for (const auto &c : checks) {
                if (!c.passed) {
                    err << "qseal: invariant check failed: " << c.name << "\n";
                    return 1;
                }
            }
            return 0;
        }
        case Subcommand::channel: {
            const auto amps = load_scheme(inv.config.scheme);
            const auto channel = channel_matrix(amps, inv.config.nu_grid.front());
            deliver(inv.out_path, out, [&](std::ostream &o) { write_channel(channel, inv.format, o); });
            return 0;
        }
        case Subcommand::attack:
        case Subcommand::sweep: {
            const auto rows = run_experiment(inv.config);
            if (inv.out_path) {
                emit_report(rows, inv.format, *inv.out_path);
            } else {
                write_report(rows, inv.format, out);
            }
            return 0;
        }
        case Subcommand::scaling: {
            const auto &canonical = std::get<CanonicalScheme>(inv.config.scheme);
            const auto rows = scaling_table(canonical.Theta, canonical.alpha, canonical.n_values);
            if (inv.out_path) {
                emit_scaling(rows, inv.format, *inv.out_path);
            } else {
                write_scaling(rows, inv.format, out);
            }
            return 0;
        }
        }
    } catch (const std::exception &e) {
        err << "qseal: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace qseal
