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

#include "qseal/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

namespace qseal {

namespace {

using Json = nlohmann::ordered_json;

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_optional(const std::optional<double> &x) { return x ? format_real(*x) : std::string(); }

// Numbers as they appear in the CSV, so both formats carry the same digits.
Json json_real(double x) {
    if (!std::isfinite(x)) {
        return format_real(x);
    }
    return std::strtod(format_real(x).c_str(), nullptr);
}

Json json_optional(const std::optional<double> &x) { return x ? json_real(*x) : Json(nullptr); }

void write_csv_row(const ReportRow &r, std::ostream &out) {
    out << r.n << ',' << format_optional(r.Theta) << ',' << format_optional(r.alpha) << ',' << format_real(r.nu)
        << ',' << (r.message ? std::to_string(*r.message) : std::string("all")) << ','
        << format_real(r.identify_probability) << ',' << format_real(r.per_bit_error_rate) << ','
        << format_real(r.mutual_information_bits) << ',' << format_real(r.uniform_weight) << ','
        << format_real(r.escape_probability) << ',' << format_real(r.coin_toss_escape) << ',';
    if (r.mc) {
        out << r.mc->trials << ',' << format_real(r.mc->identify_frequency) << ','
            << format_real(r.mc->standard_error) << ',' << format_real(r.mc->max_z);
    } else {
        out << ",,,";
    }
    out << '\n';
}

template <typename Writer>
void emit_file(const std::filesystem::path &path, Writer &&write) {
    auto tmp = path;
    tmp += ".tmp";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("cannot open " + path.string() + " for writing");
            }
            write(out);
            out.flush();
            if (!out) {
                throw std::runtime_error("failed while writing " + path.string());
            }
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw;
    }
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_real(const std::string &text, const char *column) {
    char *end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw std::runtime_error(std::string("report: bad value '") + text + "' in column " + column);
    }
    return value;
}

std::uint64_t parse_count(const std::string &text, const char *column) {
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (text.empty() || used != text.size()) {
        throw std::runtime_error(std::string("report: bad integer '") + text + "' in column " + column);
    }
    return value;
}

std::optional<double> parse_optional(const std::string &text, const char *column) {
    if (text.empty()) {
        return std::nullopt;
    }
    return parse_real(text, column);
}

}  // namespace

void write_report(std::span<const ReportRow> rows, ReportFormat format, std::ostream &out) {
    if (format == ReportFormat::csv) {
        out << kReportHeader << '\n';
        for (const auto &r : rows) {
            write_csv_row(r, out);
        }
        return;
    }
    for (const auto &r : rows) {
        Json j;
        j["n"] = r.n;
        j["theta"] = json_optional(r.Theta);
        j["alpha"] = json_optional(r.alpha);
        j["nu"] = json_real(r.nu);
        j["message"] = r.message ? Json(*r.message) : Json("all");
        j["identify_p"] = json_real(r.identify_probability);
        j["bit_error"] = json_real(r.per_bit_error_rate);
        j["mi_bits"] = json_real(r.mutual_information_bits);
        j["uniform_w"] = json_real(r.uniform_weight);
        j["escape_p"] = json_real(r.escape_probability);
        j["coin_escape_p"] = json_real(r.coin_toss_escape);
        j["trials"] = r.mc ? Json(r.mc->trials) : Json(nullptr);
        j["mc_identify"] = r.mc ? json_real(r.mc->identify_frequency) : Json(nullptr);
        j["mc_stderr"] = r.mc ? json_real(r.mc->standard_error) : Json(nullptr);
        j["max_z"] = r.mc ? json_real(r.mc->max_z) : Json(nullptr);
        out << j.dump() << '\n';
    }
}

void write_scaling(std::span<const ScalingRow> rows, ReportFormat format, std::ostream &out) {
    if (format == ReportFormat::csv) {
        out << kScalingHeader << '\n';
        for (const auto &r : rows) {
            out << r.n << ',' << format_real(r.epsilon) << ',' << format_real(r.p_max_exact) << ','
                << format_real(r.p_max_asymptotic) << ',' << format_real(r.log_ratio) << '\n';
        }
        return;
    }
    for (const auto &r : rows) {
        Json j;
        j["n"] = r.n;
        j["epsilon"] = json_real(r.epsilon);
        j["p_max_exact"] = json_real(r.p_max_exact);
        j["p_max_asymptotic"] = json_real(r.p_max_asymptotic);
        j["log_ratio"] = json_real(r.log_ratio);
        out << j.dump() << '\n';
    }
}

void emit_report(std::span<const ReportRow> rows, ReportFormat format, const std::filesystem::path &path) {
    if (rows.empty()) {
        throw std::invalid_argument("emit_report: no rows");
    }
    emit_file(path, [&](std::ostream &out) { write_report(rows, format, out); });
}

void emit_scaling(std::span<const ScalingRow> rows, ReportFormat format, const std::filesystem::path &path) {
    if (rows.empty()) {
        throw std::invalid_argument("emit_scaling: no rows");
    }
    emit_file(path, [&](std::ostream &out) { write_scaling(rows, format, out); });
}

std::vector<ReportRow> parse_report_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader) {
        throw std::runtime_error("report: missing or unexpected header");
    }
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        const auto f = split_csv(line);
        if (f.size() != 15) {
            throw std::runtime_error("report: expected 15 fields, got " + std::to_string(f.size()));
        }
        ReportRow r{};
        r.n = static_cast<unsigned>(parse_count(f[0], "n"));
        r.Theta = parse_optional(f[1], "theta");
        r.alpha = parse_optional(f[2], "alpha");
        r.nu = parse_real(f[3], "nu");
        if (f[4] != "all") {
            r.message = parse_count(f[4], "message");
        }
        r.identify_probability = parse_real(f[5], "identify_p");
        r.per_bit_error_rate = parse_real(f[6], "bit_error");
        r.mutual_information_bits = parse_real(f[7], "mi_bits");
        r.uniform_weight = parse_real(f[8], "uniform_w");
        r.escape_probability = parse_real(f[9], "escape_p");
        r.coin_toss_escape = parse_real(f[10], "coin_escape_p");
        if (!f[11].empty()) {
            r.mc = MonteCarloSummary{parse_count(f[11], "trials"), parse_real(f[12], "mc_identify"),
                                     parse_real(f[13], "mc_stderr"), parse_real(f[14], "max_z")};
        } else if (!f[12].empty() || !f[13].empty() || !f[14].empty()) {
            throw std::runtime_error("report: Monte Carlo columns present without trials");
        }
        rows.push_back(r);
    }
    return rows;
}

AmplitudeMatrix read_dense_scheme(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("dense scheme: empty input");
    }
    std::size_t dim = 0;
    {
        std::istringstream header(line);
        std::string extra;
        if (!(header >> dim) || (header >> extra)) {
            throw std::runtime_error("dense scheme: first line must hold N");
        }
    }
    if (dim < 2 || dim > (std::size_t{1} << channel_limit_bits())) {
        throw std::runtime_error("dense scheme: N = " + std::to_string(dim) + " outside [2, 2^" +
                                 std::to_string(channel_limit_bits()) + "]");
    }
    std::vector<double> values;
    values.reserve(dim * dim);
    std::size_t rows_read = 0;
    while (rows_read < dim && std::getline(in, line)) {
        std::istringstream row(line);
        std::size_t count = 0;
        double x = 0.0;
        while (row >> x) {
            values.push_back(x);
            ++count;
        }
        if (!row.eof()) {
            throw std::runtime_error("dense scheme: unparsable value in row " + std::to_string(rows_read));
        }
        if (count != dim) {
            throw std::runtime_error("dense scheme: row " + std::to_string(rows_read) + " has " +
                                     std::to_string(count) + " values, expected " + std::to_string(dim));
        }
        ++rows_read;
    }
    if (rows_read != dim) {
        throw std::runtime_error("dense scheme: expected " + std::to_string(dim) + " rows, found " +
                                 std::to_string(rows_read));
    }
    try {
        return AmplitudeMatrix::dense(dim, std::move(values));
    } catch (const std::invalid_argument &e) {
        throw std::runtime_error(std::string("dense scheme: ") + e.what());
    }
}

AmplitudeMatrix load_dense_scheme(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read dense scheme file " + path.string());
    }
    return read_dense_scheme(in);
}

void write_dense_scheme(const AmplitudeMatrix &amps, std::ostream &out) {
    const auto dim = amps.dimension();
    out << dim << '\n';
    char buf[64];
    for (Message r = 0; r < dim; ++r) {
        const auto row = amps.row(r);
        for (std::size_t c = 0; c < dim; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            out << (c == 0 ? "" : " ") << buf;
        }
        out << '\n';
    }
}

}  // namespace qseal
