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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qseal/harness.hpp"
#include "qseal/seal_model.hpp"

namespace qseal {

enum class ReportFormat { csv, jsonl };

inline constexpr const char *kReportHeader =
    "n,theta,alpha,nu,message,identify_p,bit_error,mi_bits,uniform_w,escape_p,coin_escape_p,trials,mc_identify,"
    "mc_stderr,max_z";
inline constexpr const char *kScalingHeader = "n,epsilon,p_max_exact,p_max_asymptotic,log_ratio";

/// Floats are written with 12 significant digits; absent values are empty
/// CSV fields or JSON nulls. Lines end in '\n'.
void write_report(std::span<const ReportRow> rows, ReportFormat format, std::ostream &out);
void write_scaling(std::span<const ScalingRow> rows, ReportFormat format, std::ostream &out);

/// Writes the whole file or nothing: output goes to a sibling temporary that
/// is renamed into place, and is removed if anything fails. Throws
/// std::invalid_argument for empty rows and std::runtime_error when the path
/// cannot be written.
void emit_report(std::span<const ReportRow> rows, ReportFormat format, const std::filesystem::path &path);
void emit_scaling(std::span<const ScalingRow> rows, ReportFormat format, const std::filesystem::path &path);

/// Parses write_report's CSV output. Throws std::runtime_error on malformed input.
std::vector<ReportRow> parse_report_csv(std::istream &in);

/// Dense scheme file: first line N, then N lines of N whitespace-separated
/// amplitudes. Rows are checked for unit square norm.
AmplitudeMatrix load_dense_scheme(const std::filesystem::path &path);
AmplitudeMatrix read_dense_scheme(std::istream &in);
void write_dense_scheme(const AmplitudeMatrix &amps, std::ostream &out);

}  // namespace qseal
