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

#include <functional>
#include <string>
#include <vector>

namespace qseal {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Invariant suite behind `qseal verify`: measurement completeness, the
/// closed-form outcome law, mixture identities, degenerate limits, the noise
/// floor and the information bounds, each at its fixed tolerance.
std::vector<CheckResult> run_invariant_suite();

}  // namespace qseal
