// retrowpt — retrodirective wireless power transfer simulator for ambient backscatter receivers
// Copyright (C) 2026 the retrowpt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// -------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "retrowpt/channel.hpp"

namespace retrowpt {

enum class EstimateMethod
{
    monte_carlo,
    quadrature
};

inline const char *method_name(EstimateMethod m)
{
    return m == EstimateMethod::monte_carlo ? "monte-carlo" : "quadrature";
}

/// FNV-1a hash of the canonical scenario text plus the seed; identifies which
/// scenario/seed produced a result row.
inline std::string scenario_fingerprint(const ScenarioConfig &cfg, std::uint64_t seed)
{
    const std::string text = format_scenario(cfg) + "|seed=" + std::to_string(seed);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char c : text)
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// A harvested-power estimate with its uncertainty. Monte Carlo results carry
/// the trial count and a standard error (absent for a single trial);
/// quadrature results carry trials = 0 and no standard error.
struct PowerEstimate
{
    double mean = 0.0; ///< W
    std::optional<double> std_error; ///< W
    std::uint64_t trials = 0;
    EstimateMethod method = EstimateMethod::monte_carlo;
    std::string fingerprint;
};

} // namespace retrowpt
