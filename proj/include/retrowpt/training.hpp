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

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "retrowpt/channel.hpp"
#include "retrowpt/rng.hpp"

namespace retrowpt {

/// Backscatter training sequence: the +/-1 chip pattern applied to the
/// reflection coefficient while the receiver backscatters Ns ambient symbols.
///
/// Chips are signed integers because they multiply complex samples directly;
/// per-symbol chip sums are then exact, so a balanced block cancels to an
/// exact zero rather than a rounding residue.
struct TrainingSequence
{
    std::vector<int> chips; ///< entries +1 or -1, length Nc
    double Tc = 0.0;        ///< chip duration (s); descriptive metadata
    int Ns = 0;             ///< ambient symbols covered

    int chips_per_symbol() const { return static_cast<int>(chips.size()) / Ns; }
};

/// Outcome of checking the per-symbol balance rule. A structural defect
/// (chip count not divisible by Ns, or a chip outside {+1, -1}) is reported
/// separately from a plain balance failure.
struct SequenceValidation
{
    bool structure_ok = false;
    bool balanced = false;
    std::vector<int> symbol_sums; ///< per-symbol chip sums; all zero iff balanced
    std::string error;            ///< set when structure_ok is false

    bool valid() const { return structure_ok && balanced; }
};

/// A sequence is valid when every ambient symbol sees equally many +1 and -1
/// chips; the per-symbol chip sums then vanish and the direct ambient
/// component at the correlator output cancels exactly.
inline SequenceValidation validate_design_criterion(const TrainingSequence &seq)
{
    SequenceValidation report;
    if (seq.Ns < 1)
    {
        report.error = "sequence covers no ambient symbols (Ns < 1)";
        return report;
    }
    if (seq.chips.empty() || seq.chips.size() % static_cast<std::size_t>(seq.Ns) != 0)
    {
        report.error = "chip count " + std::to_string(seq.chips.size()) +
                       " is not a positive multiple of Ns = " + std::to_string(seq.Ns);
        return report;
    }
    for (const int c : seq.chips)
    {
        if (c != 1 && c != -1)
        {
            report.error = "chip value " + std::to_string(c) + " is not +1 or -1";
            return report;
        }
    }
    report.structure_ok = true;

    const int block = seq.chips_per_symbol();
    report.symbol_sums.resize(seq.Ns);
    report.balanced = true;
    for (int i = 0; i < seq.Ns; ++i)
    {
        int sum = 0;
        for (int n = 0; n < block; ++n)
            sum += seq.chips[static_cast<std::size_t>(i) * block + n];
        report.symbol_sums[i] = sum;
        if (sum != 0)
            report.balanced = false;
    }
    return report;
}

/// The slowest-switching valid sequence: per symbol, k chips at +1 followed by
/// k chips at -1 (k = 1 switches the coefficient just twice per symbol).
inline TrainingSequence minimal_sequence(int Ns, int k = 1, double tc = 0.0)
{
    if (Ns < 1 || k < 1)
        throw std::invalid_argument("minimal_sequence: Ns and k must be at least 1");
    TrainingSequence seq;
    seq.Ns = Ns;
    seq.Tc = tc;
    seq.chips.reserve(static_cast<std::size_t>(2) * k * Ns);
    for (int i = 0; i < Ns; ++i)
    {
        for (int n = 0; n < k; ++n)
            seq.chips.push_back(+1);
        for (int n = 0; n < k; ++n)
            seq.chips.push_back(-1);
    }
    return seq;
}

/// A valid sequence with each symbol block an independent uniformly random
/// permutation of k (+1)s and k (-1)s.
inline TrainingSequence random_balanced_sequence(int Ns, int k, RandomStream &rng, double tc = 0.0)
{
    TrainingSequence seq = minimal_sequence(Ns, k, tc);
    const int block = 2 * k;
    for (int i = 0; i < Ns; ++i)
    {
        int *b = seq.chips.data() + static_cast<std::size_t>(i) * block;
        for (int n = block - 1; n > 0; --n)
            std::swap(b[n], b[rng.below(static_cast<std::uint64_t>(n) + 1)]);
    }
    return seq;
}

/// Fixed reflection coefficient (+1 throughout): the no-training baseline.
/// Deliberately fails the design criterion; every block is fully unbalanced.
inline TrainingSequence constant_sequence(int Ns, int k, double tc = 0.0)
{
    if (Ns < 1 || k < 1)
        throw std::invalid_argument("constant_sequence: Ns and k must be at least 1");
    TrainingSequence seq;
    seq.Ns = Ns;
    seq.Tc = tc;
    seq.chips.assign(static_cast<std::size_t>(2) * k * Ns, +1);
    return seq;
}

/// The sequence used by default in every pipeline: minimal switching with the
/// k implied by the scenario timing, k = Ts/(2*Tc).
inline TrainingSequence default_sequence(const ScenarioConfig &cfg)
{
    return minimal_sequence(cfg.Ns, cfg.half_chips_per_symbol(), cfg.Tc);
}

inline std::string format_chips(const TrainingSequence &seq)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < seq.chips.size(); ++i)
    {
        if (i)
            out << ' ';
        out << (seq.chips[i] > 0 ? "+1" : "-1");
    }
    return out.str();
}

/// Parse a whitespace-separated line of +1/-1 tokens (as accepted by the CLI
/// `validate-seq` subcommand). Throws on any other token.
inline TrainingSequence parse_chips(const std::string &text, int Ns, double tc = 0.0)
{
    TrainingSequence seq;
    seq.Ns = Ns;
    seq.Tc = tc;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok)
    {
        if (tok == "+1" || tok == "1")
            seq.chips.push_back(+1);
        else if (tok == "-1")
            seq.chips.push_back(-1);
        else
            throw std::invalid_argument("chip token '" + tok + "' is not +1 or -1");
    }
    return seq;
}

} // namespace retrowpt
