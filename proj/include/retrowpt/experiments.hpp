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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "retrowpt/analysis.hpp"
#include "retrowpt/channel.hpp"
#include "retrowpt/correlator.hpp"
#include "retrowpt/estimate.hpp"
#include "retrowpt/power_transfer.hpp"
#include "retrowpt/training.hpp"

namespace retrowpt {

enum class CorrelatorPath
{
    closed_form, ///< production default; same output as the waveform path
    waveform     ///< chip-resolution simulation; kept for equivalence checks
};

struct TrialOptions
{
    CorrelatorPath path = CorrelatorPath::closed_form;
    bool with_components = false;
};

/// One full pipeline pass: draw channels and an ambient frame, correlate at
/// the energy transmitter, beamform back, harvest at the energy receiver.
/// The trial seed fixes every draw, so a trial replays bit-identically.
inline PowerSample run_trial(const ScenarioConfig &cfg, const TrainingSequence &seq,
                             std::uint64_t trial_seed, const TrialOptions &options = {})
{
    RandomStream rng(trial_seed);
    const ChannelRealization ch = draw_channels(cfg, rng);
    const AmbientFrame frame = draw_ambient_frame(cfg, rng);
    const CorrelatorOutput corr = options.path == CorrelatorPath::closed_form
                                      ? correlate_closed_form(cfg, ch, frame, seq, rng)
                                      : correlate_waveform(cfg, ch, frame, seq, rng);
    if (options.with_components)
        return harvested_power_components(ch, corr, cfg);
    const cvec x_t = retrodirective_beam(corr.x_r, cfg.Pt);
    return harvested_power(ch, x_t, cfg);
}

namespace detail {

template <typename Body>
void parallel_indices(std::uint64_t count, unsigned threads, Body &&body)
{
    threads = std::max(1u, threads);
    if (count < threads)
        threads = static_cast<unsigned>(std::max<std::uint64_t>(1, count));
    if (threads == 1)
    {
        for (std::uint64_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
    {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&, begin, end]() {
            try
            {
                for (std::uint64_t i = begin; i < end; ++i)
                    body(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto &worker : pool)
        worker.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

// Neumaier-compensated sum in a fixed (index) order; together with the
// per-trial substreams this makes the estimate independent of the worker
// count, byte for byte.
inline double compensated_sum(const std::vector<double> &values)
{
    double sum = 0.0, compensation = 0.0;
    for (const double v : values)
    {
        const double t = sum + v;
        compensation += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + compensation;
}

} // namespace detail

/// Monte Carlo estimate of the average harvested power over independent
/// quasi-static blocks. Trial i draws from substream_seed(master_seed, i),
/// so the result does not depend on scheduling or the number of workers.
inline PowerEstimate monte_carlo(const ScenarioConfig &cfg, const TrainingSequence &seq,
                                 std::uint64_t trials, std::uint64_t master_seed,
                                 unsigned threads = 1,
                                 CorrelatorPath path = CorrelatorPath::closed_form)
{
    if (trials < 1)
        throw std::invalid_argument("monte_carlo: need at least one trial");
    cfg.validate();

    std::vector<double> q(trials);
    TrialOptions options;
    options.path = path;
    detail::parallel_indices(trials, threads, [&](std::uint64_t i) {
        q[i] = run_trial(cfg, seq, RandomStream::substream_seed(master_seed, i), options).q;
    });

    PowerEstimate est;
    est.mean = detail::compensated_sum(q) / static_cast<double>(trials);
    if (trials >= 2)
    {
        std::vector<double> sq(trials);
        for (std::uint64_t i = 0; i < trials; ++i)
        {
            const double d = q[i] - est.mean;
            sq[i] = d * d;
        }
        const double var = detail::compensated_sum(sq) / static_cast<double>(trials - 1);
        est.std_error = std::sqrt(var / static_cast<double>(trials));
    }
    est.trials = trials;
    est.method = EstimateMethod::monte_carlo;
    est.fingerprint = scenario_fingerprint(cfg, master_seed);
    return est;
}

/// Baseline without backscatter training: the reflection coefficient stays at
/// +1, the correlator degenerates to plain time-averaging, and the beam locks
/// onto the dominant direct ambient path instead of the receiver.
inline PowerEstimate no_training_baseline(const ScenarioConfig &cfg, std::uint64_t trials,
                                          std::uint64_t master_seed, unsigned threads = 1)
{
    return monte_carlo(cfg, constant_sequence(cfg.Ns, cfg.half_chips_per_symbol(), cfg.Tc),
                       trials, master_seed, threads);
}

/// One swept axis with a Monte Carlo and a quadrature estimate per point.
struct SweepResult
{
    std::string axis;
    std::vector<double> values;
    std::vector<PowerEstimate> monte_carlo;
    std::vector<PowerEstimate> quadrature;
};

namespace detail {

// Sweep points get decorrelated master seeds well away from the per-trial
// substream indices.
inline std::uint64_t point_seed(std::uint64_t master_seed, std::size_t point)
{
    return RandomStream::substream_seed(master_seed, (1ull << 32) + point);
}

} // namespace detail

/// Average power versus backscatter-phase duration. Every T_b must be an
/// integer multiple of Ts. The quadrature value does not involve T_b at all,
/// so it is computed once and replicated: that column is constant by
/// construction.
inline SweepResult sweep_tb(const ScenarioConfig &cfg, const std::vector<double> &tb_values,
                            std::uint64_t trials, std::uint64_t master_seed, unsigned threads = 1,
                            const QuadratureSpec &quad = {})
{
    SweepResult result;
    result.axis = "T_b";
    result.values = tb_values;

    const PowerEstimate analytic = average_q_quadrature(cfg, quad);
    for (std::size_t p = 0; p < tb_values.size(); ++p)
    {
        const double ratio = tb_values[p] / cfg.Ts;
        const long long ns = std::llround(ratio);
        if (ns < 1 || std::abs(ratio - static_cast<double>(ns)) > 1e-9 * ratio)
            throw std::invalid_argument("sweep_tb: T_b = " + std::to_string(tb_values[p]) +
                                        " is not an integer multiple of Ts");
        ScenarioConfig point_cfg = cfg;
        point_cfg.Ns = static_cast<int>(ns);
        result.monte_carlo.push_back(monte_carlo(point_cfg, default_sequence(point_cfg), trials,
                                                 detail::point_seed(master_seed, p), threads));
        result.quadrature.push_back(analytic);
    }
    return result;
}

/// Average power versus the antenna count at the energy transmitter.
inline SweepResult sweep_m(const ScenarioConfig &cfg, const std::vector<int> &m_values,
                           std::uint64_t trials, std::uint64_t master_seed, unsigned threads = 1,
                           const QuadratureSpec &quad = {})
{
    SweepResult result;
    result.axis = "M";
    for (std::size_t p = 0; p < m_values.size(); ++p)
    {
        if (m_values[p] < 1)
            throw std::invalid_argument("sweep_m: M must be at least 1");
        ScenarioConfig point_cfg = cfg;
        point_cfg.M = m_values[p];
        result.values.push_back(static_cast<double>(m_values[p]));
        result.monte_carlo.push_back(monte_carlo(point_cfg, default_sequence(point_cfg), trials,
                                                 detail::point_seed(master_seed, p), threads));
        result.quadrature.push_back(average_q_quadrature(point_cfg, quad));
    }
    return result;
}

/// Flat row layout shared by the CSV file and its JSON mirror.
struct ResultTable
{
    struct Row
    {
        double axis_value;
        PowerEstimate estimate;
    };

    std::string axis;
    std::vector<Row> rows;
    std::uint64_t seed = 0;
};

inline ResultTable to_table(const SweepResult &sweep, std::uint64_t seed)
{
    ResultTable table;
    table.axis = sweep.axis;
    table.seed = seed;
    for (std::size_t p = 0; p < sweep.values.size(); ++p)
    {
        table.rows.push_back({sweep.values[p], sweep.monte_carlo[p]});
        if (p < sweep.quadrature.size())
            table.rows.push_back({sweep.values[p], sweep.quadrature[p]});
    }
    return table;
}

inline ResultTable single_row_table(const std::string &axis, double value,
                                    const PowerEstimate &estimate, std::uint64_t seed)
{
    ResultTable table;
    table.axis = axis;
    table.seed = seed;
    table.rows.push_back({value, estimate});
    return table;
}

/// CSV with the fixed column set
/// axis_value,method,mean_W,mean_uW,std_error_W,trials,seed.
/// Full-precision %.17g keeps reruns byte-identical.
inline std::string to_csv(const ResultTable &table)
{
    std::string out = "axis_value,method,mean_W,mean_uW,std_error_W,trials,seed\n";
    for (const auto &row : table.rows)
    {
        out += detail::format_double(row.axis_value);
        out += ',';
        out += method_name(row.estimate.method);
        out += ',';
        out += detail::format_double(row.estimate.mean);
        out += ',';
        out += detail::format_double(row.estimate.mean * 1e6);
        out += ',';
        if (row.estimate.std_error)
            out += detail::format_double(*row.estimate.std_error);
        out += ',';
        out += std::to_string(row.estimate.trials);
        out += ',';
        out += std::to_string(table.seed);
        out += '\n';
    }
    return out;
}

/// JSON mirror of the CSV rows, plus per-row scenario fingerprints.
inline std::string to_json_string(const ResultTable &table)
{
    nlohmann::ordered_json doc;
    doc["axis"] = table.axis;
    doc["seed"] = table.seed;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto &row : table.rows)
    {
        nlohmann::ordered_json j;
        j["axis_value"] = row.axis_value;
        j["method"] = method_name(row.estimate.method);
        j["mean_W"] = row.estimate.mean;
        j["mean_uW"] = row.estimate.mean * 1e6;
        if (row.estimate.std_error)
            j["std_error_W"] = *row.estimate.std_error;
        else
            j["std_error_W"] = nullptr;
        j["trials"] = row.estimate.trials;
        j["fingerprint"] = row.estimate.fingerprint;
        doc["rows"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

} // namespace retrowpt
