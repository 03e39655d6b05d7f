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

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "json.hpp"

#include "retrowpt/experiments.hpp"

using namespace retrowpt;
using Catch::Matchers::WithinRel;

namespace {

ScenarioConfig small_cfg()
{
    ScenarioConfig cfg;
    cfg.M = 50;
    cfg.Ns = 20;
    return cfg;
}

} // namespace

TEST_CASE("noise-free trial beamforms perfectly")
{
    ScenarioConfig cfg = small_cfg();
    cfg.sigma_n2 = 0.0;
    const std::uint64_t seed = RandomStream::substream_seed(3, 0);
    const PowerSample sample = run_trial(cfg, default_sequence(cfg), seed);

    // replay the trial's channel draw to get |f|^2
    RandomStream rng(seed);
    const ChannelRealization ch = draw_channels(cfg, rng);
    REQUIRE_THAT(sample.q,
                 WithinRel(cfg.zeta * gamma_er_et(cfg) * cfg.Pt * norm_sq(ch.f), 1e-12));
}

TEST_CASE("trials are reproducible and non-negative")
{
    const ScenarioConfig cfg = small_cfg();
    const TrainingSequence seq = default_sequence(cfg);
    for (int i = 0; i < 20; ++i)
    {
        const std::uint64_t seed = RandomStream::substream_seed(9, i);
        const PowerSample a = run_trial(cfg, seq, seed);
        const PowerSample b = run_trial(cfg, seq, seed);
        REQUIRE(a.q == b.q);
        REQUIRE(a.q >= 0.0);
    }
}

TEST_CASE("monte carlo bookkeeping")
{
    const ScenarioConfig cfg = small_cfg();
    const TrainingSequence seq = default_sequence(cfg);

    SECTION("a single trial has no standard error")
    {
        const PowerEstimate est = monte_carlo(cfg, seq, 1, 5);
        REQUIRE(est.trials == 1);
        REQUIRE_FALSE(est.std_error.has_value());
    }
    SECTION("standard error shrinks like one over root trials")
    {
        const PowerEstimate half = monte_carlo(cfg, seq, 1000, 5);
        const PowerEstimate full = monte_carlo(cfg, seq, 2000, 6);
        const double ratio = *full.std_error / *half.std_error;
        REQUIRE(ratio > 0.8 / std::sqrt(2.0));
        REQUIRE(ratio < 1.2 / std::sqrt(2.0));
    }
    SECTION("zero trials are rejected")
    {
        REQUIRE_THROWS_AS(monte_carlo(cfg, seq, 0, 5), std::invalid_argument);
    }
}

TEST_CASE("estimates are byte-identical across worker counts")
{
    const ScenarioConfig cfg = small_cfg();
    const TrainingSequence seq = default_sequence(cfg);
    const PowerEstimate serial = monte_carlo(cfg, seq, 500, 12, 1);
    for (const unsigned threads : {2u, 4u, 7u})
    {
        const PowerEstimate parallel = monte_carlo(cfg, seq, 500, 12, threads);
        REQUIRE(serial.mean == parallel.mean);
        REQUIRE(*serial.std_error == *parallel.std_error);
        REQUIRE(to_csv(single_row_table("T_b", cfg.Tb(), serial, 12)) ==
                to_csv(single_row_table("T_b", cfg.Tb(), parallel, 12)));
    }
}

TEST_CASE("waveform and closed-form pipelines give statistically identical averages")
{
    ScenarioConfig cfg = small_cfg();
    cfg.Ns = 10;
    const TrainingSequence seq = default_sequence(cfg);
    const PowerEstimate closed = monte_carlo(cfg, seq, 400, 21, 4, CorrelatorPath::closed_form);
    const PowerEstimate wave = monte_carlo(cfg, seq, 400, 21, 4, CorrelatorPath::waveform);
    // same channel/frame substreams, only the noise realisation differs
    const double se = std::hypot(*closed.std_error, *wave.std_error);
    REQUIRE(std::abs(closed.mean - wave.mean) < 2.0 * se);
}

TEST_CASE("the chip rate does not matter once the sequence is balanced")
{
    // closed form: k enters neither the desired term nor the noise scale, so
    // the same master seed gives bit-identical trials
    ScenarioConfig k1 = small_cfg();
    k1.Tc = k1.Ts / 2.0;
    ScenarioConfig k5 = small_cfg();
    k5.Tc = k5.Ts / 10.0;
    const PowerEstimate a = monte_carlo(k1, default_sequence(k1), 300, 33, 2);
    const PowerEstimate b = monte_carlo(k5, default_sequence(k5), 300, 33, 2);
    REQUIRE(a.mean == b.mean);

    // waveform: different chip noise realisations, agreement within 2 SE
    const PowerEstimate wa = monte_carlo(k1, default_sequence(k1), 300, 34, 4,
                                         CorrelatorPath::waveform);
    const PowerEstimate wb = monte_carlo(k5, default_sequence(k5), 300, 34, 4,
                                         CorrelatorPath::waveform);
    REQUIRE(std::abs(wa.mean - wb.mean) < 2.0 * std::hypot(*wa.std_error, *wb.std_error));
}

TEST_CASE("baseline without training harvests a few hundred nanowatts")
{
    ScenarioConfig cfg;
    cfg.M = 500;
    cfg.Ns = 100;
    const PowerEstimate base = no_training_baseline(cfg, 2000, 41, 4);
    // the unmatched field has power zeta*g2*Pt = 0.2795 uW
    REQUIRE_THAT(base.mean, WithinRel(cfg.zeta * gamma_er_et(cfg) * cfg.Pt, 0.10));

    const PowerEstimate trained = monte_carlo(cfg, default_sequence(cfg), 2000, 41, 4);
    REQUIRE(trained.mean / base.mean > 100.0);
}

TEST_CASE("backscatter-duration sweep")
{
    ScenarioConfig cfg;
    cfg.M = 64; // keep the unit test quick; full size runs in the acceptance suite
    const SweepResult sweep = sweep_tb(cfg, {0.25e-3, 0.5e-3, 1.0e-3}, 400, 55, 4);

    REQUIRE(sweep.axis == "T_b");
    REQUIRE(sweep.monte_carlo.size() == 3);
    REQUIRE(sweep.quadrature.size() == 3);

    SECTION("quadrature column is exactly constant")
    {
        REQUIRE(sweep.quadrature[0].mean == sweep.quadrature[1].mean);
        REQUIRE(sweep.quadrature[0].mean == sweep.quadrature[2].mean);
    }
    SECTION("monte carlo means are flat within statistical error")
    {
        for (std::size_t i = 1; i < 3; ++i)
        {
            const double se = std::hypot(*sweep.monte_carlo[0].std_error,
                                         *sweep.monte_carlo[i].std_error);
            REQUIRE(std::abs(sweep.monte_carlo[i].mean - sweep.monte_carlo[0].mean) < 3.0 * se);
        }
    }
    SECTION("non-multiple durations are rejected")
    {
        // 0.333 ms is 66.6 ambient symbols of 5 us
        REQUIRE_THROWS_AS(sweep_tb(cfg, {0.333e-3}, 10, 1), std::invalid_argument);
    }
}

TEST_CASE("antenna-count sweep increases with M")
{
    ScenarioConfig cfg;
    cfg.Ns = 20;
    const SweepResult sweep = sweep_m(cfg, {25, 50, 100}, 400, 66, 4);
    REQUIRE(sweep.axis == "M");
    REQUIRE(sweep.quadrature[0].mean < sweep.quadrature[1].mean);
    REQUIRE(sweep.quadrature[1].mean < sweep.quadrature[2].mean);
    REQUIRE_THROWS_AS(sweep_m(cfg, {0}, 10, 1), std::invalid_argument);
}

TEST_CASE("CSV layout and JSON mirror")
{
    ScenarioConfig cfg = small_cfg();
    const SweepResult sweep = sweep_m(cfg, {10, 20}, 50, 77, 2);
    const ResultTable table = to_table(sweep, 77);
    const std::string csv = to_csv(table);

    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    REQUIRE(line == "axis_value,method,mean_W,mean_uW,std_error_W,trials,seed");
    int rows = 0;
    while (std::getline(lines, line))
    {
        ++rows;
        REQUIRE(std::count(line.begin(), line.end(), ',') == 6);
    }
    REQUIRE(rows == 4); // two points, two methods each
    // quadrature rows have an empty std_error field
    REQUIRE(csv.find("quadrature") != std::string::npos);

    const auto doc = nlohmann::json::parse(to_json_string(table));
    REQUIRE(doc["axis"] == "M");
    REQUIRE(doc["seed"] == 77);
    REQUIRE(doc["rows"].size() == 4);
    REQUIRE(doc["rows"][0]["method"] == "monte-carlo");
    REQUIRE(doc["rows"][1]["method"] == "quadrature");
    REQUIRE(doc["rows"][1]["std_error_W"].is_null());
    REQUIRE(doc["rows"][0]["mean_W"].get<double>() == sweep.monte_carlo[0].mean);
    REQUIRE_FALSE(doc["rows"][0]["fingerprint"].get<std::string>().empty());
}

TEST_CASE("fingerprints depend on the scenario and the seed")
{
    const ScenarioConfig cfg = small_cfg();
    ScenarioConfig other = cfg;
    other.M += 1;
    REQUIRE(scenario_fingerprint(cfg, 1) != scenario_fingerprint(other, 1));
    REQUIRE(scenario_fingerprint(cfg, 1) != scenario_fingerprint(cfg, 2));
    REQUIRE(scenario_fingerprint(cfg, 1) == scenario_fingerprint(cfg, 1));
}
