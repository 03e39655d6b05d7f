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

#include <algorithm>

#include "retrowpt/power_transfer.hpp"

using namespace retrowpt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("retrodirective beam conjugates and meets the power budget")
{
    SECTION("real unit vector is self-conjugate")
    {
        cvec x_r(8, cxd{0.0, 0.0});
        x_r[0] = 1.0;
        const cvec x_t = retrodirective_beam(x_r, 1.0);
        REQUIRE(x_t[0] == cxd{1.0, 0.0});
        for (std::size_t j = 1; j < x_t.size(); ++j)
            REQUIRE(x_t[j] == cxd{0.0, 0.0});
    }
    SECTION("imaginary entry flips sign and scales")
    {
        cvec x_r(4, cxd{0.0, 0.0});
        x_r[0] = cxd{0.0, 1.0};
        const cvec x_t = retrodirective_beam(x_r, 4.0);
        REQUIRE_THAT(std::abs(x_t[0] - cxd{0.0, -2.0}), WithinAbs(0.0, 1e-15));
    }
    SECTION("norm-squared equals Pt for random inputs")
    {
        RandomStream rng(61);
        for (int i = 0; i < 100; ++i)
        {
            cvec x_r(16);
            for (auto &x : x_r)
                x = rng.complex_normal();
            const double pt = 0.1 + 10.0 * rng.uniform();
            REQUIRE_THAT(norm_sq(retrodirective_beam(x_r, pt)), WithinRel(pt, 1e-12));
        }
    }
    SECTION("zero input is degenerate")
    {
        REQUIRE_THROWS_AS(retrodirective_beam(cvec(4, cxd{0.0, 0.0}), 1.0), std::domain_error);
    }
}

TEST_CASE("harvested power at the receiver")
{
    ScenarioConfig cfg;
    cfg.M = 500;
    RandomStream rng(62);
    ChannelRealization ch = draw_channels(cfg, rng);

    SECTION("perfectly matched beam attains zeta*g2*Pt*|f|^2")
    {
        // retrodirective_beam conjugates, so receiving f itself aligns the beam
        const cvec x_t = retrodirective_beam(ch.f, cfg.Pt);
        const PowerSample s = harvested_power(ch, x_t, cfg);
        REQUIRE_THAT(s.q, WithinRel(cfg.zeta * gamma_er_et(cfg) * cfg.Pt * norm_sq(ch.f), 1e-12));
    }
    SECTION("orthogonal beam harvests nothing")
    {
        ch.f.assign(cfg.M, cxd{0.0, 0.0});
        ch.f[0] = 1.0;
        cvec x_t(cfg.M, cxd{0.0, 0.0});
        x_t[1] = 1.0;
        REQUIRE(harvested_power(ch, x_t, cfg).q == 0.0);
    }
    SECTION("matched-beam scale for the default scenario")
    {
        // zeta=0.5, g2=5.5902e-7, Pt=1, |f|^2 = M = 500  ->  ~1.3975e-4 W
        ch.f.assign(cfg.M, cxd{1.0, 0.0});
        const cvec x_t = retrodirective_beam(ch.f, cfg.Pt);
        REQUIRE_THAT(harvested_power(ch, x_t, cfg).q, WithinRel(1.3975e-4, 1e-4));
    }
    SECTION("dimension mismatch is rejected")
    {
        REQUIRE_THROWS_AS(harvested_power(ch, cvec(3, cxd{1.0, 0.0}), cfg),
                          std::invalid_argument);
    }
}

TEST_CASE("mu is the squared magnitude of the symbol sum")
{
    AmbientFrame frame;
    frame.Ps = 1.0;
    frame.Ts = 5e-6;
    frame.symbols = {cxd{1.0, 0.0}, cxd{0.0, 1.0}};
    REQUIRE_THAT(mu(frame), WithinRel(2.0, 1e-15));
    frame.symbols = {cxd{1.0, 0.0}, cxd{-1.0, 0.0}};
    REQUIRE(mu(frame) == 0.0);
}

TEST_CASE("mu is exponential with mean Ns")
{
    ScenarioConfig cfg;
    cfg.Ns = 10;
    RandomStream rng(63);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += mu(draw_ambient_frame(cfg, rng));
    REQUIRE_THAT(sum / n, WithinRel(10.0, 0.02));
}

TEST_CASE("asymptotic power formula limits and monotonicity")
{
    ScenarioConfig cfg;
    const double front = cfg.zeta * gamma_er_et(cfg) * cfg.Pt;
    const double top = front * (cfg.M + 1.0);

    SECTION("noise-free limit saturates at zeta*g2*Pt*(M+1)")
    {
        ScenarioConfig noise_free = cfg;
        noise_free.sigma_n2 = 0.0;
        REQUIRE_THAT(asymptotic_q(noise_free, 1.0, 1.0).q, WithinRel(top, 1e-12));
        REQUIRE_THAT(asymptotic_q(noise_free, 0.0, 0.0).q, WithinRel(top, 1e-12));
        // huge signal with noise present approaches the same ceiling
        REQUIRE_THAT(asymptotic_q(cfg, 1e12, 1e12).q, WithinRel(top, 1e-3));
    }
    SECTION("faded-out receiver gets the unmatched field")
    {
        REQUIRE_THAT(asymptotic_q(cfg, 0.0, 5.0).q, WithinRel(front, 1e-12));
    }
    SECTION("monotone increasing in the signal product, within the bounds")
    {
        double previous = 0.0;
        for (const double zm : {0.01, 0.1, 1.0, 10.0, 100.0, 1e4})
        {
            const double q = asymptotic_q(cfg, 1.0, zm).q;
            REQUIRE(q > previous);
            REQUIRE(q >= front);
            REQUIRE(q <= top);
            previous = q;
        }
    }
    SECTION("depends only on the ratio of signal product to noise parameter")
    {
        // scaling (g_abs2*mu, a) by c is the same as scaling sigma_n2 down by c
        ScenarioConfig scaled = cfg;
        scaled.sigma_n2 = cfg.sigma_n2 / 8.0;
        REQUIRE_THAT(asymptotic_q(cfg, 2.0, 4.0).q,
                     WithinRel(asymptotic_q(scaled, 1.0, 1.0).q, 1e-12));
    }
    SECTION("negative inputs are rejected")
    {
        REQUIRE_THROWS_AS(asymptotic_q(cfg, -1.0, 1.0), std::domain_error);
        REQUIRE_THROWS_AS(asymptotic_q(cfg, 1.0, -1.0), std::domain_error);
    }
}

TEST_CASE("harvested power never exceeds the beamforming bound")
{
    ScenarioConfig cfg;
    cfg.M = 32;
    RandomStream rng(68);
    for (int i = 0; i < 200; ++i)
    {
        const ChannelRealization ch = draw_channels(cfg, rng);
        cvec x_r(cfg.M);
        for (auto &x : x_r)
            x = rng.complex_normal();
        const double q = harvested_power(ch, retrodirective_beam(x_r, cfg.Pt), cfg).q;
        REQUIRE(q >= 0.0);
        REQUIRE(q <= cfg.zeta * gamma_er_et(cfg) * cfg.Pt * norm_sq(ch.f) * (1.0 + 1e-12));
    }
}

TEST_CASE("pipeline power approaches the asymptotic formula as M grows")
{
    // Fixed draws reused across M by taking prefixes of the M = 2000 vectors;
    // the median relative gap must shrink with M and be within 5% at M = 500.
    ScenarioConfig big;
    big.M = 2000;
    big.Ns = 100;
    const TrainingSequence seq_template = default_sequence(big);
    const std::vector<int> m_values{50, 200, 500, 2000};

    const int trials = 201;
    std::vector<std::vector<double>> gaps(m_values.size());
    for (int t = 0; t < trials; ++t)
    {
        RandomStream rng = RandomStream::for_trial(607, t);
        const ChannelRealization ch = draw_channels(big, rng);
        const AmbientFrame frame = draw_ambient_frame(big, rng);
        const double noise_sd = correlator_noise_sd(big, frame);
        cvec n_tilde(big.M);
        for (auto &x : n_tilde)
            x = noise_sd * rng.complex_normal();

        for (std::size_t mi = 0; mi < m_values.size(); ++mi)
        {
            ScenarioConfig cfg = big;
            cfg.M = m_values[mi];
            ChannelRealization prefix;
            prefix.g = ch.g;
            prefix.f.assign(ch.f.begin(), ch.f.begin() + cfg.M);
            prefix.h.assign(ch.h.begin(), ch.h.begin() + cfg.M);
            const cvec noise(n_tilde.begin(), n_tilde.begin() + cfg.M);

            const CorrelatorOutput corr =
                correlate_closed_form(cfg, prefix, frame, seq_template, noise);
            const double q_pipe =
                harvested_power(prefix, retrodirective_beam(corr.x_r, cfg.Pt), cfg).q;
            const double q_asym = asymptotic_q(cfg, std::norm(ch.g), mu(frame)).q;
            gaps[mi].push_back(std::abs(q_pipe - q_asym) / q_asym);
        }
    }

    std::vector<double> medians;
    for (auto &g : gaps)
    {
        std::nth_element(g.begin(), g.begin() + trials / 2, g.end());
        medians.push_back(g[trials / 2]);
    }
    for (std::size_t i = 1; i < medians.size(); ++i)
        REQUIRE(medians[i] < medians[i - 1]);
    REQUIRE(medians[2] <= 0.05); // M = 500
}

TEST_CASE("component breakdown is consistent with the plain pipeline")
{
    ScenarioConfig cfg;
    cfg.M = 64;
    cfg.Ns = 10;
    const TrainingSequence seq = default_sequence(cfg);

    double beam_total = 0.0, noise_total = 0.0;
    for (int t = 0; t < 200; ++t)
    {
        RandomStream rng = RandomStream::for_trial(65, t);
        const ChannelRealization ch = draw_channels(cfg, rng);
        const AmbientFrame frame = draw_ambient_frame(cfg, rng);
        const CorrelatorOutput corr = correlate_closed_form(cfg, ch, frame, seq, rng);

        const PowerSample plain = harvested_power(ch, retrodirective_beam(corr.x_r, cfg.Pt), cfg);
        const PowerSample split = harvested_power_components(ch, corr, cfg);
        REQUIRE_THAT(split.q, WithinRel(plain.q, 1e-10));
        REQUIRE(split.components.has_value());
        // valid sequence: no leakage component at all
        REQUIRE(split.components->leakage == 0.0);
        beam_total += split.components->beamformed;
        noise_total += split.components->noise;
    }
    // individual deep fades can be noise-dominated; on average the beam wins
    REQUIRE(beam_total > 10.0 * noise_total);
}
