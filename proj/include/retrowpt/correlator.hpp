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

#include <cmath>
#include <stdexcept>

#include "retrowpt/channel.hpp"
#include "retrowpt/complex_vec.hpp"
#include "retrowpt/rng.hpp"
#include "retrowpt/training.hpp"

namespace retrowpt {

/// One backscatter phase worth of ambient symbols, i.i.d. CN(0,1).
struct AmbientFrame
{
    cvec symbols; ///< length Ns
    double Ps;    ///< ambient transmit power (W)
    double Ts;    ///< symbol duration (s)
};

inline AmbientFrame draw_ambient_frame(const ScenarioConfig &cfg, RandomStream &rng)
{
    AmbientFrame frame;
    frame.Ps = cfg.Ps;
    frame.Ts = cfg.Ts;
    frame.symbols.resize(cfg.Ns);
    for (auto &s : frame.symbols)
        s = rng.complex_normal();
    return frame;
}

/// Correlator output at the energy transmitter, decomposed into the desired
/// backscatter term, the residual ambient (interference) term and the
/// filtered noise. x_r is the elementwise sum of the three by construction.
struct CorrelatorOutput
{
    cvec x_s;
    cvec x_i;
    cvec n_tilde;
    cvec x_r;
};

namespace detail {

inline void check_correlator_inputs(const ScenarioConfig &cfg, const ChannelRealization &ch,
                                    const AmbientFrame &frame, const TrainingSequence &seq)
{
    if (ch.f.size() != static_cast<std::size_t>(cfg.M) || ch.h.size() != ch.f.size())
        throw std::invalid_argument("correlator: channel vector length does not match M");
    if (seq.Ns < 1 || frame.symbols.size() != static_cast<std::size_t>(seq.Ns))
        throw std::invalid_argument("correlator: sequence covers " + std::to_string(seq.Ns) +
                                    " symbols but frame has " +
                                    std::to_string(frame.symbols.size()));
    if (seq.chips.empty() || seq.chips.size() % static_cast<std::size_t>(seq.Ns) != 0)
        throw std::invalid_argument("correlator: chip count is not a multiple of Ns");
}

inline CorrelatorOutput assemble(cvec x_s, cvec x_i, cvec n_tilde)
{
    CorrelatorOutput out;
    out.x_r.resize(x_s.size());
    for (std::size_t j = 0; j < x_s.size(); ++j)
        out.x_r[j] = x_s[j] + x_i[j] + n_tilde[j];
    out.x_s = std::move(x_s);
    out.x_i = std::move(x_i);
    out.n_tilde = std::move(n_tilde);
    return out;
}

} // namespace detail

/// Filtered-noise standard deviation per entry: the correlator averages over
/// Nc*Tc = Ns*Ts seconds, so the output noise variance is sigma_n2/(Ns*Ts)
/// regardless of the chip rate.
inline double correlator_noise_sd(const ScenarioConfig &cfg, const AmbientFrame &frame)
{
    return std::sqrt(cfg.sigma_n2 / (static_cast<double>(frame.symbols.size()) * frame.Ts));
}

/// Closed-form correlator output.
///
/// x_s = sqrt(g1*g2*Ps) * (g/Ns) * (sum_i s_i) * f
/// x_i = sqrt(g3*Ps) * (h/Nc) * sum_i s_i * (chip-block sum of symbol i)
///
/// Per-symbol chip sums are integers, so a balanced block contributes an
/// exact zero; n_tilde is supplied by the caller here (the rng overload below
/// draws it from CN(0, sigma_n2/(Ns*Ts) I)).
inline CorrelatorOutput correlate_closed_form(const ScenarioConfig &cfg,
                                              const ChannelRealization &ch,
                                              const AmbientFrame &frame,
                                              const TrainingSequence &seq, cvec n_tilde)
{
    detail::check_correlator_inputs(cfg, ch, frame, seq);
    if (n_tilde.size() != ch.f.size())
        throw std::invalid_argument("correlator: noise vector length does not match M");

    const int Ns = seq.Ns;
    const int block = seq.chips_per_symbol();
    const double Nc = static_cast<double>(seq.chips.size());

    cxd symbol_sum{0.0, 0.0};
    cxd weighted_sum{0.0, 0.0}; // sum_i s_i * (integer block sum of symbol i)
    for (int i = 0; i < Ns; ++i)
    {
        int block_sum = 0;
        for (int n = 0; n < block; ++n)
            block_sum += seq.chips[static_cast<std::size_t>(i) * block + n];
        symbol_sum += frame.symbols[i];
        weighted_sum += frame.symbols[i] * static_cast<double>(block_sum);
    }

    const cxd s_coeff =
        std::sqrt(gamma_as_er(cfg) * gamma_er_et(cfg) * frame.Ps) * ch.g * symbol_sum / static_cast<double>(Ns);
    const cxd i_coeff = std::sqrt(gamma_as_et(cfg) * frame.Ps) * weighted_sum / Nc;

    cvec x_s(ch.f.size()), x_i(ch.h.size());
    for (std::size_t j = 0; j < ch.f.size(); ++j)
    {
        x_s[j] = s_coeff * ch.f[j];
        x_i[j] = i_coeff * ch.h[j];
    }
    return detail::assemble(std::move(x_s), std::move(x_i), std::move(n_tilde));
}

inline CorrelatorOutput correlate_closed_form(const ScenarioConfig &cfg,
                                              const ChannelRealization &ch,
                                              const AmbientFrame &frame,
                                              const TrainingSequence &seq, RandomStream &rng)
{
    const double sd = correlator_noise_sd(cfg, frame);
    cvec n_tilde(ch.f.size());
    for (auto &n : n_tilde)
        n = sd * rng.complex_normal();
    return correlate_closed_form(cfg, ch, frame, seq, std::move(n_tilde));
}

/// Chip-resolution waveform correlator.
///
/// All pulses are rectangular and chip-aligned, so evaluating the correlation
/// integral as a chip sum is exact, not an approximation: each component is
/// (1/Nc) * sum_n c_n * (component sample over chip n). The chip noise samples
/// are integrated AWGN, CN(0, sigma_n2/Tc_chip) each, which reproduces the
/// closed-form output noise statistics after the chip sum.
inline CorrelatorOutput correlate_waveform(const ScenarioConfig &cfg, const ChannelRealization &ch,
                                           const AmbientFrame &frame, const TrainingSequence &seq,
                                           const std::vector<cvec> &chip_noise)
{
    detail::check_correlator_inputs(cfg, ch, frame, seq);
    const std::size_t Nc = seq.chips.size();
    if (chip_noise.size() != Nc)
        throw std::invalid_argument("correlator: expected one noise sample per chip");

    const int block = seq.chips_per_symbol();
    cxd despread_bs{0.0, 0.0}; // sum_n c_n * (c_n * s_{i(n)})
    cxd despread_amb{0.0, 0.0}; // sum_n c_n * s_{i(n)}
    cvec noise_acc(ch.f.size(), cxd{0.0, 0.0});
    for (std::size_t n = 0; n < Nc; ++n)
    {
        const double c = static_cast<double>(seq.chips[n]);
        const cxd s = frame.symbols[n / block];
        despread_bs += c * (c * s);
        despread_amb += c * s;
        const cvec &v = chip_noise[n];
        if (v.size() != ch.f.size())
            throw std::invalid_argument("correlator: chip noise vector length does not match M");
        for (std::size_t j = 0; j < v.size(); ++j)
            noise_acc[j] += c * v[j];
    }

    const double inv_nc = 1.0 / static_cast<double>(Nc);
    const cxd s_coeff =
        std::sqrt(gamma_as_er(cfg) * gamma_er_et(cfg) * frame.Ps) * ch.g * despread_bs * inv_nc;
    const cxd i_coeff = std::sqrt(gamma_as_et(cfg) * frame.Ps) * despread_amb * inv_nc;

    cvec x_s(ch.f.size()), x_i(ch.h.size()), n_tilde(ch.f.size());
    for (std::size_t j = 0; j < ch.f.size(); ++j)
    {
        x_s[j] = s_coeff * ch.f[j];
        x_i[j] = i_coeff * ch.h[j];
        n_tilde[j] = noise_acc[j] * inv_nc;
    }
    return detail::assemble(std::move(x_s), std::move(x_i), std::move(n_tilde));
}

inline CorrelatorOutput correlate_waveform(const ScenarioConfig &cfg, const ChannelRealization &ch,
                                           const AmbientFrame &frame, const TrainingSequence &seq,
                                           RandomStream &rng)
{
    detail::check_correlator_inputs(cfg, ch, frame, seq);
    const std::size_t Nc = seq.chips.size();
    const int block = seq.chips_per_symbol();
    // Effective chip duration of *this* sequence: Nc*Tc_chip = Ns*Ts.
    const double tc_chip = frame.Ts / static_cast<double>(block);
    const double sd = std::sqrt(cfg.sigma_n2 / tc_chip);

    std::vector<cvec> chip_noise(Nc, cvec(ch.f.size()));
    for (auto &v : chip_noise)
        for (auto &x : v)
            x = sd * rng.complex_normal();
    return correlate_waveform(cfg, ch, frame, seq, chip_noise);
}

} // namespace retrowpt
