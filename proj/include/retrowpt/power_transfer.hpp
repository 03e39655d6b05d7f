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
#include <optional>
#include <stdexcept>

#include "retrowpt/channel.hpp"
#include "retrowpt/complex_vec.hpp"
#include "retrowpt/correlator.hpp"

namespace retrowpt {

/// Instantaneous harvested power at the energy receiver (W), optionally with
/// a diagnostic split of the received field into the retrodirected
/// backscatter beam, the ambient-leakage direction and the noise direction.
struct PowerSample
{
    double q = 0.0;

    struct Components
    {
        double beamformed = 0.0;
        double leakage = 0.0;
        double noise = 0.0;
    };
    std::optional<Components> components;
};

/// Retrodirective transmit vector: conjugate the received vector and scale to
/// the total power budget, x_t = sqrt(Pt) * conj(x_r)/||x_r||.
inline cvec retrodirective_beam(const cvec &x_r, double Pt)
{
    const double nrm = norm(x_r);
    if (!(nrm > 0.0))
        throw std::domain_error("retrodirective_beam: received vector has zero norm");
    const double scale = std::sqrt(Pt) / nrm;
    cvec x_t(x_r.size());
    for (std::size_t j = 0; j < x_r.size(); ++j)
        x_t[j] = scale * std::conj(x_r[j]);
    return x_t;
}

/// Power harvested from the beam: r = sqrt(g2) * fᵀ x_t, q = zeta*|r|².
/// Receiver noise is irrelevant to harvesting and not modelled here.
inline PowerSample harvested_power(const ChannelRealization &ch, const cvec &x_t,
                                   const ScenarioConfig &cfg)
{
    if (x_t.size() != ch.f.size())
        throw std::invalid_argument("harvested_power: transmit vector length does not match M");
    const cxd r = std::sqrt(gamma_er_et(cfg)) * dot_unconjugated(ch.f, x_t);
    PowerSample sample;
    sample.q = cfg.zeta * std::norm(r);
    return sample;
}

/// Same harvested power, but computed from the correlator decomposition so the
/// received field splits into beamformed / leakage / noise parts (the three
/// terms share the 1/||x_r|| normalisation, so their amplitudes add coherently
/// and the component powers need not sum to q).
inline PowerSample harvested_power_components(const ChannelRealization &ch,
                                              const CorrelatorOutput &corr,
                                              const ScenarioConfig &cfg)
{
    const double nrm = norm(corr.x_r);
    if (!(nrm > 0.0))
        throw std::domain_error("harvested_power_components: received vector has zero norm");
    const double amp = std::sqrt(gamma_er_et(cfg) * cfg.Pt) / nrm;

    auto term = [&](const cvec &part) {
        cxd s{0.0, 0.0};
        for (std::size_t j = 0; j < part.size(); ++j)
            s += ch.f[j] * std::conj(part[j]);
        return amp * s;
    };
    const cxd r_beam = term(corr.x_s);
    const cxd r_leak = term(corr.x_i);
    const cxd r_noise = term(corr.n_tilde);

    PowerSample sample;
    sample.q = cfg.zeta * std::norm(r_beam + r_leak + r_noise);
    sample.components = PowerSample::Components{cfg.zeta * std::norm(r_beam),
                                                cfg.zeta * std::norm(r_leak),
                                                cfg.zeta * std::norm(r_noise)};
    return sample;
}

/// mu = |sum_i s_i|², exponentially distributed with mean Ns.
inline double mu(const AmbientFrame &frame)
{
    cxd s{0.0, 0.0};
    for (const auto &x : frame.symbols)
        s += x;
    return std::norm(s);
}

/// Large-array limit of the instantaneous harvested power for a valid
/// training sequence:
///
///   q = zeta*g2*Pt * (g1*g2*|g|²*mu*(M+1) + a) / (g1*g2*|g|²*mu + a),
///   a = sigma_n2*Ns/(Ts*Ps).
///
/// Treated as a finite-M approximation; its error is quantified empirically
/// by the test suite rather than assumed away.
inline PowerSample asymptotic_q(const ScenarioConfig &cfg, double g_abs2, double mu_value)
{
    if (g_abs2 < 0 || mu_value < 0)
        throw std::domain_error("asymptotic_q: |g|^2 and mu must be non-negative");
    const double front = cfg.zeta * gamma_er_et(cfg) * cfg.Pt;
    const double a = cfg.sigma_n2 * static_cast<double>(cfg.Ns) / (cfg.Ts * cfg.Ps);
    const double signal = gamma_as_er(cfg) * gamma_er_et(cfg) * g_abs2 * mu_value;
    const double m1 = static_cast<double>(cfg.M) + 1.0;

    PowerSample sample;
    // noise-free limit: the ratio degenerates to M+1
    sample.q = (signal + a > 0.0) ? front * (signal * m1 + a) / (signal + a) : front * m1;
    return sample;
}

} // namespace retrowpt
