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
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "retrowpt/complex_vec.hpp"
#include "retrowpt/rng.hpp"

namespace retrowpt {

/// Scenario: geometry, powers, timing and protocol structure.
///
/// All quantities are SI (metres, watts, seconds). The scenario is immutable
/// after construction/loading and safe to share across worker threads.
struct ScenarioConfig
{
    double d0 = 1.0;        ///< reference distance (m)
    double d1 = 10.0;       ///< ambient source -> energy receiver (m)
    double d2 = 20.0;       ///< energy receiver -> energy transmitter (m)
    double d3 = 18.0;       ///< ambient source -> energy transmitter (m)
    double k0 = 1e-3;       ///< attenuation at the reference distance
    double alpha = 2.5;     ///< path-loss exponent
    double Ps = 1.0;        ///< ambient transmit power (W)
    double Pt = 1.0;        ///< energy-transmitter transmit power (W)
    double sigma_n2 = 1e-18; ///< AWGN variance (W); zero allowed for noise-free studies
    int M = 500;            ///< antennas at the energy transmitter
    double Ts = 5e-6;       ///< ambient symbol duration (s)
    double Tc = 500e-9;     ///< chip duration (s); Ts/Tc must be an even integer
    int Ns = 100;           ///< ambient symbols per backscatter phase
    double zeta = 0.5;      ///< energy-harvesting efficiency, in (0, 1]
    double Tp = 1.0;        ///< power-transfer-phase duration (s); informational only

    /// Chips per ambient symbol, the even integer Ts/Tc.
    int chips_per_symbol() const
    {
        const double ratio = Ts / Tc;
        const long long r = std::llround(ratio);
        if (r < 2 || std::abs(ratio - static_cast<double>(r)) > 1e-6 * ratio || r % 2 != 0)
            throw std::invalid_argument("ScenarioConfig: Ts/Tc must be a positive even integer, got " +
                                        std::to_string(ratio));
        return static_cast<int>(r);
    }

    /// Half the chips per symbol (the k in Nc = 2*k*Ns).
    int half_chips_per_symbol() const { return chips_per_symbol() / 2; }

    /// Total chips in one backscatter phase, Nc = (Ts/Tc)*Ns.
    long long num_chips() const { return static_cast<long long>(chips_per_symbol()) * Ns; }

    /// Backscatter-phase duration, Tb = Ns*Ts (= Nc*Tc exactly).
    double Tb() const { return static_cast<double>(Ns) * Ts; }

    void validate() const
    {
        auto require = [](bool ok, const char *what) {
            if (!ok)
                throw std::invalid_argument(std::string("ScenarioConfig: ") + what);
        };
        require(d0 > 0 && d1 > 0 && d2 > 0 && d3 > 0, "distances must be strictly positive");
        require(k0 > 0, "k0 must be strictly positive");
        require(alpha > 0, "alpha must be strictly positive");
        require(Ps > 0 && Pt > 0, "transmit powers must be strictly positive");
        require(sigma_n2 >= 0, "sigma_n2 must be non-negative");
        require(M >= 1, "M must be at least 1");
        require(Ts > 0 && Tc > 0, "durations must be strictly positive");
        require(Ns >= 1, "Ns must be at least 1");
        require(zeta > 0 && zeta <= 1, "zeta must lie in (0, 1]");
        require(Tp > 0, "Tp must be strictly positive");
        (void)chips_per_symbol(); // throws when Ts/Tc is not an even integer
    }
};

/// Large-scale attenuation k0*(d/d0)^(-alpha).
inline double path_loss(double d, const ScenarioConfig &cfg)
{
    if (!(d > 0))
        throw std::domain_error("path_loss: distance must be strictly positive");
    return cfg.k0 * std::pow(d / cfg.d0, -cfg.alpha);
}

inline double gamma_as_er(const ScenarioConfig &cfg) { return path_loss(cfg.d1, cfg); }
inline double gamma_er_et(const ScenarioConfig &cfg) { return path_loss(cfg.d2, cfg); }
inline double gamma_as_et(const ScenarioConfig &cfg) { return path_loss(cfg.d3, cfg); }

/// One quasi-static draw of the small-scale fading state. The channels stay
/// fixed for a whole backscatter + power-transfer block; f is reciprocal
/// between the two phases.
struct ChannelRealization
{
    cxd g;  ///< ambient source -> energy receiver
    cvec f; ///< energy receiver <-> energy transmitter, length M
    cvec h; ///< ambient source -> energy transmitter, length M
};

/// i.i.d. CN(0,1) draws for g and every entry of f and h.
/// Draw order is fixed (g, then f, then h) so substreams replay exactly.
inline ChannelRealization draw_channels(const ScenarioConfig &cfg, RandomStream &rng)
{
    ChannelRealization ch;
    ch.g = rng.complex_normal();
    ch.f.resize(cfg.M);
    for (auto &x : ch.f)
        x = rng.complex_normal();
    ch.h.resize(cfg.M);
    for (auto &x : ch.h)
        x = rng.complex_normal();
    return ch;
}

namespace detail {

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Canonical flat key=value rendering; also the basis of result fingerprints.
inline std::string format_scenario(const ScenarioConfig &cfg)
{
    std::ostringstream out;
    out << "d0 = " << detail::format_double(cfg.d0) << '\n'
        << "d1 = " << detail::format_double(cfg.d1) << '\n'
        << "d2 = " << detail::format_double(cfg.d2) << '\n'
        << "d3 = " << detail::format_double(cfg.d3) << '\n'
        << "k0 = " << detail::format_double(cfg.k0) << '\n'
        << "alpha = " << detail::format_double(cfg.alpha) << '\n'
        << "Ps = " << detail::format_double(cfg.Ps) << '\n'
        << "Pt = " << detail::format_double(cfg.Pt) << '\n'
        << "sigma_n2 = " << detail::format_double(cfg.sigma_n2) << '\n'
        << "M = " << cfg.M << '\n'
        << "Ts = " << detail::format_double(cfg.Ts) << '\n'
        << "Tc = " << detail::format_double(cfg.Tc) << '\n'
        << "Ns = " << cfg.Ns << '\n'
        << "zeta = " << detail::format_double(cfg.zeta) << '\n'
        << "Tp = " << detail::format_double(cfg.Tp) << '\n';
    return out.str();
}

/// Parse a flat key=value scenario. '#' starts a comment; keys must match the
/// field names exactly; unknown or duplicate keys are rejected. Tp defaults to
/// 1 s when absent (it only documents the power-transfer phase; all energies
/// are per unit time).
inline ScenarioConfig parse_scenario(std::istream &in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                            ": expected 'key = value'");
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                        ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw std::invalid_argument("scenario: duplicate key '" + key + "'");
    }

    auto take = [&kv](const char *key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument(std::string("scenario: missing key '") + key + "'");
        const std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto as_double = [](const std::string &v, const char *key) {
        std::size_t pos = 0;
        double d = 0;
        try
        {
            d = std::stod(v, &pos);
        }
        catch (const std::exception &)
        {
            throw std::invalid_argument(std::string("scenario: key '") + key +
                                        "' has non-numeric value '" + v + "'");
        }
        if (pos != v.size())
            throw std::invalid_argument(std::string("scenario: key '") + key +
                                        "' has trailing junk in value '" + v + "'");
        return d;
    };
    auto as_int = [&as_double](const std::string &v, const char *key) {
        const double d = as_double(v, key);
        const long long r = std::llround(d);
        if (std::abs(d - static_cast<double>(r)) > 0)
            throw std::invalid_argument(std::string("scenario: key '") + key +
                                        "' must be an integer, got '" + v + "'");
        return static_cast<int>(r);
    };

    ScenarioConfig cfg;
    cfg.d0 = as_double(take("d0"), "d0");
    cfg.d1 = as_double(take("d1"), "d1");
    cfg.d2 = as_double(take("d2"), "d2");
    cfg.d3 = as_double(take("d3"), "d3");
    cfg.k0 = as_double(take("k0"), "k0");
    cfg.alpha = as_double(take("alpha"), "alpha");
    cfg.Ps = as_double(take("Ps"), "Ps");
    cfg.Pt = as_double(take("Pt"), "Pt");
    cfg.sigma_n2 = as_double(take("sigma_n2"), "sigma_n2");
    cfg.M = as_int(take("M"), "M");
    cfg.Ts = as_double(take("Ts"), "Ts");
    cfg.Tc = as_double(take("Tc"), "Tc");
    cfg.Ns = as_int(take("Ns"), "Ns");
    cfg.zeta = as_double(take("zeta"), "zeta");
    if (kv.count("Tp"))
        cfg.Tp = as_double(take("Tp"), "Tp");

    if (!kv.empty())
        throw std::invalid_argument("scenario: unknown key '" + kv.begin()->first + "'");
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("scenario: cannot open '" + path + "'");
    return parse_scenario(in);
}

} // namespace retrowpt
