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
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "retrowpt/channel.hpp"
#include "retrowpt/estimate.hpp"

namespace retrowpt {

/// Controls for the semi-infinite average-power integral.
struct QuadratureSpec
{
    double rel_tol = 1e-8;
    double abs_tol = 1e-18;       ///< W; inert unless the result is truly tiny
    unsigned max_subdivisions = 25; ///< adaptive bisection depth
    double z_max = 0.0;           ///< upper truncation; 0 selects it from the tail bound

    void validate() const
    {
        if (!(rel_tol > 0) || !(abs_tol > 0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be at least 1");
    }
};

/// Modified Bessel function of the second kind, order zero. Underflows to
/// zero for large arguments instead of failing.
inline double bessel_k0(double x)
{
    if (!(x > 0))
        throw std::domain_error("bessel_k0: argument must be strictly positive (K0 diverges at 0)");
    return boost::math::cyl_bessel_k(0, x);
}

/// Density of Z = |g|² * mu, the product of independent Exp(1) and Exp(1/Ns)
/// variables: f_Z(z) = (2/Ns) K0(2 sqrt(z/Ns)). The z = 0 endpoint is an
/// integrable logarithmic singularity and reported as +infinity.
inline double z_density(double z, int Ns)
{
    if (Ns < 1)
        throw std::domain_error("z_density: Ns must be at least 1");
    if (z < 0)
        throw std::domain_error("z_density: z must be non-negative");
    if (z == 0)
        return std::numeric_limits<double>::infinity();
    return (2.0 / Ns) * bessel_k0(2.0 * std::sqrt(z / Ns));
}

/// Tail probability P(Z > z) = x K1(x) with x = 2 sqrt(z/Ns); used for the
/// truncation bound of the semi-infinite integral and as the CDF complement
/// in distribution tests.
inline double z_survival(double z, int Ns)
{
    if (Ns < 1)
        throw std::domain_error("z_survival: Ns must be at least 1");
    if (z < 0)
        throw std::domain_error("z_survival: z must be non-negative");
    const double x = 2.0 * std::sqrt(z / Ns);
    if (x < 1e-280) // K1 overflows below this; the limit is 1
        return 1.0;
    return x * boost::math::cyl_bessel_k(1, x);
}

namespace detail {

constexpr double euler_gamma = 0.57721566490153286060651209008240;

} // namespace detail

/// Average harvested power by numerical quadrature of
///
///   Qbar = ∫₀^∞ zeta*g2*Pt * (g1*g2*z*(M+1) + a)/(g1*g2*z + a) * f_Z(z) dz,
///   a = sigma_n2*Ns/(Ts*Ps),
///
/// the expectation of the large-array instantaneous power over the fading
/// state. The z -> z/Ns substitution shows the value is independent of Ns.
///
/// The log singularity of f_Z at 0 defeats fixed-order rules, so [0, eps] is
/// integrated analytically using K0(x) ~ -ln(x/2) - gamma and a linearised
/// rational factor; adaptive Gauss-Kronrod covers [eps, z_max], with z_max
/// chosen so the discarded tail is below abs-tolerance x 1e-3.
///
/// Throws std::runtime_error when the requested tolerance cannot be certified
/// within the subdivision budget; never returns a silent partial result.
inline PowerEstimate average_q_quadrature(const ScenarioConfig &cfg, const QuadratureSpec &spec = {})
{
    cfg.validate();
    spec.validate();

    const double front = cfg.zeta * gamma_er_et(cfg) * cfg.Pt;
    const double c = gamma_as_er(cfg) * gamma_er_et(cfg);
    const double a = cfg.sigma_n2 * static_cast<double>(cfg.Ns) / (cfg.Ts * cfg.Ps);
    const double m1 = static_cast<double>(cfg.M) + 1.0;
    const double ns = static_cast<double>(cfg.Ns);

    const auto rational = [&](double z) { return front * (c * z * m1 + a) / (c * z + a); };
    // value and slope at z = 0 (noise-free: already saturated at front*(M+1))
    const double r0 = (a > 0.0) ? front : front * m1;
    const double r1 = (a > 0.0) ? front * c * (m1 - 1.0) / a : 0.0;

    // Absolute accuracy target; Qbar >= front gives the scale when only a
    // relative tolerance was requested.
    const double abs_target = std::max(spec.abs_tol, spec.rel_tol * front);

    // Truncation point: R(z) <= front*(M+1), so the discarded tail is at most
    // front*(M+1)*P(Z > z_max).
    double z_max = spec.z_max;
    if (z_max <= 0.0)
    {
        z_max = ns;
        const double tail_target = abs_target * 1e-3;
        int doublings = 0;
        while (front * m1 * z_survival(z_max, cfg.Ns) > tail_target)
        {
            z_max *= 2.0;
            if (++doublings > 200)
                throw std::runtime_error("average_q_quadrature: could not truncate the tail");
        }
    }
    const double tail_error = front * m1 * z_survival(z_max, cfg.Ns);

    // Split point below which K0 takes its small-argument form. Kept well
    // below a/c so the rational factor is still in its linear regime there.
    double eps = 1e-6 * ns;
    if (a > 0.0)
        eps = std::min(eps, 0.01 * a / c);
    eps = std::min(eps, 0.5 * z_max);

    // [0, eps]: with K0(2 sqrt(z/Ns)) ~ -ln(z/Ns)/2 - gamma and
    // R(z) ~ r0 + r1 z, both moments have closed forms.
    const double L = std::log(eps / ns);
    const double moment0 = (2.0 / ns) * eps * (-0.5 * L + 0.5 - detail::euler_gamma);
    const double moment1 = (2.0 / ns) * eps * eps * (-0.25 * L + 0.125 - 0.5 * detail::euler_gamma);
    const double head = r0 * moment0 + r1 * moment1;
    // curvature of the rational factor and the K0 expansion remainder
    const double head_rel = (a > 0.0 ? 2.0 * (c * eps / a) * (c * eps / a) : 0.0) + 1e-6;
    const double head_error = std::abs(head) * head_rel;

    // [eps, z_max]: adaptive Gauss-Kronrod on the exact integrand, in the
    // substituted variable t = 2 sqrt(z/Ns) where f_Z(z) dz = t K0(t) dt.
    // This compresses the nine decades of z-scale into an O(1) range that the
    // bisection can actually resolve.
    const auto integrand = [&](double t) {
        return rational(ns * t * t / 4.0) * t * boost::math::cyl_bessel_k(0, t);
    };
    const double t_eps = 2.0 * std::sqrt(eps / ns);
    const double t_max = 2.0 * std::sqrt(z_max / ns);
    double body_error = 0.0;
    const double body = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, t_eps, t_max, spec.max_subdivisions, 0.1 * spec.rel_tol, &body_error);

    const double total = head + body;
    const double total_error = head_error + body_error + tail_error;
    if (!(total_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))))
        throw std::runtime_error(
            "average_q_quadrature: failed to converge to the requested tolerance "
            "(error estimate " +
            std::to_string(total_error) + " W)");

    PowerEstimate est;
    est.mean = total;
    est.trials = 0;
    est.method = EstimateMethod::quadrature;
    est.fingerprint = scenario_fingerprint(cfg, 0);
    return est;
}

} // namespace retrowpt
