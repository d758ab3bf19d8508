/*
   Copyright 2026 The mcvd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mcvd/channel.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/stats.hpp"

/**
 * @file metric.hpp
 * @brief mSINAR (modified signal-to-interference-and-noise amplitude
 * ratio), its cutoff Q-hat, and the reuse objectives built on it.
 *
 * With A = mean_0 / 2, B = sum_{k>=1} mean_k / 2 and C = sum_k sqrt(var_k / 2),
 *
 *     mSINAR(Q) = A / (B + C / sqrt(Q)).
 *
 * Q-hat is the Q at which this reaches 1. At and above Q-hat the metric is
 * evaluated with Q frozen at Q-hat.
 */

namespace mcvd {

struct MsinarTerms {
    double signal = 0.0;       ///< A
    double interference = 0.0; ///< B
    double noise = 0.0;        ///< C
};

inline MsinarTerms msinar_terms(const TapStats& ts)
{
    MsinarTerms out;
    out.signal = 0.5 * ts.taps.at(0).mean;
    for (std::size_t k = 0; k < ts.taps.size(); ++k) {
        if (k > 0)
            out.interference += 0.5 * ts.taps[k].mean;
        out.noise += std::sqrt(std::max(ts.taps[k].var, 0.0) / 2.0);
    }
    return out;
}

/// Unclipped ratio at a given Q. For reuse-adjusted statistics this is the
/// reuse objective and may exceed 1.
inline double msinar_raw(const TapStats& ts, double q)
{
    if (!(q > 0.0))
        throw ArgumentError("mSINAR needs Q > 0");
    const auto t = msinar_terms(ts);
    return t.signal / (t.interference + t.noise / std::sqrt(q));
}

/// Q at which mSINAR reaches 1; +inf if the mean desired signal is not
/// positive or does not exceed the mean ISI.
inline double q_cutoff(const TapStats& ts)
{
    const auto t = msinar_terms(ts);
    if (!(t.signal > 0.0) || !(t.signal > t.interference))
        return std::numeric_limits<double>::infinity();
    const double root = t.noise / (t.signal - t.interference);
    return root * root;
}

/// mSINAR in (0, 1].
inline double msinar(const TapStats& ts, double q)
{
    if (!(q > 0.0))
        throw ArgumentError("mSINAR needs Q > 0");
    constexpr double floor = std::numeric_limits<double>::min();
    if (!(msinar_terms(ts).signal > 0.0))
        return floor;
    const double qh = q_cutoff(ts);
    if (qh == 0.0)
        return 1.0;
    return std::clamp(msinar_raw(ts, std::min(q, qh)), floor, 1.0);
}

/// Reuse objective: the mSINAR ratio of the reuse-adjusted statistics, with
/// Q frozen at the plain window's Q-hat when Q >= Q-hat.
inline double reuse_objective(const DetectionWindow& w, const ReusableWindow& r, const LinkConfig& cfg,
                              const ChannelParams& p, double q)
{
    const double q_eff = std::min(q, q_cutoff(window_stats(w, cfg, p)));
    return msinar_raw(reuse_adjusted_stats(w, r, cfg, p), q_eff);
}

inline double msinar_objective_tu(double tu, const TimeWindow& w, const LinkConfig& cfg, const ChannelParams& p,
                                  double q)
{
    check_pairing(w, TimeReuse{tu});
    return reuse_objective(w, TimeReuse{tu}, cfg, p, q);
}

inline double msinar_objective_nu(int nu, const SampleWindow& w, const LinkConfig& cfg, const ChannelParams& p,
                                  double q)
{
    check_pairing(w, SampleReuse{nu});
    return reuse_objective(w, SampleReuse{nu}, cfg, p, q);
}

/// Largest per-tap ratio of reuse-window variance to detection-window
/// variance. The mSID simplification drops the reuse noise and assumes this
/// is small.
inline double noise_neglect_ratio(const DetectionWindow& w, const ReusableWindow& r, const LinkConfig& cfg,
                                  const ChannelParams& p)
{
    const auto plain = window_stats(w, cfg, p);
    const auto adj = reuse_adjusted_stats(w, r, cfg, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < plain.taps.size(); ++i) {
        const double extra = adj.taps[i].var - plain.taps[i].var;
        if (plain.taps[i].var > 0.0)
            worst = std::max(worst, extra / plain.taps[i].var);
        else if (extra > 0.0)
            worst = std::numeric_limits<double>::infinity();
    }
    return worst;
}

inline constexpr double noise_neglect_warning_level = 0.1;

/// Root residual: sum_{k=1..L} cir(t + k Ts) - cir(t). Positive while
/// ISI dominates the desired response.
inline double root_residual(double t, const LinkConfig& cfg, const ChannelParams& p)
{
    if (!(t > 0.0))
        throw DomainError("root_residual requires t > 0");
    double isi = 0.0;
    for (int k = 1; k <= cfg.isi_length; ++k)
        isi += cir(t + k * cfg.symbol_time, p);
    return isi - cir(t, p);
}

/// mSID objective for continuous reuse: integral over [0, tu] of the
/// root residual, by adaptive Gauss-Kronrod quadrature.
inline double msid_objective_tu(double tu, const LinkConfig& cfg, const ChannelParams& p)
{
    if (tu < 0.0)
        throw ArgumentError("tu must be >= 0");
    if (tu == 0.0)
        return 0.0;
    auto integrand = [&](double t) { return t > 0.0 ? root_residual(t, cfg, p) : 0.0; };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, tu, 20, 1e-10);
}

/// mSID objective for sample reuse:
/// sum_{k=1..L} sum_{n=0..nu} p_{n,k} - sum_{n=0..nu} p_{n,0}.
inline double msid_objective_nu(int nu, const LinkConfig& cfg, const ChannelParams& p)
{
    if (nu < 0)
        throw ArgumentError("nu must be >= 0");
    detail::require_kind(p, ReceiverKind::passive);
    double total = 0.0;
    for (int n = 0; n <= nu; ++n) {
        double isi = 0.0;
        for (int k = 1; k <= cfg.isi_length; ++k)
            isi += sample_prob(n, k, cfg, p);
        total += isi - sample_prob(n, 0, cfg, p);
    }
    return total;
}

} // namespace mcvd
