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

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcvd/errors.hpp"
#include "mcvd/link.hpp"

/**
 * @file channel.hpp
 * @brief Impulse responses of a point transmitter and a spherical receiver
 * in an unbounded 3D medium without flow.
 *
 * All quantities are SI (meters, seconds). Functions are pure.
 */

namespace mcvd {

enum class ReceiverKind { absorbing, passive };

inline std::string_view to_string(ReceiverKind kind)
{
    return kind == ReceiverKind::absorbing ? "absorbing" : "passive";
}

inline std::optional<ReceiverKind> parse_receiver(std::string_view name)
{
    if (name == "absorbing")
        return ReceiverKind::absorbing;
    if (name == "passive")
        return ReceiverKind::passive;
    return std::nullopt;
}

struct ChannelParams {
    double distance = 0.0;  ///< d: transmitter to nearest receiver surface [m]
    double radius = 0.0;    ///< r [m]
    double diffusion = 0.0; ///< D [m^2/s]
    double volume = 0.0;    ///< V [m^3]
    ReceiverKind kind = ReceiverKind::absorbing;

    friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

inline double sphere_volume(double radius)
{
    return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
}

inline ChannelParams absorbing_receiver(double distance, double radius, double diffusion)
{
    return {distance, radius, diffusion, sphere_volume(radius), ReceiverKind::absorbing};
}

inline ChannelParams passive_receiver(double distance, double radius, double diffusion)
{
    return {distance, radius, diffusion, sphere_volume(radius), ReceiverKind::passive};
}

/// d = 5 um, r = 5 um, D = 79.4 um^2/s.
inline ChannelParams default_absorbing()
{
    return absorbing_receiver(5e-6, 5e-6, 79.4e-12);
}

/// d = 10 um, r = 1.5 um, D = 79.4 um^2/s; r/(r+d) = 0.13.
inline ChannelParams default_passive()
{
    return passive_receiver(10e-6, 1.5e-6, 79.4e-12);
}

/// The passive point-observer CIR only holds for r/(r+d) below this.
inline constexpr double passive_validity_limit = 0.15;

inline bool passive_model_valid(const ChannelParams& p)
{
    return p.radius / (p.radius + p.distance) < passive_validity_limit;
}

/// Every violated invariant of p. The passive validity condition is skipped
/// when override_validity is set.
inline std::vector<std::string> check_params(const ChannelParams& p, bool override_validity = false)
{
    std::vector<std::string> problems;
    if (!(p.distance > 0.0))
        problems.emplace_back("distance d must be > 0");
    if (!(p.radius > 0.0))
        problems.emplace_back("radius r must be > 0");
    if (!(p.diffusion > 0.0))
        problems.emplace_back("diffusion coefficient D must be > 0");
    if (!(p.volume > 0.0))
        problems.emplace_back("receiver volume V must be > 0");
    if (p.kind == ReceiverKind::passive && p.distance > 0.0 && p.radius > 0.0 &&
        !passive_model_valid(p) && !override_validity)
        problems.emplace_back("passive receiver requires r/(r+d) < 0.15 (got " +
                              std::to_string(p.radius / (p.radius + p.distance)) +
                              "); pass the validity override to accept");
    return problems;
}

inline void validate(const ChannelParams& p, bool override_validity = false)
{
    if (auto problems = check_params(p, override_validity); !problems.empty())
        throw ConfigError(std::move(problems));
}

/// Time at which the CIR peaks: d^2/(6D) absorbing, (d+r)^2/(6D) passive.
inline double peak_time(const ChannelParams& p)
{
    const double reach = p.kind == ReceiverKind::absorbing ? p.distance : p.distance + p.radius;
    return reach * reach / (6.0 * p.diffusion);
}

/// Absorption rate h(t) of a single molecule released at t = 0.
inline double hit_rate(double t, const ChannelParams& p)
{
    if (!(t > 0.0))
        throw DomainError("hit_rate requires t > 0");
    const double d = p.distance;
    const double D = p.diffusion;
    return p.radius / (d + p.radius) * d / std::sqrt(4.0 * std::numbers::pi * D * t * t * t) *
           std::exp(-d * d / (4.0 * D * t));
}

/// F(0, t): probability of absorption by time t. F(0, 0) = 0 and
/// F(0, inf) = r/(d+r).
inline double cumulative_hit(double t, const ChannelParams& p)
{
    if (t < 0.0)
        throw DomainError("cumulative_hit requires t >= 0");
    if (t == 0.0)
        return 0.0;
    const double scale = p.radius / (p.distance + p.radius);
    if (std::isinf(t))
        return scale;
    return scale * std::erfc(p.distance / std::sqrt(4.0 * p.diffusion * t));
}

/// Expected fraction of molecules absorbed in [t1, t2].
///
/// Written as a difference of erfc rather than erf so both terms keep full
/// relative precision when the arguments are large (early times).
inline double hit_fraction(double t1, double t2, const ChannelParams& p)
{
    if (t1 < 0.0 || t2 < 0.0)
        throw DomainError("hit_fraction requires nonnegative times");
    if (t1 > t2)
        throw ArgumentError("hit_fraction requires t1 <= t2");
    if (t1 == t2)
        return 0.0;
    return cumulative_hit(t2, p) - cumulative_hit(t1, p);
}

/// F^i for window w: the window shifted i symbols into the past.
inline double tap_fraction(int i, const TimeWindow& w, double symbol_time, const ChannelParams& p)
{
    if (i < 0)
        throw ArgumentError("tap index must be >= 0");
    return hit_fraction(w.t1 + i * symbol_time, w.t2 + i * symbol_time, p);
}

/// Probability that a molecule is inside the passive volume at time t.
inline double passive_prob(double t, const ChannelParams& p)
{
    if (!(t > 0.0))
        throw DomainError("passive_prob requires t > 0");
    const double reach = p.distance + p.radius;
    const double spread = 4.0 * std::numbers::pi * p.diffusion * t;
    return p.volume / (spread * std::sqrt(spread)) * std::exp(-reach * reach / (4.0 * p.diffusion * t));
}

/// Receiver-appropriate CIR with the t -> 0+ limit (0) at t = 0.
inline double cir(double t, const ChannelParams& p)
{
    if (t == 0.0)
        return 0.0;
    return p.kind == ReceiverKind::absorbing ? hit_rate(t, p) : passive_prob(t, p);
}

/// p_{n,i} = p(n t_s + i Ts); p_{0,0} = 0.
inline double sample_prob(int n, int i, const LinkConfig& cfg, const ChannelParams& p)
{
    if (n < 0 || i < 0)
        throw ArgumentError("sample and tap indices must be >= 0");
    const double t = n * cfg.sample_interval + i * cfg.symbol_time;
    return t == 0.0 ? 0.0 : passive_prob(t, p);
}

/// Passive sampling grid: t_s = t_max / 6 and N = floor(Ts / t_s).
inline LinkConfig passive_link(const ChannelParams& p, double symbol_time, int isi_length)
{
    const double ts = peak_time(p) / 6.0;
    const int n = static_cast<int>(std::floor(symbol_time / ts));
    return {symbol_time, isi_length, n, ts};
}

/// Link invariants plus Ts > peak_time (unless overridden).
inline std::vector<std::string> check_link(const LinkConfig& cfg, const ChannelParams& p,
                                           bool override_symbol_time = false)
{
    auto problems = check_link(cfg);
    if (!override_symbol_time && p.diffusion > 0.0 && cfg.symbol_time <= peak_time(p))
        problems.emplace_back("symbol time Ts must exceed the CIR peak time " +
                              std::to_string(peak_time(p)) + " s");
    return problems;
}

} // namespace mcvd
