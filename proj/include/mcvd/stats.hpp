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

#include <cstddef>
#include <variant>
#include <vector>

#include "mcvd/channel.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/link.hpp"

namespace mcvd {

/// Per-molecule mean and variance of the count contributed by one tap.
struct Tap {
    double mean = 0.0;
    double var = 0.0;
    friend bool operator==(const Tap&, const Tap&) = default;
};

enum class StatsOrigin { window, reuse_adjusted };

/// Gaussian statistics of the received count, one entry per tap i = 0..L.
/// Tap 0 is the desired symbol; taps 1..L are ISI.
struct TapStats {
    ReceiverKind kind = ReceiverKind::absorbing;
    StatsOrigin origin = StatsOrigin::window;
    std::vector<Tap> taps;

    int isi_length() const { return static_cast<int>(taps.size()) - 1; }
    const Tap& operator[](std::size_t i) const { return taps[i]; }
};

namespace detail {

// Sum of p_{n,i} over n = first..last.
inline double sample_sum(int first, int last, int tap, const LinkConfig& cfg, const ChannelParams& p)
{
    double s = 0.0;
    for (int n = first; n <= last; ++n)
        s += sample_prob(n, tap, cfg, p);
    return s;
}

inline void require_kind(const ChannelParams& p, ReceiverKind expected)
{
    if (p.kind != expected)
        throw ArgumentError(expected == ReceiverKind::absorbing
                                ? "continuous windows require an absorbing receiver"
                                : "sample windows require a passive receiver");
}

} // namespace detail

/// Plain-window statistics. Absorbing taps are binomial, (F^i, F^i(1-F^i));
/// passive taps are Poisson-like, (sum p_{n,i}, sum p_{n,i}).
inline TapStats window_stats(const DetectionWindow& w, const LinkConfig& cfg, const ChannelParams& p)
{
    TapStats out;
    out.kind = p.kind;
    out.origin = StatsOrigin::window;
    out.taps.resize(static_cast<std::size_t>(cfg.isi_length) + 1);

    if (const auto* tw = std::get_if<TimeWindow>(&w)) {
        detail::require_kind(p, ReceiverKind::absorbing);
        check_window(*tw, cfg);
        for (int i = 0; i <= cfg.isi_length; ++i) {
            const double f = tap_fraction(i, *tw, cfg.symbol_time, p);
            out.taps[i] = {f, f * (1.0 - f)};
        }
    } else {
        const auto& sw = std::get<SampleWindow>(w);
        detail::require_kind(p, ReceiverKind::passive);
        check_window(sw, cfg);
        for (int i = 0; i <= cfg.isi_length; ++i) {
            const double s = detail::sample_sum(sw.n1, sw.n2, i, cfg, p);
            out.taps[i] = {s, s};
        }
    }
    return out;
}

/// Per-molecule mean count of the reuse window for each tap i = 0..L:
/// F^i(0, tu) (absorbing) or sum_{n=0..nu} p_{n,i} (passive). Empty reuse
/// gives all zeros.
inline std::vector<double> reuse_fractions(const DetectionWindow& w, const ReusableWindow& r,
                                           const LinkConfig& cfg, const ChannelParams& p)
{
    std::vector<double> out(static_cast<std::size_t>(cfg.isi_length) + 1, 0.0);
    if (is_empty(r))
        return out;
    if (const auto* tw = std::get_if<TimeWindow>(&w)) {
        detail::require_kind(p, ReceiverKind::absorbing);
        const auto* tr = std::get_if<TimeReuse>(&r);
        if (!tr)
            throw ArgumentError("continuous window needs a continuous reuse window");
        check_pairing(*tw, *tr);
        for (int i = 0; i <= cfg.isi_length; ++i)
            out[i] = tap_fraction(i, TimeWindow{0.0, tr->tu}, cfg.symbol_time, p);
    } else {
        const auto& sw = std::get<SampleWindow>(w);
        detail::require_kind(p, ReceiverKind::passive);
        const auto* sr = std::get_if<SampleReuse>(&r);
        if (!sr)
            throw ArgumentError("sample window needs a sample reuse window");
        check_pairing(sw, *sr);
        for (int i = 0; i <= cfg.isi_length; ++i)
            out[i] = detail::sample_sum(0, sr->nu, i, cfg, p);
    }
    return out;
}

/// Statistics after subtracting the reuse-window count from the detection
/// count. Means subtract and may go negative; variances add.
inline TapStats reuse_adjusted_stats(const DetectionWindow& w, const ReusableWindow& r,
                                     const LinkConfig& cfg, const ChannelParams& p)
{
    TapStats out = window_stats(w, cfg, p);
    if (is_empty(r))
        return out;
    out.origin = StatsOrigin::reuse_adjusted;
    const auto reuse = reuse_fractions(w, r, cfg, p);
    const bool absorbing = p.kind == ReceiverKind::absorbing;
    for (std::size_t i = 0; i < out.taps.size(); ++i) {
        out.taps[i].mean -= reuse[i];
        out.taps[i].var += absorbing ? reuse[i] * (1.0 - reuse[i]) : reuse[i];
    }
    return out;
}

} // namespace mcvd
