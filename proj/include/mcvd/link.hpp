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

#include <string>
#include <variant>
#include <vector>

#include "mcvd/errors.hpp"

namespace mcvd {

/// Transmission parameters of an OOK link. Q is passed separately to the
/// functions that need it, since most sweeps vary Q with everything else
/// fixed.
struct LinkConfig {
    double symbol_time = 0.0;     ///< Ts [s]
    int isi_length = 0;           ///< L, number of interfering past symbols
    int samples = 1;              ///< N, passive receiver samples per symbol
    double sample_interval = 0.0; ///< t_s [s]

    /// Uniform sampling t_s = Ts / N.
    static LinkConfig uniform(double symbol_time, int isi_length, int samples = 1)
    {
        return {symbol_time, isi_length, samples, symbol_time / samples};
    }

    friend bool operator==(const LinkConfig&, const LinkConfig&) = default;
};

/// Detection interval [t1, t2] in continuous time (absorbing receiver).
struct TimeWindow {
    double t1 = 0.0;
    double t2 = 0.0;
    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Detection samples n1..n2 inclusive (passive receiver).
struct SampleWindow {
    int n1 = 0;
    int n2 = 0;
    friend bool operator==(const SampleWindow&, const SampleWindow&) = default;
};

using DetectionWindow = std::variant<TimeWindow, SampleWindow>;

/// Reusable prefix [0, tu] of the discarded duration.
struct TimeReuse {
    double tu = 0.0;
    friend bool operator==(const TimeReuse&, const TimeReuse&) = default;
};

/// Reusable samples 0..nu inclusive.
struct SampleReuse {
    int nu = 0;
    friend bool operator==(const SampleReuse&, const SampleReuse&) = default;
};

/// monostate means no reuse.
using ReusableWindow = std::variant<std::monostate, TimeReuse, SampleReuse>;

inline bool is_empty(const ReusableWindow& r) { return std::holds_alternative<std::monostate>(r); }

inline std::vector<std::string> check_link(const LinkConfig& cfg)
{
    std::vector<std::string> problems;
    if (!(cfg.symbol_time > 0.0))
        problems.emplace_back("symbol time Ts must be > 0");
    if (cfg.isi_length < 0)
        problems.emplace_back("ISI length L must be >= 0");
    if (cfg.samples < 1)
        problems.emplace_back("samples per symbol N must be >= 1");
    if (!(cfg.sample_interval > 0.0) || cfg.sample_interval > cfg.symbol_time)
        problems.emplace_back("sample interval t_s must satisfy 0 < t_s <= Ts");
    return problems;
}

/// Throws ArgumentError unless 0 <= t1 < t2 <= Ts.
inline void check_window(const TimeWindow& w, const LinkConfig& cfg)
{
    if (!(w.t1 >= 0.0 && w.t1 < w.t2 && w.t2 <= cfg.symbol_time))
        throw ArgumentError("detection window must satisfy 0 <= t1 < t2 <= Ts");
}

/// Throws ArgumentError unless 0 <= n1 <= n2 <= N.
inline void check_window(const SampleWindow& w, const LinkConfig& cfg)
{
    if (!(w.n1 >= 0 && w.n1 <= w.n2 && w.n2 <= cfg.samples))
        throw ArgumentError("sample window must satisfy 0 <= n1 <= n2 <= N");
}

// A continuous reuse interval may touch the detection window at t1 (a
// single instant); sample reuse must stop strictly before n1.
inline void check_pairing(const TimeWindow& w, const TimeReuse& r)
{
    if (!(r.tu >= 0.0 && r.tu <= w.t1))
        throw ArgumentError("reuse window must satisfy 0 <= tu <= t1");
}

inline void check_pairing(const SampleWindow& w, const SampleReuse& r)
{
    if (!(r.nu >= 0 && r.nu < w.n1))
        throw ArgumentError("reuse samples must satisfy 0 <= nu < n1");
}

} // namespace mcvd
