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
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mcvd/channel.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/harness/config.hpp"
#include "mcvd/harness/csv.hpp"
#include "mcvd/optimizer.hpp"

namespace mcvd::harness {

/// Desired response and per-tap ISI on a uniform time grid.
struct CirTable {
    int isi_length = 0;
    std::vector<double> t;
    std::vector<double> desired;
    std::vector<std::vector<double>> isi; ///< isi[k-1][row] = cir(t + k Ts)
    std::vector<double> isi_total;
    std::map<std::string, double> markers; ///< all in seconds
};

/// Optimizer markers: bar t1 (or bar n1 t_s), root and closed-form reuse
/// ends, and the window edges at the largest configured Q.
inline std::map<std::string, double> cir_markers(const ExperimentConfig& c)
{
    const ChannelParams p = c.channel();
    const LinkConfig cfg = c.link();
    const double q = *std::max_element(c.Q.begin(), c.Q.end());
    const WindowChoice wc = optimal_window(cfg, p, q, WindowSearch{c.grid.window_steps});
    std::map<std::string, double> m;
    m["peak_time_s"] = peak_time(p);
    if (p.kind == ReceiverKind::absorbing) {
        const auto& lim = std::get<TimeWindow>(wc.limit_window);
        const auto& w = std::get<TimeWindow>(wc.window);
        m["bar_t1_s"] = lim.t1;
        m["window_t1_s"] = w.t1;
        m["window_t2_s"] = w.t2;
        if (cfg.isi_length > 0) {
            m["tu_root_s"] = root_tu(cfg, p, lim.t1).value;
            try {
                m["tu_closed_form_s"] = closed_form_tu(cfg, p, lim.t1).value;
            } catch (const NumericalError&) {
            }
        }
    } else {
        const double ts = cfg.sample_interval;
        const auto& lim = std::get<SampleWindow>(wc.limit_window);
        const auto& w = std::get<SampleWindow>(wc.window);
        m["bar_t1_s"] = lim.n1 * ts;
        m["window_t1_s"] = w.n1 * ts;
        m["window_t2_s"] = w.n2 * ts;
        const auto root = root_nu(cfg, p, lim.n1);
        if (root.value >= 0)
            m["tu_root_s"] = root.value * ts;
        if (cfg.isi_length > 0) {
            try {
                const auto cf = closed_form_nu(cfg, p, lim.n1);
                if (cf.samples >= 0)
                    m["tu_closed_form_s"] = cf.samples * ts;
            } catch (const NumericalError&) {
            }
        }
    }
    return m;
}

inline CirTable export_cir(const ExperimentConfig& c)
{
    const ChannelParams p = c.channel();
    const double ts = c.Ts_s;
    const double dt = c.delta_t_s;
    const auto rows = static_cast<std::size_t>(std::floor(ts / dt * (1.0 + 1e-12))) + 1;

    CirTable out;
    out.isi_length = c.L;
    out.isi.assign(c.L, std::vector<double>(rows));
    out.t.resize(rows);
    out.desired.resize(rows);
    out.isi_total.resize(rows);
    for (std::size_t j = 0; j < rows; ++j) {
        const double t = j * dt;
        out.t[j] = t;
        out.desired[j] = cir(t, p);
        double total = 0.0;
        for (int k = 1; k <= c.L; ++k) {
            out.isi[k - 1][j] = cir(t + k * ts, p);
            total += out.isi[k - 1][j];
        }
        out.isi_total[j] = total;
    }
    out.markers = cir_markers(c);
    return out;
}

/// Markers as leading "# name=value" lines, then a CSV table.
inline void write_cir(const CirTable& table, std::ostream& out)
{
    for (const auto& [name, value] : table.markers)
        out << "# " << name << '=' << format_double(value) << '\n';
    out << "t_s,desired";
    for (int k = 1; k <= table.isi_length; ++k)
        out << ",isi_" << k;
    out << ",isi_total\n";
    for (std::size_t j = 0; j < table.t.size(); ++j) {
        out << format_double(table.t[j]) << ',' << format_double(table.desired[j]);
        for (int k = 0; k < table.isi_length; ++k)
            out << ',' << format_double(table.isi[k][j]);
        out << ',' << format_double(table.isi_total[j]) << '\n';
    }
    if (!out)
        throw IoError("failed writing CIR table");
}

} // namespace mcvd::harness
