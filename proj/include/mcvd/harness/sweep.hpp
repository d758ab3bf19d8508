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
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcvd/detection.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/harness/config.hpp"
#include "mcvd/optimizer.hpp"
#include "mcvd/rng.hpp"
#include "mcvd/stats.hpp"

namespace mcvd::harness {

/// One scheme at one Q.
struct SweepRow {
    Scheme scheme = Scheme::conventional_ook;
    ReceiverKind receiver = ReceiverKind::absorbing;
    double symbol_time = 0.0;
    int isi_length = 0;
    double sample_interval = 0.0;
    DetectionWindow window;
    ReusableWindow reuse;
    BerPoint ber;
    bool ok = true;
    std::string error;
    std::map<std::string, double> intermediates;
};

/// Per-point Monte Carlo seed; depends only on the base seed and the
/// position of the point in the sweep.
inline std::uint64_t point_seed(std::uint64_t seed, Scheme s, std::size_t q_index)
{
    return mix_seed(seed ^ mix_seed((static_cast<std::uint64_t>(s) << 32) + q_index));
}

namespace detail {

// Q-dependent and Q-independent optimizer output shared by all schemes.
struct SharedPoint {
    WindowChoice window;
    std::optional<ClosedFormResult> closed_form;
    std::string closed_form_error;
    std::map<std::string, double> closed_form_error_intermediates;
    double bar = 0.0;
};

inline void add_window_intermediates(SweepRow& row, const WindowChoice& wc)
{
    row.intermediates["q_cutoff"] = wc.q_cutoff;
    row.intermediates["frozen"] = wc.frozen ? 1.0 : 0.0;
    row.intermediates["window_objective"] = wc.objective;
}

} // namespace detail

/// Evaluate every scheme at every Q. Rows are ordered by the configured
/// scheme order, then ascending Q. A failing point is recorded with ok =
/// false and nan values; the sweep continues.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& c)
{
    if (auto problems = check_config(c); !problems.empty())
        throw ConfigError(problems);

    const ChannelParams p = c.channel();
    const LinkConfig cfg = c.link();
    const bool absorbing = p.kind == ReceiverKind::absorbing;
    const WindowSearch wsearch{c.grid.window_steps};
    const ReuseSearch rsearch{c.grid.tu_points, ThresholdGrid{c.grid.threshold_points}, c.workers};
    const DetectionWindow full = absorbing ? DetectionWindow{TimeWindow{0.0, cfg.symbol_time}}
                                           : DetectionWindow{SampleWindow{0, cfg.samples}};

    std::vector<double> qs = c.Q;
    std::sort(qs.begin(), qs.end());

    const bool need_window = c.has(Scheme::optimal_window) || c.has(Scheme::proposed_numerical) ||
                             c.has(Scheme::proposed_theoretical) || c.has(Scheme::ideal);
    std::vector<detail::SharedPoint> shared(qs.size());
    if (need_window) {
        for (std::size_t i = 0; i < qs.size(); ++i)
            shared[i].window = optimal_window(cfg, p, qs[i], wsearch);
        if (c.has(Scheme::proposed_theoretical)) {
            std::optional<ClosedFormResult> cf;
            std::string err;
            std::map<std::string, double> err_im;
            const DetectionWindow& lim = shared.front().window.limit_window;
            try {
                cf = absorbing ? closed_form_tu(cfg, p, std::get<TimeWindow>(lim).t1)
                               : closed_form_nu(cfg, p, std::get<SampleWindow>(lim).n1);
            } catch (const NumericalError& e) {
                err = e.what();
                err_im = e.intermediates();
            } catch (const ArgumentError& e) {
                err = e.what();
            }
            for (auto& s : shared) {
                s.closed_form = cf;
                s.closed_form_error = err;
                s.closed_form_error_intermediates = err_im;
            }
        }
    }

    std::vector<SweepRow> rows;
    for (Scheme scheme : c.schemes) {
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const double q = qs[i];
            SweepRow row;
            row.scheme = scheme;
            row.receiver = p.kind;
            row.symbol_time = cfg.symbol_time;
            row.isi_length = cfg.isi_length;
            row.sample_interval = cfg.sample_interval;
            row.ber.scheme = std::string(to_string(scheme));
            row.ber.q = q;
            row.ber.trials = c.trials;
            row.window = scheme == Scheme::conventional_ook ? full : shared[i].window.window;
            row.reuse = std::monostate{};
            try {
                if (scheme != Scheme::conventional_ook)
                    detail::add_window_intermediates(row, shared[i].window);
                if (scheme == Scheme::proposed_numerical) {
                    const auto choice = numerical_reuse(row.window, cfg, p, q, rsearch);
                    row.reuse = choice.reuse;
                    row.intermediates["msinar_objective"] = choice.objective;
                } else if (scheme == Scheme::ideal) {
                    row.reuse = ideal_reuse(row.window, cfg, p, q, rsearch).reuse;
                } else if (scheme == Scheme::proposed_theoretical) {
                    const auto& s = shared[i];
                    if (!s.closed_form)
                        throw NumericalError(s.closed_form_error, s.closed_form_error_intermediates);
                    for (const auto& [k, v] : s.closed_form->as_map())
                        row.intermediates[k] = v;
                    row.intermediates["clamp_applied"] = s.closed_form->clamp_applied ? 1.0 : 0.0;
                    const ReusableWindow raw = absorbing ? ReusableWindow{TimeReuse{s.closed_form->value}}
                                                         : as_reuse(p.kind, 0.0, s.closed_form->samples);
                    row.reuse = fit_to_window(raw, row.window);
                    row.intermediates["window_clamp_applied"] =
                        absorbing ? (reuse_time(row.reuse) < s.closed_form->value ? 1.0 : 0.0)
                                  : (reuse_samples(row.reuse) < s.closed_form->samples ? 1.0 : 0.0);
                }

                const TapStats ts = reuse_adjusted_stats(row.window, row.reuse, cfg, p);
                const ThresholdChoice th = optimal_threshold(ts, q, rsearch.threshold);
                SimulationOptions sim{c.trials, point_seed(c.seed, scheme, i), c.mode, c.workers};
                row.ber = simulate_ber(cfg, p, row.window, row.reuse, q, th.threshold, sim);
                row.ber.scheme = std::string(to_string(scheme));
                row.intermediates["log_pe_analytic"] = th.log_pe;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
                if (const auto* ne = dynamic_cast<const NumericalError*>(&e))
                    for (const auto& [k, v] : ne->intermediates())
                        row.intermediates[k] = v;
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row.ber.threshold = nan;
                row.ber.analytic_pe = nan;
                row.ber.empirical_pe = nan;
                row.ber.ci95 = nan;
                row.ber.errors = 0;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline bool all_ok(const std::vector<SweepRow>& rows)
{
    for (const auto& r : rows)
        if (!r.ok)
            return false;
    return true;
}

} // namespace mcvd::harness
