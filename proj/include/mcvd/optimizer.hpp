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
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "mcvd/channel.hpp"
#include "mcvd/detection.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/metric.hpp"
#include "mcvd/parallel.hpp"
#include "mcvd/stats.hpp"

/**
 * @file optimizer.hpp
 * @brief Detection-window search and the four routes to the reusable
 * duration: exhaustive BER (ideal), mSINAR grid search (numerical), root of
 * the ISI-vs-desired residual (root), and the quadratic closed form.
 */

namespace mcvd {

// ---------------------------------------------------------------------------
// Detection window
// ---------------------------------------------------------------------------

struct WindowSearch {
    int time_steps = 2000; ///< continuous grid step is Ts / time_steps
};

struct WindowChoice {
    DetectionWindow window;
    double objective = 0.0;       ///< mSINAR, or the mean margin on the frozen branch
    double q_cutoff = 0.0;        ///< smallest Q-hat over all grid windows
    bool frozen = false;          ///< Q >= q_cutoff: the Q-independent limit window
    DetectionWindow limit_window; ///< the frozen-branch window (its t1/n1 is bar t1/bar n1)
};

namespace detail {

// Cumulative per-tap mean on window boundaries. A window is a boundary pair
// a < b; its tap-k mean is cum[k][b] - cum[k][a].
//   absorbing: boundary j is time j*Ts/M, window [t_a, t_b]
//   passive:   boundary j sits before sample j, window samples a..b-1
struct WindowLandscape {
    ReceiverKind kind;
    int boundaries = 0;
    std::vector<std::vector<double>> cum;

    WindowLandscape(const LinkConfig& cfg, const ChannelParams& p, WindowSearch search) : kind(p.kind)
    {
        const int taps = cfg.isi_length + 1;
        cum.resize(taps);
        if (p.kind == ReceiverKind::absorbing) {
            if (search.time_steps < 1)
                throw ArgumentError("window search needs at least one time step");
            boundaries = search.time_steps + 1;
            for (int k = 0; k < taps; ++k) {
                cum[k].resize(boundaries);
                for (int j = 0; j < boundaries; ++j) {
                    const double t = cfg.symbol_time * j / search.time_steps;
                    cum[k][j] = cumulative_hit(t + k * cfg.symbol_time, p);
                }
            }
        } else {
            boundaries = cfg.samples + 2;
            for (int k = 0; k < taps; ++k) {
                cum[k].assign(boundaries, 0.0);
                for (int n = 0; n <= cfg.samples; ++n)
                    cum[k][n + 1] = cum[k][n] + sample_prob(n, k, cfg, p);
            }
        }
    }

    DetectionWindow window(int a, int b, const LinkConfig& cfg, WindowSearch search) const
    {
        if (kind == ReceiverKind::absorbing)
            return TimeWindow{cfg.symbol_time * a / search.time_steps, cfg.symbol_time * b / search.time_steps};
        return SampleWindow{a, b - 1};
    }
};

struct Best {
    double value = -std::numeric_limits<double>::infinity();
    int a = -1;
    int b = -1;

    // Larger value wins; ties go to the wider window, then the earlier start.
    void offer(double v, int na, int nb)
    {
        if (a < 0 || v > value || (v == value && (nb - na > b - a || (nb - na == b - a && na < a)))) {
            value = v;
            a = na;
            b = nb;
        }
    }
};

} // namespace detail

/// Grid search for the detection window.
///
/// Below the cutoff Q-hat* (the smallest Q at which any grid window reaches
/// mSINAR = 1) the window maximizing mSINAR is returned. At and above it,
/// mSINAR saturates and the frozen branch applies: the window maximizing
/// the mean margin F^0 - sum_{k>=1} F^k, which is where t1 converges as Q
/// grows. Ties: widest window, then smallest start.
inline WindowChoice optimal_window(const LinkConfig& cfg, const ChannelParams& p, double q, WindowSearch search = {})
{
    const detail::WindowLandscape land(cfg, p, search);
    const bool absorbing = p.kind == ReceiverKind::absorbing;
    const int taps = cfg.isi_length + 1;
    const double inv_sqrt_q = q > 0.0 ? 1.0 / std::sqrt(q) : std::numeric_limits<double>::infinity();

    detail::Best by_msinar;
    detail::Best by_margin;
    double q_min = std::numeric_limits<double>::infinity();

    for (int a = 0; a < land.boundaries; ++a) {
        for (int b = a + 1; b < land.boundaries; ++b) {
            double signal = 0.0, isi = 0.0, noise = 0.0;
            for (int k = 0; k < taps; ++k) {
                const double f = land.cum[k][b] - land.cum[k][a];
                const double var = absorbing ? f * (1.0 - f) : f;
                (k == 0 ? signal : isi) += 0.5 * f;
                noise += std::sqrt(std::max(var, 0.0) / 2.0);
            }
            if (signal > isi) {
                const double root = noise / (signal - isi);
                q_min = std::min(q_min, root * root);
            }
            const double ratio = q > 0.0 ? signal / (isi + noise * inv_sqrt_q) : 0.0;
            by_msinar.offer(ratio, a, b);
            by_margin.offer(signal - isi, a, b);
        }
    }
    if (by_margin.a < 0)
        throw ArgumentError("window grid has no feasible window");

    WindowChoice out;
    out.q_cutoff = q_min;
    out.limit_window = land.window(by_margin.a, by_margin.b, cfg, search);
    out.frozen = q >= q_min;
    if (out.frozen) {
        out.window = out.limit_window;
        out.objective = by_margin.value;
    } else {
        out.window = land.window(by_msinar.a, by_msinar.b, cfg, search);
        out.objective = std::min(by_msinar.value, 1.0);
    }
    return out;
}

/// The frozen-branch window; independent of Q.
inline DetectionWindow limit_window(const LinkConfig& cfg, const ChannelParams& p, WindowSearch search = {})
{
    return optimal_window(cfg, p, std::numeric_limits<double>::infinity(), search).limit_window;
}

/// Value to which t1* converges as Q grows.
inline double bar_t1(const LinkConfig& cfg, const ChannelParams& p, WindowSearch search = {})
{
    detail::require_kind(p, ReceiverKind::absorbing);
    return std::get<TimeWindow>(limit_window(cfg, p, search)).t1;
}

/// Value to which n1* converges as Q grows.
inline int bar_n1(const LinkConfig& cfg, const ChannelParams& p)
{
    detail::require_kind(p, ReceiverKind::passive);
    return std::get<SampleWindow>(limit_window(cfg, p)).n1;
}

// ---------------------------------------------------------------------------
// Reusable duration: grid searches
// ---------------------------------------------------------------------------

struct ReuseSearch {
    int points = 400; ///< continuous candidates tu = j t1 / points, j < points
    ThresholdGrid threshold{};
    unsigned workers = 1;
};

struct ReuseChoice {
    ReusableWindow reuse;
    int index = 0;           ///< position in reuse_candidates
    double objective = 0.0;  ///< mSINAR objective (numerical) or log BER (ideal)
    ThresholdChoice threshold{};
};

/// Candidates in ascending order: tu = j t1 / points for j < points, or
/// samples 0..n1-1. A sample window starting at 0 admits no reuse.
inline std::vector<ReusableWindow> reuse_candidates(const DetectionWindow& w, int points)
{
    std::vector<ReusableWindow> out;
    if (const auto* tw = std::get_if<TimeWindow>(&w)) {
        if (points < 1)
            throw ArgumentError("reuse grid needs at least one point");
        for (int j = 0; j < points; ++j)
            out.emplace_back(TimeReuse{tw->t1 * j / points});
    } else {
        const auto& sw = std::get<SampleWindow>(w);
        for (int nu = 0; nu < sw.n1; ++nu)
            out.emplace_back(SampleReuse{nu});
        if (out.empty())
            out.emplace_back(std::monostate{});
    }
    return out;
}

/// Grid maximizer of the mSINAR reuse objective; ties go to the smallest
/// candidate.
inline ReuseChoice numerical_reuse(const DetectionWindow& w, const LinkConfig& cfg, const ChannelParams& p, double q,
                                   const ReuseSearch& search = {})
{
    const auto cands = reuse_candidates(w, search.points);
    const double q_eff = std::min(q, q_cutoff(window_stats(w, cfg, p)));
    ReuseChoice best{cands.front(), 0, -std::numeric_limits<double>::infinity(), {}};
    if (!(q_eff > 0.0))
        return best;
    for (std::size_t j = 0; j < cands.size(); ++j) {
        const double v = msinar_raw(reuse_adjusted_stats(w, cands[j], cfg, p), q_eff);
        if (v > best.objective) {
            best.reuse = cands[j];
            best.index = static_cast<int>(j);
            best.objective = v;
        }
    }
    return best;
}

/// Exhaustive search minimizing the analytic BER, each candidate at its own
/// optimal threshold; ties go to the smallest candidate.
inline ReuseChoice ideal_reuse(const DetectionWindow& w, const LinkConfig& cfg, const ChannelParams& p, double q,
                               const ReuseSearch& search = {})
{
    const auto cands = reuse_candidates(w, search.points);
    std::vector<ThresholdChoice> choice(cands.size());
    parallel_for(cands.size(), search.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j)
            choice[j] = optimal_threshold(reuse_adjusted_stats(w, cands[j], cfg, p), q, search.threshold);
    });
    std::size_t best = 0;
    for (std::size_t j = 1; j < cands.size(); ++j)
        if (choice[j].log_pe < choice[best].log_pe)
            best = j;
    return {cands[best], static_cast<int>(best), choice[best].log_pe, choice[best]};
}

inline double reuse_time(const ReusableWindow& r)
{
    const auto* tr = std::get_if<TimeReuse>(&r);
    return tr ? tr->tu : 0.0;
}

inline int reuse_samples(const ReusableWindow& r)
{
    const auto* sr = std::get_if<SampleReuse>(&r);
    return sr ? sr->nu : -1;
}

inline double numerical_tu(const TimeWindow& w, const LinkConfig& cfg, const ChannelParams& p, double q,
                           const ReuseSearch& search = {})
{
    return reuse_time(numerical_reuse(w, cfg, p, q, search).reuse);
}

inline double ideal_tu(const TimeWindow& w, const LinkConfig& cfg, const ChannelParams& p, double q,
                       const ReuseSearch& search = {})
{
    return reuse_time(ideal_reuse(w, cfg, p, q, search).reuse);
}

/// -1 when the window admits no reuse.
inline int numerical_nu(const SampleWindow& w, const LinkConfig& cfg, const ChannelParams& p, double q,
                        const ReuseSearch& search = {})
{
    return reuse_samples(numerical_reuse(w, cfg, p, q, search).reuse);
}

inline int ideal_nu(const SampleWindow& w, const LinkConfig& cfg, const ChannelParams& p, double q,
                    const ReuseSearch& search = {})
{
    return reuse_samples(ideal_reuse(w, cfg, p, q, search).reuse);
}

// ---------------------------------------------------------------------------
// Reusable duration: root of the residual
// ---------------------------------------------------------------------------

struct RootResult {
    double value = 0.0;
    double bracket_lo = 0.0; ///< residual > 0 here
    double bracket_hi = 0.0; ///< residual < 0 here
    bool clamp_applied = false;
};

/// Root of sum_k h(t + k Ts) = h(t) on (1e-6 s, peak_time] by bisection to
/// 1e-9 s, capped at `cap` (bar t1). With no ISI there is nothing to reuse
/// and 0 is returned; if ISI still dominates at the peak the cap is returned.
inline RootResult root_tu(const LinkConfig& cfg, const ChannelParams& p, double cap)
{
    detail::require_kind(p, ReceiverKind::absorbing);
    constexpr double lo = 1e-6;
    const double hi = peak_time(p);
    auto f = [&](double t) { return root_residual(t, cfg, p); };
    RootResult out{0.0, lo, hi, false};
    if (cfg.isi_length == 0 || !(f(lo) > 0.0))
        return out;
    if (!(f(hi) < 0.0)) {
        out.value = cap;
        out.clamp_applied = true;
        return out;
    }
    const auto [a, b] = boost::math::tools::bisect(f, lo, hi, [](double x, double y) { return std::abs(y - x) <= 1e-9; });
    out.bracket_lo = a;
    out.bracket_hi = b;
    out.value = 0.5 * (a + b);
    if (out.value > cap) {
        out.value = cap;
        out.clamp_applied = true;
    }
    return out;
}

inline RootResult root_tu(const LinkConfig& cfg, const ChannelParams& p)
{
    return root_tu(cfg, p, bar_t1(cfg, p));
}

struct SampleRootResult {
    int value = -1; ///< -1: no reuse possible
    bool clamp_applied = false;
};

/// Discrete residual sum_{k=1..L} p_{n,k} - p_{n,0}.
inline double sample_residual(int n, const LinkConfig& cfg, const ChannelParams& p)
{
    double isi = 0.0;
    for (int k = 1; k <= cfg.isi_length; ++k)
        isi += sample_prob(n, k, cfg, p);
    return isi - sample_prob(n, 0, cfg, p);
}

/// Last sample of the leading run where ISI is at least the desired
/// response, capped at bar_n1 - 1.
inline SampleRootResult root_nu(const LinkConfig& cfg, const ChannelParams& p, int bar_n1_value)
{
    detail::require_kind(p, ReceiverKind::passive);
    int n = 0;
    while (n + 1 <= cfg.samples && sample_residual(n + 1, cfg, p) >= 0.0)
        ++n;
    SampleRootResult out{n, false};
    if (n > bar_n1_value - 1) {
        out.value = bar_n1_value - 1;
        out.clamp_applied = true;
    }
    return out;
}

inline SampleRootResult root_nu(const LinkConfig& cfg, const ChannelParams& p)
{
    return root_nu(cfg, p, bar_n1(cfg, p));
}

// ---------------------------------------------------------------------------
// Reusable duration: closed form
// ---------------------------------------------------------------------------

/// Intermediates of the quadratic closed form. The passive variant fills
/// n_hat and samples; the absorbing one t_hat and value.
struct ClosedFormResult {
    ReceiverKind kind = ReceiverKind::absorbing;
    double m = 0.0;              ///< d/sqrt(4D), or (d+r)/sqrt(4D) passive [s^1/2]
    double t_hat = 0.0;          ///< pre-approximation reusable time [s]
    int n_hat = -1;              ///< pre-approximation sample (passive)
    double ratio_sum = 0.0;      ///< I (absorbing) or W (passive)
    double log_ratio_sum = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double quadratic_root = 0.0; ///< (-beta + sqrt(beta^2 + 4 alpha)) / (2 alpha) [s]
    double value = 0.0;          ///< t_u (absorbing)
    int samples = -1;            ///< n_u (passive); -1 when no reuse fits
    bool clamp_applied = false;

    std::map<std::string, double> as_map() const
    {
        return {{"m", m},         {"t_hat", t_hat}, {"n_hat", static_cast<double>(n_hat)},
                {"ratio_sum", ratio_sum}, {"log_ratio_sum", log_ratio_sum},
                {"alpha", alpha}, {"beta", beta},  {"quadratic_root", quadratic_root}};
    }
};

namespace detail {

// Shared algebra of the quadratic closed form; times are in seconds.
struct Quadratic {
    double a;    // 51 Ts - 15 m^2 Ts
    double b;    // 60 Ts - 37 m^2
    double disc; // b^2 + 56 a m^2 Ts
};

inline Quadratic pre_quadratic(double m2, double ts)
{
    const double a = 51.0 * ts - 15.0 * m2 * ts;
    const double b = 60.0 * ts - 37.0 * m2;
    return {a, b, b * b + 56.0 * a * m2 * ts};
}

inline void finish_closed_form(ClosedFormResult& out, double m2, double ts)
{
    const double ln = out.log_ratio_sum;
    out.alpha = (51.0 * ts - 51.0 * ts * ln - 15.0 * m2 * ts) / (14.0 * m2 * ts * ts);
    out.beta = (60.0 * ts - 14.0 * ts * ln - 37.0 * m2) / (14.0 * m2 * ts);
    const double disc = out.beta * out.beta + 4.0 * out.alpha;
    if (disc < 0.0 || out.alpha == 0.0) {
        auto im = out.as_map();
        im["discriminant"] = disc;
        throw NumericalError("closed-form reusable duration: negative discriminant or zero alpha", im);
    }
    out.quadratic_root = (-out.beta + std::sqrt(disc)) / (2.0 * out.alpha);
    if (!(out.quadratic_root >= 0.0) || !std::isfinite(out.quadratic_root))
        throw NumericalError("closed-form reusable duration: negative or non-finite root", out.as_map());
}

} // namespace detail

/// Closed-form reusable duration for the absorbing receiver,
/// min(quadratic root, bar t1).
inline ClosedFormResult closed_form_tu(const LinkConfig& cfg, const ChannelParams& p, double bar_t1_value)
{
    detail::require_kind(p, ReceiverKind::absorbing);
    if (cfg.isi_length < 1)
        throw ArgumentError("closed-form reusable duration needs L >= 1");
    const double ts = cfg.symbol_time;
    const double m2 = p.distance * p.distance / (4.0 * p.diffusion);

    ClosedFormResult out;
    out.kind = ReceiverKind::absorbing;
    out.m = std::sqrt(m2);
    const auto pre = detail::pre_quadratic(m2, ts);
    if (pre.disc < 0.0 || pre.a == 0.0)
        throw NumericalError("closed-form reusable duration: invalid pre-approximation", out.as_map());
    out.t_hat = (-pre.b + std::sqrt(pre.disc)) / pre.a;

    const double ref = hit_rate(ts + out.t_hat, p);
    if (!(ref > 0.0))
        throw NumericalError("closed-form reusable duration: h(Ts + t_hat) vanishes", out.as_map());
    for (int k = 1; k <= cfg.isi_length; ++k)
        out.ratio_sum += hit_rate(k * ts + out.t_hat, p) / ref;
    out.log_ratio_sum = std::log(out.ratio_sum);

    detail::finish_closed_form(out, m2, ts);
    out.value = out.quadratic_root;
    if (out.value > bar_t1_value) {
        out.value = bar_t1_value;
        out.clamp_applied = true;
    }
    return out;
}

inline ClosedFormResult closed_form_tu(const LinkConfig& cfg, const ChannelParams& p)
{
    return closed_form_tu(cfg, p, bar_t1(cfg, p));
}

/// Closed-form reusable sample count for the passive receiver,
/// min(floor(root / t_s), bar n1 - 1).
inline ClosedFormResult closed_form_nu(const LinkConfig& cfg, const ChannelParams& p, int bar_n1_value)
{
    detail::require_kind(p, ReceiverKind::passive);
    if (cfg.isi_length < 1)
        throw ArgumentError("closed-form reusable duration needs L >= 1");
    const double ts = cfg.symbol_time;
    const double reach = p.distance + p.radius;
    const double m2 = reach * reach / (4.0 * p.diffusion);

    ClosedFormResult out;
    out.kind = ReceiverKind::passive;
    out.m = std::sqrt(m2);
    const auto pre = detail::pre_quadratic(m2, ts);
    if (pre.disc < 0.0 || pre.a == 0.0)
        throw NumericalError("closed-form reusable samples: invalid pre-approximation", out.as_map());
    out.t_hat = (-pre.b + std::sqrt(pre.disc)) / pre.a;
    const double n_hat = std::floor(out.t_hat / cfg.sample_interval);
    if (!(n_hat >= 0.0) || n_hat > cfg.samples)
        throw NumericalError("closed-form reusable samples: pre-approximation sample out of range", out.as_map());
    out.n_hat = static_cast<int>(n_hat);

    const double ref = sample_prob(out.n_hat, 1, cfg, p);
    if (!(ref > 0.0))
        throw NumericalError("closed-form reusable samples: degenerate W (p_{n_hat,1} = 0)", out.as_map());
    for (int k = 1; k <= cfg.isi_length; ++k)
        out.ratio_sum += sample_prob(out.n_hat, k, cfg, p) / ref;
    out.log_ratio_sum = std::log(out.ratio_sum);

    detail::finish_closed_form(out, m2, ts);
    const double floored = std::floor(out.quadratic_root / cfg.sample_interval);
    const int cap = bar_n1_value - 1;
    if (floored > cap) {
        out.samples = cap;
        out.clamp_applied = true;
    } else {
        out.samples = static_cast<int>(floored);
    }
    out.value = out.samples * cfg.sample_interval;
    return out;
}

inline ClosedFormResult closed_form_nu(const LinkConfig& cfg, const ChannelParams& p)
{
    return closed_form_nu(cfg, p, bar_n1(cfg, p));
}

// ---------------------------------------------------------------------------
// Everything at once
// ---------------------------------------------------------------------------

struct OptimizeOptions {
    WindowSearch window{};
    ReuseSearch reuse{};
    bool with_ideal = true;
};

/// Reuse window restricted to fit before the detection window.
inline ReusableWindow fit_to_window(const ReusableWindow& r, const DetectionWindow& w)
{
    if (const auto* tr = std::get_if<TimeReuse>(&r))
        return TimeReuse{std::min(tr->tu, std::get<TimeWindow>(w).t1)};
    if (const auto* sr = std::get_if<SampleReuse>(&r)) {
        const int cap = std::get<SampleWindow>(w).n1 - 1;
        const int nu = std::min(sr->nu, cap);
        if (nu < 0)
            return std::monostate{};
        return SampleReuse{nu};
    }
    return r;
}

struct OptimizationResult {
    ReceiverKind kind = ReceiverKind::absorbing;
    double q = 0.0;
    WindowChoice window;
    double bar_t1 = 0.0; ///< absorbing
    int bar_n1 = -1;     ///< passive

    std::optional<ClosedFormResult> closed_form;
    std::string closed_form_error;
    std::map<std::string, double> closed_form_error_intermediates;

    RootResult root{};             ///< absorbing
    SampleRootResult root_samples{}; ///< passive

    ReuseChoice numerical;
    std::optional<ReuseChoice> ideal;

    /// Candidates keyed by route: ideal, numerical, root, closed_form.
    std::map<std::string, ReusableWindow> candidates;
    bool clamp_applied = false;
    std::vector<std::string> warnings;
};

inline ReusableWindow as_reuse(ReceiverKind kind, double tu, int nu)
{
    if (kind == ReceiverKind::absorbing)
        return TimeReuse{tu};
    if (nu < 0)
        return std::monostate{};
    return SampleReuse{nu};
}

/// Window, bar value and all reusable-duration candidates at one Q.
inline OptimizationResult optimize(const LinkConfig& cfg, const ChannelParams& p, double q,
                                   const OptimizeOptions& opt = {})
{
    OptimizationResult out;
    out.kind = p.kind;
    out.q = q;
    out.window = optimal_window(cfg, p, q, opt.window);
    const auto& w = out.window.window;
    const bool absorbing = p.kind == ReceiverKind::absorbing;

    if (absorbing) {
        out.bar_t1 = std::get<TimeWindow>(out.window.limit_window).t1;
        out.root = root_tu(cfg, p, out.bar_t1);
        out.candidates["root"] = fit_to_window(TimeReuse{out.root.value}, w);
        out.clamp_applied = out.root.clamp_applied;
    } else {
        out.bar_n1 = std::get<SampleWindow>(out.window.limit_window).n1;
        out.root_samples = root_nu(cfg, p, out.bar_n1);
        out.candidates["root"] = fit_to_window(as_reuse(p.kind, 0.0, out.root_samples.value), w);
        out.clamp_applied = out.root_samples.clamp_applied;
    }

    try {
        out.closed_form = absorbing ? closed_form_tu(cfg, p, out.bar_t1) : closed_form_nu(cfg, p, out.bar_n1);
        out.candidates["closed_form"] =
            fit_to_window(as_reuse(p.kind, out.closed_form->value, out.closed_form->samples), w);
        out.clamp_applied = out.clamp_applied || out.closed_form->clamp_applied;
    } catch (const NumericalError& e) {
        out.closed_form_error = e.what();
        out.closed_form_error_intermediates = e.intermediates();
    } catch (const ArgumentError& e) {
        out.closed_form_error = e.what();
    }

    out.numerical = numerical_reuse(w, cfg, p, q, opt.reuse);
    out.candidates["numerical"] = out.numerical.reuse;
    if (opt.with_ideal) {
        out.ideal = ideal_reuse(w, cfg, p, q, opt.reuse);
        out.candidates["ideal"] = out.ideal->reuse;
    }

    for (const auto& [name, r] : out.candidates) {
        const double ratio = noise_neglect_ratio(w, r, cfg, p);
        if (ratio > noise_neglect_warning_level)
            out.warnings.push_back("reuse noise not negligible for " + name + " candidate (variance ratio " +
                                   std::to_string(ratio) + ")");
    }
    return out;
}

} // namespace mcvd
