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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mcvd/channel.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/parallel.hpp"
#include "mcvd/rng.hpp"
#include "mcvd/special.hpp"
#include "mcvd/stats.hpp"

/**
 * @file detection.hpp
 * @brief Single-threshold OOK detection over the Gaussian mixture induced by
 * equiprobable ISI bit patterns.
 *
 * The received count for pattern b = (x_k, x_{k-1}, ..., x_{k-L}) is
 * Gaussian with mean Q sum_i b_i mean_i and variance Q sum_i b_i var_i. The
 * bit error probability averages the per-pattern error over all 2^(L+1)
 * patterns; the all-zero pattern is a point mass at 0.
 */

namespace mcvd {

inline constexpr int max_enumerated_isi = 20;

struct MixtureComponent {
    std::uint32_t pattern = 0; ///< bit i is x_{k-i}
    double mean = 0.0;
    double variance = 0.0;

    bool current_bit() const { return (pattern & 1u) != 0; }
};

inline std::vector<MixtureComponent> mixture_components(const TapStats& ts, double q)
{
    const int l = ts.isi_length();
    if (l > max_enumerated_isi)
        throw ArgumentError("ISI length too large to enumerate bit patterns (max 20)");
    const std::uint32_t count = 1u << (l + 1);
    std::vector<MixtureComponent> out(count);
    for (std::uint32_t pattern = 0; pattern < count; ++pattern) {
        double mean = 0.0;
        double var = 0.0;
        for (int i = 0; i <= l; ++i) {
            if (pattern >> i & 1u) {
                mean += ts.taps[i].mean;
                var += ts.taps[i].var;
            }
        }
        out[pattern] = {pattern, q * mean, q * var};
    }
    return out;
}

namespace detail {

// Probability that component c is decided wrongly at threshold xi. The
// decision is 1 iff count >= xi.
inline double component_error(const MixtureComponent& c, double xi)
{
    if (c.variance <= 0.0) {
        const bool decides_one = c.mean >= xi;
        return decides_one != c.current_bit() ? 1.0 : 0.0;
    }
    const double z = (xi - c.mean) / std::sqrt(c.variance);
    return c.current_bit() ? normal_tail(-z) : normal_tail(z);
}

inline double log_component_error(const MixtureComponent& c, double xi)
{
    if (c.variance <= 0.0) {
        const bool decides_one = c.mean >= xi;
        return decides_one != c.current_bit() ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    const double z = (xi - c.mean) / std::sqrt(c.variance);
    return c.current_bit() ? log_normal_tail(-z) : log_normal_tail(z);
}

} // namespace detail

inline double analytic_ber(const std::vector<MixtureComponent>& comps, double xi)
{
    double sum = 0.0;
    for (const auto& c : comps)
        sum += detail::component_error(c, xi);
    return sum / static_cast<double>(comps.size());
}

/// Average bit error probability at threshold xi.
inline double analytic_ber(const TapStats& ts, double q, double xi)
{
    return analytic_ber(mixture_components(ts, q), xi);
}

/// Natural log of analytic_ber, accurate where the linear value underflows.
inline double log_analytic_ber(const std::vector<MixtureComponent>& comps, double xi)
{
    double acc = -std::numeric_limits<double>::infinity();
    for (const auto& c : comps)
        acc = log_add(acc, detail::log_component_error(c, xi));
    return acc - std::log(static_cast<double>(comps.size()));
}

inline double log_analytic_ber(const TapStats& ts, double q, double xi)
{
    return log_analytic_ber(mixture_components(ts, q), xi);
}

/// Uniform threshold grid over [min mean - 6 sd_max, max mean + 6 sd_max].
struct ThresholdGrid {
    int points = 2048;
};

struct ThresholdChoice {
    double threshold = 0.0;
    double pe = 0.0;     ///< analytic BER at the threshold
    double log_pe = 0.0; ///< its natural log (finite when pe underflows)
};

inline std::vector<double> threshold_grid(const std::vector<MixtureComponent>& comps, ThresholdGrid grid)
{
    if (grid.points < 1)
        throw ArgumentError("threshold grid must have at least one point");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double var_max = 0.0;
    for (const auto& c : comps) {
        lo = std::min(lo, c.mean);
        hi = std::max(hi, c.mean);
        var_max = std::max(var_max, c.variance);
    }
    const double spread = 6.0 * std::sqrt(var_max);
    lo -= spread;
    hi += spread;
    std::vector<double> out(static_cast<std::size_t>(grid.points));
    for (int j = 0; j < grid.points; ++j)
        out[j] = grid.points == 1 ? lo : lo + (hi - lo) * j / (grid.points - 1);
    return out;
}

/// Exhaustive search for the BER-minimizing threshold; ties go to the
/// smallest threshold.
inline ThresholdChoice optimal_threshold(const std::vector<MixtureComponent>& comps, ThresholdGrid grid = {})
{
    const auto xs = threshold_grid(comps, grid);
    std::vector<double> pe(xs.size());
    std::size_t best = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        pe[j] = analytic_ber(comps, xs[j]);
        if (pe[j] < pe[best])
            best = j;
    }
    // Below this the linear sums lose resolution (and eventually underflow to
    // exact ties), so the comparison moves to the log domain.
    constexpr double linear_floor = 1e-250;
    if (pe[best] >= linear_floor)
        return {xs[best], pe[best], std::log(pe[best])};

    double best_log = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (pe[j] >= linear_floor)
            continue;
        const double lp = log_analytic_ber(comps, xs[j]);
        if (lp < best_log) {
            best_log = lp;
            best = j;
        }
    }
    return {xs[best], std::exp(best_log), best_log};
}

inline ThresholdChoice optimal_threshold(const TapStats& ts, double q, ThresholdGrid grid = {})
{
    return optimal_threshold(mixture_components(ts, q), grid);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

enum class SimulationMode { gaussian, binomial };

inline std::string_view to_string(SimulationMode mode)
{
    return mode == SimulationMode::gaussian ? "gaussian" : "binomial";
}

inline std::optional<SimulationMode> parse_mode(std::string_view name)
{
    if (name == "gaussian")
        return SimulationMode::gaussian;
    if (name == "binomial")
        return SimulationMode::binomial;
    return std::nullopt;
}

struct SimulationOptions {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    SimulationMode mode = SimulationMode::gaussian;
    unsigned workers = 1; ///< 0 = hardware concurrency; results do not depend on it
};

/// One evaluated operating point.
struct BerPoint {
    std::string scheme;
    double q = 0.0;
    double threshold = 0.0;
    double analytic_pe = 0.0;
    double empirical_pe = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double ci95 = 0.0; ///< 1.96 sqrt(p(1-p)/trials)

    double standard_error() const { return ci95 / 1.96; }
};

inline double ci95_half_width(double p, std::uint64_t trials)
{
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

/// Monte Carlo BER of one window / reuse / threshold choice.
///
/// Each trial draws the current bit and L past bits from its own stream
/// (seed, trial index), so the estimate is independent of `workers`.
/// gaussian mode samples the Gaussian count model for the window and (if
/// any) the reuse window and subtracts. binomial mode counts molecules:
/// absorbing taps draw window ~ Bin(Q, F_w) and, from the molecules not
/// absorbed there, reuse ~ Bin(Q - window, F_r / (1 - F_w)); passive taps
/// draw independent Poisson counts with means Q sum p_{n,i}.
inline BerPoint simulate_ber(const LinkConfig& cfg, const ChannelParams& p, const DetectionWindow& w,
                             const ReusableWindow& r, double q, double threshold,
                             const SimulationOptions& opt)
{
    if (opt.trials < 1)
        throw ArgumentError("simulate_ber needs at least one trial");
    if (!(q >= 0.0))
        throw ArgumentError("Q must be >= 0");
    if (opt.mode == SimulationMode::binomial && q != std::floor(q))
        throw ArgumentError("binomial mode needs an integer Q");

    const TapStats win = window_stats(w, cfg, p);
    const std::vector<double> reuse = reuse_fractions(w, r, cfg, p);
    const bool has_reuse = !is_empty(r);
    const bool absorbing = p.kind == ReceiverKind::absorbing;
    const int taps = cfg.isi_length + 1;

    std::vector<double> reuse_var(reuse.size());
    std::vector<double> reuse_cond(reuse.size()); // F_r / (1 - F_w)
    for (std::size_t i = 0; i < reuse.size(); ++i) {
        reuse_var[i] = absorbing ? reuse[i] * (1.0 - reuse[i]) : reuse[i];
        const double rest = 1.0 - win.taps[i].mean;
        reuse_cond[i] = rest > 0.0 ? std::clamp(reuse[i] / rest, 0.0, 1.0) : 0.0;
    }
    const auto molecules = static_cast<long long>(q);

    auto run_trial = [&](std::uint64_t trial) -> bool {
        auto gen = stream(opt.seed, trial);
        std::uint32_t bits = 0;
        int bits_left = 0;
        double count = 0.0;
        bool current = false;
        double mean_w = 0.0, var_w = 0.0, mean_r = 0.0, var_r = 0.0;
        for (int i = 0; i < taps; ++i) {
            if (bits_left == 0) {
                bits = gen();
                bits_left = 32;
            }
            const bool bit = (bits & 1u) != 0;
            bits >>= 1;
            --bits_left;
            if (i == 0)
                current = bit;
            if (!bit)
                continue;
            if (opt.mode == SimulationMode::gaussian) {
                mean_w += win.taps[i].mean;
                var_w += win.taps[i].var;
                mean_r += reuse[i];
                var_r += reuse_var[i];
            } else if (absorbing) {
                std::binomial_distribution<long long> in_window(molecules, std::clamp(win.taps[i].mean, 0.0, 1.0));
                const long long got = in_window(gen);
                count += static_cast<double>(got);
                if (has_reuse && reuse_cond[i] > 0.0) {
                    std::binomial_distribution<long long> in_reuse(molecules - got, reuse_cond[i]);
                    count -= static_cast<double>(in_reuse(gen));
                }
            } else {
                const double mw = q * win.taps[i].mean;
                if (mw > 0.0)
                    count += static_cast<double>(std::poisson_distribution<long long>(mw)(gen));
                const double mr = q * reuse[i];
                if (has_reuse && mr > 0.0)
                    count -= static_cast<double>(std::poisson_distribution<long long>(mr)(gen));
            }
        }
        if (opt.mode == SimulationMode::gaussian) {
            std::normal_distribution<double> normal;
            count = q * mean_w + std::sqrt(q * var_w) * normal(gen);
            if (has_reuse)
                count -= q * mean_r + std::sqrt(q * var_r) * normal(gen);
        }
        return (count >= threshold) != current;
    };

    std::atomic<std::uint64_t> errors{0};
    parallel_for(static_cast<std::size_t>(opt.trials), opt.workers, [&](std::size_t begin, std::size_t end) {
        std::uint64_t local = 0;
        for (std::size_t t = begin; t < end; ++t)
            local += run_trial(t) ? 1u : 0u;
        errors.fetch_add(local, std::memory_order_relaxed);
    });

    BerPoint out;
    out.q = q;
    out.threshold = threshold;
    out.analytic_pe = analytic_ber(reuse_adjusted_stats(w, r, cfg, p), q, threshold);
    out.trials = opt.trials;
    out.errors = errors.load();
    out.empirical_pe = static_cast<double>(out.errors) / static_cast<double>(opt.trials);
    out.ci95 = ci95_half_width(out.empirical_pe, opt.trials);
    return out;
}

} // namespace mcvd
