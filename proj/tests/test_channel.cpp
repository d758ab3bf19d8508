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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mcvd/channel.hpp"
#include "oracles.hpp"

using namespace mcvd;

namespace {

const ChannelParams abs_p = default_absorbing();
const ChannelParams pas_p = default_passive();
constexpr double inf = std::numeric_limits<double>::infinity();

double h_oracle(double t) { return oracle::absorbing_rate(t, abs_p.distance, abs_p.radius, abs_p.diffusion); }

} // namespace

TEST(HitRate, UnderflowsNearZero) { EXPECT_LT(hit_rate(1e-12, abs_p), 1e-300); }

TEST(HitRate, RejectsNonPositiveTime)
{
    EXPECT_THROW(hit_rate(0.0, abs_p), DomainError);
    EXPECT_THROW(hit_rate(-1.0, abs_p), DomainError);
}

TEST(HitRate, MatchesDirectFormula)
{
    for (double t : {1e-3, 0.01, 0.05, 0.2, 1.0})
        EXPECT_NEAR(hit_rate(t, abs_p), h_oracle(t), 1e-12 * h_oracle(t));
}

TEST(HitRate, ArgmaxIsPeakTime)
{
    const double d2_over_D = abs_p.distance * abs_p.distance / abs_p.diffusion;
    const double t = oracle::golden_max([](double x) { return h_oracle(x); }, 1e-6, 10.0 * d2_over_D, 1e-12);
    EXPECT_NEAR(t, peak_time(abs_p), 1e-6 * peak_time(abs_p));
}

TEST(HitFraction, TotalMassIsCaptureProbability)
{
    const double c = abs_p.radius / (abs_p.distance + abs_p.radius);
    EXPECT_DOUBLE_EQ(hit_fraction(0.0, inf, abs_p), c);
    EXPECT_NEAR(hit_fraction(0.0, 1e12, abs_p), c, 1e-6);
}

TEST(HitFraction, EmptyIntervalIsZero)
{
    for (double t : {0.0, 1e-3, 0.05, 3.0})
        EXPECT_EQ(hit_fraction(t, t, abs_p), 0.0);
}

TEST(HitFraction, ArgumentErrors)
{
    EXPECT_THROW(hit_fraction(0.2, 0.1, abs_p), ArgumentError);
    EXPECT_THROW(hit_fraction(-0.1, 0.1, abs_p), DomainError);
}

TEST(HitFraction, AdditiveNonnegativeBounded)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double c = abs_p.radius / (abs_p.distance + abs_p.radius);
    for (int i = 0; i < 1000; ++i) {
        double x[3] = {u(rng), u(rng), u(rng)};
        std::sort(x, x + 3);
        const double ab = hit_fraction(x[0], x[1], abs_p);
        const double bc = hit_fraction(x[1], x[2], abs_p);
        const double ac = hit_fraction(x[0], x[2], abs_p);
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ac, c);
        EXPECT_NEAR(ab + bc, ac, 1e-15);
    }
}

TEST(HitFraction, MatchesQuadrature)
{
    std::mt19937_64 rng(11);
    const double tmax = peak_time(abs_p);
    std::uniform_real_distribution<double> u(1e-4, 10.0 * tmax);
    for (int i = 0; i < 200; ++i) {
        double a = u(rng), b = u(rng);
        if (a > b)
            std::swap(a, b);
        const double q = oracle::integrate_pieces([](double t) { return h_oracle(t); }, a, b, 8);
        EXPECT_NEAR(hit_fraction(a, b, abs_p), q, 1e-9);
    }
}

TEST(TapFraction, ZeroTapIsWindowFraction)
{
    const TimeWindow w{0.02, 0.15};
    EXPECT_EQ(tap_fraction(0, w, 0.2, abs_p), hit_fraction(0.02, 0.15, abs_p));
}

TEST(TapFraction, ShiftedTapMatchesQuadrature)
{
    const TimeWindow w{0.02, 0.15};
    const double q = oracle::integrate_pieces([](double t) { return h_oracle(t); }, 0.22, 0.35, 8);
    EXPECT_NEAR(tap_fraction(1, w, 0.2, abs_p), q, 1e-9);
    for (int i = 0; i < 12; ++i)
        EXPECT_GE(tap_fraction(i, w, 0.2, abs_p), 0.0);
}

TEST(PassiveProb, UnderflowAndErrors)
{
    EXPECT_EQ(passive_prob(1e-12, pas_p), 0.0);
    EXPECT_THROW(passive_prob(0.0, pas_p), DomainError);
}

TEST(PassiveProb, LinearInVolume)
{
    ChannelParams doubled = pas_p;
    doubled.volume *= 2.0;
    for (double t : {0.05, 0.3, 1.0})
        EXPECT_NEAR(passive_prob(t, doubled), 2.0 * passive_prob(t, pas_p), 1e-15 * passive_prob(t, doubled));
}

TEST(PassiveProb, MatchesFormulaAndArgmax)
{
    auto f = [](double t) { return oracle::passive_rate(t, pas_p.distance, pas_p.radius, pas_p.diffusion); };
    for (double t : {0.01, 0.2, 0.9})
        EXPECT_NEAR(passive_prob(t, pas_p), f(t), 1e-12 * f(t));
    const double t = oracle::golden_max(f, 1e-6, 5.0, 1e-12);
    EXPECT_NEAR(t, peak_time(pas_p), 1e-6 * peak_time(pas_p));
}

TEST(PeakTime, AbsorbingDefaultValue) { EXPECT_NEAR(peak_time(abs_p), 25.0 / (6.0 * 79.4), 1e-15); }

TEST(PeakTime, Scaling)
{
    ChannelParams faster = abs_p;
    faster.diffusion *= 2.0;
    EXPECT_NEAR(peak_time(faster), peak_time(abs_p) / 2.0, 1e-16);

    const ChannelParams big = passive_receiver(10e-6, 5e-6, 79.4e-12);
    const ChannelParams third = passive_receiver(10e-6 / 3.0, 5e-6 / 3.0, 79.4e-12);
    EXPECT_NEAR(peak_time(big), 9.0 * peak_time(third), 1e-12 * peak_time(big));
}

TEST(Cir, UnimodalOnFineGrid)
{
    for (const auto& p : {abs_p, pas_p}) {
        const double tmax = peak_time(p);
        double prev = cir(1e-4, p);
        for (double t = 2e-4; t < 5.0 * tmax; t += 1e-4) {
            const double v = cir(t, p);
            if (v == 0.0 && prev == 0.0) {
                // both underflow near the origin
            } else if (t + 1e-4 <= tmax) {
                EXPECT_GT(v, prev) << t;
            } else if (t - 1e-4 >= tmax) {
                EXPECT_LT(v, prev) << t;
            }
            prev = v;
        }
    }
}

TEST(Cir, ZeroAtOrigin)
{
    EXPECT_EQ(cir(0.0, abs_p), 0.0);
    EXPECT_EQ(cir(0.0, pas_p), 0.0);
}

TEST(SampleProb, OriginConvention)
{
    const LinkConfig cfg = passive_link(pas_p, 1.0, 3);
    EXPECT_EQ(sample_prob(0, 0, cfg, pas_p), 0.0);
    EXPECT_GT(sample_prob(0, 1, cfg, pas_p), 0.0);
}

TEST(SampleProb, IntegerStrideIdentity)
{
    const LinkConfig cfg = LinkConfig::uniform(1.0, 3, 20);
    for (int n = 0; n <= 20; ++n)
        for (int i = 0; i <= 2; ++i)
            EXPECT_NEAR(sample_prob(n, i, cfg, pas_p), sample_prob(n + 20 * i, 0, cfg, pas_p),
                        1e-13 * sample_prob(n + 20 * i, 0, cfg, pas_p));
}

TEST(SampleProb, IsiBelowDesiredPeak)
{
    const LinkConfig cfg = passive_link(pas_p, 1.0, 1);
    const int peak = static_cast<int>(std::lround(peak_time(pas_p) / cfg.sample_interval));
    const double top = sample_prob(peak, 0, cfg, pas_p);
    for (int n = 0; n <= cfg.samples; ++n)
        EXPECT_LT(sample_prob(n, 1, cfg, pas_p), top);
}

TEST(PassiveLink, SamplingRule)
{
    const LinkConfig cfg = passive_link(pas_p, 1.0, 3);
    EXPECT_DOUBLE_EQ(cfg.sample_interval, peak_time(pas_p) / 6.0);
    EXPECT_EQ(cfg.samples, static_cast<int>(std::floor(1.0 / cfg.sample_interval)));
}

TEST(Validation, PassiveRatioRejectedUnlessOverridden)
{
    const ChannelParams wide = passive_receiver(10e-6, 5e-6, 79.4e-12);
    EXPECT_FALSE(check_params(wide).empty());
    EXPECT_THROW(validate(wide), ConfigError);
    EXPECT_TRUE(check_params(wide, true).empty());
    EXPECT_TRUE(check_params(pas_p).empty());
    EXPECT_DOUBLE_EQ(pas_p.volume, 4.0 / 3.0 * std::numbers::pi * std::pow(1.5e-6, 3));
}

TEST(Validation, ReportsEveryProblem)
{
    const ChannelParams bad{-1.0, 0.0, 0.0, 0.0, ReceiverKind::absorbing};
    EXPECT_EQ(check_params(bad).size(), 4u);
}

TEST(Validation, SymbolTimeMustExceedPeak)
{
    const LinkConfig short_ts = LinkConfig::uniform(0.01, 1);
    EXPECT_FALSE(check_link(short_ts, abs_p).empty());
    EXPECT_TRUE(check_link(short_ts, abs_p, true).empty());
}
