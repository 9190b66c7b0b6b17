// SPDX-License-Identifier: Apache-2.0
//
// vlcsim - multi-user indoor visible light communication simulator
// Copyright (C) 2026 The vlcsim authors
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
// ------------------------------------------------------------------------

#include "vlc/channel.hpp"
#include "vlc/error.hpp"
#include "vlc/link.hpp"
#include "vlc/scene.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace vlc;

namespace
{

ImpulseResponse from_taps(const std::vector<double> &taps, double bw = 0.05e-9)
{
    return ImpulseResponse::from_absolute(bw, taps, std::vector<double>(taps.size(), 0.0),
                                          std::vector<double>(taps.size(), 0.0));
}

ImpulseResponse two_taps(double first, double second, std::size_t gap)
{
    std::vector<double> taps(gap + 1, 0.0);
    taps.front() = first;
    taps.back() = second;
    return from_taps(taps);
}

// Integrate-and-dump receiver fed with a periodic maximal-length sequence: smallest
// sampled "one" minus largest sampled "zero".
double prbs_eye_opening(const ImpulseResponse &ir, double bit_rate)
{
    const int order = 10;
    const std::size_t period = (1u << order) - 1;
    std::vector<int> bits(period);
    unsigned lfsr = 1;
    for (std::size_t i = 0; i < period; ++i)
    {
        bits[i] = static_cast<int>(lfsr & 1u);
        const unsigned fb = ((lfsr >> 9) ^ (lfsr >> 6)) & 1u; // x^10 + x^7 + 1
        lfsr = ((lfsr << 1) | fb) & ((1u << order) - 1);
    }

    const double slot = 1.0 / bit_rate;
    std::vector<double> pulse;
    for (std::size_t k = 0; k < ir.size(); ++k)
    {
        const auto s = static_cast<std::size_t>(std::floor(static_cast<double>(k) * ir.bin_width / slot));
        if (s >= pulse.size())
            pulse.resize(s + 1, 0.0);
        pulse[s] += ir.los[k] + ir.bounce1[k] + ir.bounce2[k];
    }

    double min_one = INFINITY, max_zero = -INFINITY;
    for (std::size_t n = 0; n < period; ++n)
    {
        double y = 0.0;
        for (std::size_t k = 0; k < pulse.size(); ++k)
            y += bits[(n + period * (k / period + 1) - k) % period] * pulse[k];
        if (bits[n])
            min_one = std::min(min_one, y);
        else
            max_zero = std::max(max_zero, y);
    }
    return min_one - max_zero;
}

} // namespace

TEST(Eye, SingleBinHasNoIsi)
{
    const auto ir = from_taps({0.0, 3e-7});
    for (double r : {1e6, 1e9, 1e11})
    {
        const auto e = eye_powers(ir, 2.0, r);
        EXPECT_EQ(e.ps0, 0.0);
        EXPECT_DOUBLE_EQ(e.ps1, 6e-7);
    }
}

TEST(Eye, ConstructedSplit)
{
    const auto ir = two_taps(1.0, 1.0, 20); // 1 ns apart
    const auto e = eye_powers(ir, 1.0, 2e9);
    EXPECT_DOUBLE_EQ(e.ps1, 1.0);
    EXPECT_DOUBLE_EQ(e.ps0, 1.0);
}

TEST(Eye, ConservesPowerAndShrinksWithRate)
{
    std::vector<double> taps(400);
    for (std::size_t k = 0; k < taps.size(); ++k)
        taps[k] = std::exp(-static_cast<double>(k) / 60.0);
    const auto ir = from_taps(taps);
    double prev = INFINITY;
    for (double r = 1e7; r < 5e9; r *= 1.7)
    {
        const auto e = eye_powers(ir, 0.8, r);
        EXPECT_NEAR(e.ps1 + e.ps0, 0.8 * ir.total_gain(), 1e-9 * 0.8 * ir.total_gain());
        EXPECT_LE(e.ps1, prev);
        EXPECT_GE(e.ps0, 0.0);
        prev = e.ps1;
    }
    EXPECT_THROW(eye_powers(ir, 1.0, 0.0), ModelError);
}

TEST(Eye, MatchesPrbsOracleInDefaultRoom)
{
    const Scene scene = build_scene();
    const Receiver rx = scene.make_receiver(ReceiverKind::nir, {0.5, 0.5, 1.0});
    const auto ir = trace_impulse_response(scene, scene.unit(1), rx.detector(0, Color::green));
    const auto e = eye_powers(ir, 1.0, 1e9);
    const double oracle = prbs_eye_opening(ir, 1e9);
    EXPECT_NEAR(e.ps1 - e.ps0, oracle, 0.1 * oracle);
}

TEST(Sinr, NoiseLimited)
{
    const EyePowers e{2e-6, 0.0, 1e8};
    EXPECT_DOUBLE_EQ(sinr(e, 0.4, 1e-7, 0.0), (0.4 * 2e-6) * (0.4 * 2e-6) / 1e-14);
}

TEST(Sinr, GreenWithInterference)
{
    const EyePowers e{1.5e-4, 0.5e-4, 1e8};
    const double s = sinr(e, 0.3, 1e-6, 8e-10);
    EXPECT_NEAR(s, 1.1236, 1e-4);
    EXPECT_NEAR(10.0 * std::log10(s), 0.506, 1e-3);
}

TEST(Sinr, ClosedEye)
{
    EXPECT_EQ(sinr({1e-6, 2e-6, 1e9}, 0.4, 1e-7, 0.0), 0.0);
    EXPECT_EQ(sinr({1e-6, 1e-6, 1e9}, 0.4, 1e-7, 0.0), 0.0);
}

TEST(Sinr, ColourUsesOwnResponsivityAndInterference)
{
    const Scene scene = build_scene(SceneConfig{.room = {.element_size_bounce1 = 0.5, .element_size_bounce2 = 1.0}});
    const Receiver rx = scene.make_receiver(ReceiverKind::nir, {1.0, 1.0, 1.0});
    CciLevels cci;
    cci.user_ids = {4};
    cci.interference = {{1e-13, 2e-13, 3e-13, 4e-13}};
    const EyePowers e{1e-6, 0.0, 1e8};
    EXPECT_DOUBLE_EQ(sinr_color(e, Color::blue, rx, 1e-7, cci, 4), sinr(e, 0.2, 1e-7, 4e-13));
    EXPECT_DOUBLE_EQ(sinr_color(e, Color::yellow, rx, 1e-7, cci, 9), sinr(e, 0.35, 1e-7, 0.0));
}

TEST(Ber, Anchors)
{
    EXPECT_DOUBLE_EQ(ber(0.0), 0.5);
    EXPECT_EQ(ber(INFINITY), 0.0);
    EXPECT_NEAR(ber(std::pow(10.0, 1.36)) / 1e-6, 1.0, 0.3);
    EXPECT_THROW(ber(-1.0), ModelError);
}

TEST(Ber, ThresholdRoundTrip)
{
    const double s = sinr_for_ber(1e-6);
    EXPECT_NEAR(10.0 * std::log10(s), 13.54, 0.1);
    EXPECT_NEAR(ber(s), 1e-6, 1e-15);
    double prev = 1.0;
    for (double x = 0.0; x < 40.0; x += 0.5)
    {
        const double b = ber(x);
        EXPECT_LT(b, prev);
        prev = b;
    }
}

TEST(Rate, CapWhenUnconstrained)
{
    LinkBudget b;
    b.tx_power = 1.0;
    b.responsivity = 0.4;
    b.sigma_td = 1e-7;
    b.rate_cap = 0.5e9;
    EXPECT_EQ(max_data_rate(from_taps({1e-5}), b), 0.5e9);
}

TEST(Rate, ZeroWhenInfeasible)
{
    LinkBudget b;
    b.tx_power = 1.0;
    b.responsivity = 0.4;
    b.sigma_td = 1e-7;
    b.interference = 1e-6;
    b.rate_cap = 0.5e9;
    EXPECT_EQ(max_data_rate(two_taps(1e-6, 1e-7, 100), b), 0.0);
}

TEST(Rate, TwoTapMatchesExhaustiveScan)
{
    // 5 ns echo: below 200 Mbit/s the whole response is in-slot.
    const auto ir = two_taps(1e-6, 0.4e-6, 100);
    LinkBudget b;
    b.tx_power = 1.0;
    b.responsivity = 0.4;
    b.rate_cap = 0.5e9;
    const double thr = sinr_for_ber(1e-6);
    // Noise chosen so that only the ISI-free regime passes.
    b.sigma_td = 0.4 * 1.4e-6 / std::sqrt(thr) * 0.999;

    auto independent_meets = [&](double rate) {
        const double slot = 1.0 / rate;
        const double echo = 100 * 0.05e-9;
        const double ps1 = echo < slot ? 1.4e-6 : 1e-6;
        const double ps0 = echo < slot ? 0.0 : 0.4e-6;
        const double s = std::pow(0.4 * std::max(0.0, ps1 - ps0), 2) / (b.sigma_td * b.sigma_td);
        return s >= thr;
    };
    double scan = 0.0;
    for (double r = 1e3; r <= b.rate_cap; r += 1e3)
        if (independent_meets(r))
            scan = r;
    const double rate = max_data_rate(ir, b);
    EXPECT_NEAR(rate, scan, 2e-3 * scan);
    EXPECT_NEAR(rate, 2e8, 2e-3 * 2e8);
}

TEST(Rate, MonotoneInNoiseInterferenceAndPower)
{
    std::vector<double> taps(300);
    for (std::size_t k = 0; k < taps.size(); ++k)
        taps[k] = 1e-7 * std::exp(-static_cast<double>(k) / 20.0);
    const auto ir = from_taps(taps);
    LinkBudget b;
    b.tx_power = 0.8;
    b.responsivity = 0.4;
    b.sigma_td = 5e-8;
    b.rate_cap = 0.5e9;
    const double base = max_data_rate(ir, b);
    EXPECT_GT(base, 0.0);

    LinkBudget noisy = b;
    noisy.sigma_td *= 1.5;
    EXPECT_LE(max_data_rate(ir, noisy), base);
    LinkBudget interfered = b;
    interfered.interference = 1e-15;
    EXPECT_LE(max_data_rate(ir, interfered), base);
    LinkBudget brighter = b;
    brighter.tx_power *= 1.5;
    EXPECT_GE(max_data_rate(ir, brighter), base);
}

TEST(Rate, ResultCarriesSinrCertificate)
{
    std::vector<double> taps(300);
    for (std::size_t k = 0; k < taps.size(); ++k)
        taps[k] = 1e-7 * std::exp(-static_cast<double>(k) / 30.0);
    const auto ir = from_taps(taps);
    LinkBudget b;
    b.tx_power = 0.8;
    b.responsivity = 0.4;
    b.sigma_td = 1.5e-7;
    b.rate_cap = 0.5e9;
    const double r = max_data_rate(ir, b);
    ASSERT_GT(r, 0.0);
    ASSERT_LT(r, b.rate_cap);
    const double s = sinr(eye_powers(ir, b.tx_power, r), b.responsivity, b.sigma_td, 0.0);
    EXPECT_GE(s, sinr_for_ber(1e-6) * 0.995);
    const double above = sinr(eye_powers(ir, b.tx_power, r * 1.002), b.responsivity, b.sigma_td, 0.0);
    EXPECT_LT(above, sinr_for_ber(1e-6));
}
