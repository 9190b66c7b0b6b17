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

#include "vlc/link.hpp"
#include "vlc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vlc
{

EyePowers eye_powers(const ImpulseResponse &ir, double tx_power, double bit_rate)
{
    if (!(bit_rate > 0.0))
        throw ModelError("bit rate must be positive");
    const double slot = 1.0 / bit_rate;
    EyePowers e;
    e.bit_rate = bit_rate;
    for (std::size_t k = 0; k < ir.size(); ++k)
    {
        const double h = ir.los[k] + ir.bounce1[k] + ir.bounce2[k];
        if (static_cast<double>(k) * ir.bin_width < slot)
            e.ps1 += h;
        else
            e.ps0 += h;
    }
    e.ps1 *= tx_power;
    e.ps0 *= tx_power;
    return e;
}

double sinr(const EyePowers &eye, double responsivity, double sigma_td, double interference)
{
    const double swing = std::max(0.0, eye.ps1 - eye.ps0);
    const double signal = responsivity * swing;
    const double denom = sigma_td * sigma_td + interference;
    if (signal == 0.0)
        return 0.0;
    if (denom <= 0.0)
        return INFINITY;
    return signal * signal / denom;
}

double sinr_color(const EyePowers &eye, Color color, const Receiver &receiver, double sigma_td,
                  const CciLevels &cci, int user_id)
{
    double interference = 0.0;
    for (std::size_t i = 0; i < cci.user_ids.size(); ++i)
        if (cci.user_ids[i] == user_id)
            interference = cci.interference[i][index_of(color)];
    return sinr(eye, receiver.detector(0, color).responsivity, sigma_td, interference);
}

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double ber(double s)
{
    if (s < 0.0)
        throw ModelError("SINR must be non-negative");
    return q_function(std::sqrt(s));
}

double sinr_for_ber(double target_ber)
{
    if (!(target_ber > 0.0 && target_ber < 0.5))
        throw ModelError("target BER must lie in (0, 0.5)");
    // Q is strictly decreasing; bisect on x = sqrt(SINR).
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (q_function(mid) > target_ber ? lo : hi) = mid;
    }
    return hi * hi;
}

double max_data_rate(const ImpulseResponse &ir, const LinkBudget &b)
{
    if (!(b.rate_cap > 0.0))
        throw ModelError("rate cap must be positive");
    const double threshold = sinr_for_ber(b.target_ber);
    auto meets = [&](double rate) {
        return sinr(eye_powers(ir, b.tx_power, rate), b.responsivity, b.sigma_td, b.interference) >= threshold;
    };

    if (meets(b.rate_cap))
        return b.rate_cap;
    // At this rate one slot spans the whole response, so there is no ISI left.
    const double floor_rate =
        std::min(b.rate_cap, 0.5 / (static_cast<double>(ir.size() + 1) * ir.bin_width));
    if (!meets(floor_rate))
        return 0.0;

    double lo = floor_rate, hi = b.rate_cap;
    while ((hi - lo) > 1e-3 * lo)
    {
        const double mid = 0.5 * (lo + hi);
        (meets(mid) ? lo : hi) = mid;
    }
    return lo;
}

const UserLink &LinkReport::for_user(int user_id) const
{
    for (const auto &u : users)
        if (u.user_id == user_id)
            return u;
    throw ModelError("no link report for user " + std::to_string(user_id));
}

double LinkReport::total() const
{
    double t = 0.0;
    for (const auto &u : users)
        t += u.aggregate;
    return t;
}

LinkReport evaluate_links(const Scene &scene, std::span<const UserObservation> users, const AllocationMap &map,
                          const NoiseModel &noise, double target_ber)
{
    LinkReport report;
    for (const auto &obs : users)
    {
        UserLink link;
        link.user_id = obs.user_id;
        const Assignment &a = map.for_user(obs.user_id);
        link.unit = a.unit;
        for (Color c : kColors)
            link.colors[index_of(c)].color = c;

        if (a.unit)
        {
            if (obs.paths.empty())
                throw ModelError("link evaluation needs traced impulse responses");
            const auto &units = scene.units();
            const auto it =
                std::find_if(units.begin(), units.end(), [&](const LightUnit &u) { return u.id == *a.unit; });
            const auto u = static_cast<std::size_t>(it - units.begin());

            for (Color c : kColors)
            {
                ColorLink best;
                best.color = c;
                bool have = false;
                for (std::size_t f = 0; f < obs.receiver.faces.size(); ++f)
                {
                    const ImpulseResponse &ir = obs.paths[f][u];
                    if (ir.total_gain() <= 0.0)
                        continue;
                    const Photodetector &pd = obs.receiver.detector(f, c);
                    const double pt = it->tx_power[index_of(c)];
                    LinkBudget b;
                    b.tx_power = pt;
                    b.responsivity = pd.responsivity;
                    b.sigma_td = total_noise_sigma(noise, pd.responsivity, pt * ir.total_gain(),
                                                   obs.receiver.bandwidth);
                    const double ig = green_interference(scene, obs, f, *a.unit, map.active_units);
                    b.interference = scale_interference(scene, obs.receiver.kind, c, ig);
                    b.rate_cap = obs.receiver.bandwidth;
                    b.target_ber = target_ber;

                    ColorLink cand;
                    cand.color = c;
                    cand.face = f;
                    cand.rate = max_data_rate(ir, b);
                    const double eval_rate =
                        cand.rate > 0.0 ? cand.rate : 0.5 / (static_cast<double>(ir.size() + 1) * ir.bin_width);
                    cand.sinr = sinr(eye_powers(ir, pt, eval_rate), b.responsivity, b.sigma_td, b.interference);
                    if (!have || cand.rate > best.rate || (cand.rate == best.rate && cand.sinr > best.sinr))
                        best = cand, have = true;
                }
                link.colors[index_of(c)] = best;
            }
        }
        for (const auto &cl : link.colors)
            link.aggregate += cl.rate;
        report.users.push_back(link);
    }
    return report;
}

} // namespace vlc
