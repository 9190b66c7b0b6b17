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

#ifndef VLC_LINK_HPP
#define VLC_LINK_HPP

#include "vlc/allocation.hpp"
#include "vlc/channel.hpp"
#include "vlc/detection.hpp"

#include <optional>
#include <span>
#include <vector>

namespace vlc
{

// Received OOK powers for a given bit rate: the part of the response landing inside
// one bit slot (starting at the first arrival) and the part spilling beyond it.
struct EyePowers
{
    double ps1 = 0.0;
    double ps0 = 0.0;
    double bit_rate = 0.0;
};

EyePowers eye_powers(const ImpulseResponse &ir, double tx_power, double bit_rate);

// R^2 (Ps1 - Ps0)^2 / (sigma_td^2 + I); a closed eye gives 0.
double sinr(const EyePowers &eye, double responsivity, double sigma_td, double interference);

double sinr_color(const EyePowers &eye, Color color, const Receiver &receiver, double sigma_td,
                  const CciLevels &cci, int user_id);

double q_function(double x);
double ber(double sinr);

// Smallest SINR meeting the target BER.
double sinr_for_ber(double target_ber);

struct LinkBudget
{
    double tx_power = 0.0;     // per LD, this colour [W]
    double responsivity = 0.0; // [A/W]
    double sigma_td = 0.0;     // data noise at the receiver bandwidth [A]
    double interference = 0.0; // [A^2]
    double rate_cap = 0.0;     // receiver bandwidth [bit/s]
    double target_ber = 1e-6;
};

// Largest bit rate in (0, rate_cap] whose SINR meets the target, 0 if none does.
double max_data_rate(const ImpulseResponse &ir, const LinkBudget &budget);

struct ColorLink
{
    Color color = Color::red;
    std::size_t face = 0;
    double sinr = 0.0; // linear, at `rate` (or at the lowest rate when rate is 0)
    double rate = 0.0; // [bit/s]
};

struct UserLink
{
    int user_id = 0;
    std::optional<int> unit;
    PerColor<ColorLink> colors{};
    double aggregate = 0.0;
};

struct LinkReport
{
    std::vector<UserLink> users;

    const UserLink &for_user(int user_id) const;
    double total() const;
};

// Per-colour rates for every served user. The face that maximises the rate serves
// each colour; interference is taken at that face from the other active units.
LinkReport evaluate_links(const Scene &scene, std::span<const UserObservation> users, const AllocationMap &map,
                          const NoiseModel &noise, double target_ber = 1e-6);

} // namespace vlc

#endif
