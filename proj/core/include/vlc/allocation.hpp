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

#ifndef VLC_ALLOCATION_HPP
#define VLC_ALLOCATION_HPP

#include "vlc/channel.hpp"
#include "vlc/scene.hpp"

#include <optional>
#include <span>
#include <vector>

namespace vlc
{

enum class UserRole
{
    stationary,
    mobile
};

// Everything the controller and the link budget need to know about one user: its
// receiver and, per face, the channel from every light unit.
struct UserObservation
{
    int user_id = 0;
    UserRole role = UserRole::stationary;
    Receiver receiver;
    std::vector<std::vector<double>> gain;           // [face][unit] total channel gain
    std::vector<std::vector<char>> los;              // [face][unit] direct path exists
    std::vector<std::vector<ImpulseResponse>> paths; // [face][unit], empty unless traced
};

// Channel gains are colour independent, so the green detector of each face stands in
// for all four. With `with_responses` the full impulse responses are kept as well.
UserObservation observe_user(const ChannelTracer &tracer, int user_id, UserRole role, ReceiverKind kind,
                             const Vec3 &position, bool with_responses);

struct CnrEntry
{
    double cnr = 0.0;         // linear
    double green_power = 0.0; // [W], on `face`
    std::size_t face = 0;     // face with the highest CNR
    bool los = false;         // some face sees the unit directly
};

struct CnrTable
{
    std::vector<int> user_ids;
    std::vector<UserRole> roles;
    std::vector<int> unit_ids;
    std::vector<std::vector<CnrEntry>> entries; // [user][unit]

    double cnr_db(std::size_t user, std::size_t unit) const;
};

// CNR = (R_g * Pr)^2 / (2 sigma_t^2), select-best over faces.
double tone_cnr(double responsivity, double received_power, double sigma_t);

CnrTable compute_cnr_table(const Scene &scene, std::span<const UserObservation> users, double sigma_t);

struct Assignment
{
    int user_id = 0;
    UserRole role = UserRole::stationary;
    std::optional<int> unit; // nullopt: UNSERVED
    std::size_t face = 0;
    bool conflict = false; // best unit was already taken
};

struct AllocationMap
{
    std::vector<Assignment> users;          // table order
    std::vector<std::size_t> priority;      // indices into users, in processing order
    std::vector<int> active_units;          // sorted

    const Assignment &for_user(int user_id) const;
};

// Units ranked by descending CNR, ties to the lower id.
std::vector<std::size_t> rank_units(const CnrTable &table, std::size_t user);

AllocationMap allocate(const CnrTable &table, ReceiverKind kind);

struct CciLevels
{
    std::vector<int> user_ids;
    std::vector<PerColor<double>> interference; // [user][colour], A^2; zero when unserved
};

// Tone-power interference at one face from every active unit except `own_unit`.
double green_interference(const Scene &scene, const UserObservation &user, std::size_t face, int own_unit,
                          std::span<const int> active_units);

// Scales a green-channel interference level to another colour.
double scale_interference(const Scene &scene, ReceiverKind kind, Color color, double i_green);

CciLevels compute_cci(const Scene &scene, std::span<const UserObservation> users, const AllocationMap &map);

} // namespace vlc

#endif
