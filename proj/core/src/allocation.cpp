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

#include "vlc/allocation.hpp"
#include "vlc/detection.hpp"
#include "vlc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vlc
{

UserObservation observe_user(const ChannelTracer &tracer, int user_id, UserRole role, ReceiverKind kind,
                             const Vec3 &position, bool with_responses)
{
    const Scene &scene = tracer.scene();
    UserObservation obs;
    obs.user_id = user_id;
    obs.role = role;
    obs.receiver = scene.make_receiver(kind, position);
    for (std::size_t f = 0; f < obs.receiver.faces.size(); ++f)
    {
        const Photodetector &pd = obs.receiver.detector(f, Color::green);
        std::vector<double> g;
        if (with_responses)
        {
            auto paths = tracer.trace_all(pd);
            for (const auto &ir : paths)
                g.push_back(ir.total_gain());
            obs.paths.push_back(std::move(paths));
        }
        else
        {
            for (const auto &cg : tracer.gains_all(pd))
                g.push_back(cg.total());
        }
        obs.gain.push_back(std::move(g));
        const auto vis = tracer.los_visible(pd);
        obs.los.emplace_back(vis.begin(), vis.end());
    }
    return obs;
}

double CnrTable::cnr_db(std::size_t user, std::size_t unit) const
{
    return 10.0 * std::log10(entries.at(user).at(unit).cnr);
}

double tone_cnr(double responsivity, double received_power, double sigma_t)
{
    if (!(sigma_t > 0.0))
        throw ModelError("tone noise must be positive");
    const double i = responsivity * received_power;
    return i * i / (2.0 * sigma_t * sigma_t);
}

CnrTable compute_cnr_table(const Scene &scene, std::span<const UserObservation> users, double sigma_t)
{
    CnrTable t;
    for (const auto &u : scene.units())
        t.unit_ids.push_back(u.id);

    for (const auto &obs : users)
    {
        t.user_ids.push_back(obs.user_id);
        t.roles.push_back(obs.role);
        std::vector<CnrEntry> row(scene.units().size());
        for (std::size_t f = 0; f < obs.receiver.faces.size(); ++f)
        {
            const Photodetector &pd = obs.receiver.detector(f, Color::green);
            for (std::size_t u = 0; u < row.size(); ++u)
            {
                const double pr = scene.units()[u].tx_power[index_of(Color::green)] * obs.gain[f][u];
                const double cnr = tone_cnr(pd.responsivity, pr, sigma_t);
                if (f == 0 || cnr > row[u].cnr)
                {
                    row[u].cnr = cnr;
                    row[u].green_power = pr;
                    row[u].face = f;
                }
                row[u].los = row[u].los || obs.los[f][u];
            }
        }
        t.entries.push_back(std::move(row));
    }
    return t;
}

const Assignment &AllocationMap::for_user(int user_id) const
{
    for (const auto &a : users)
        if (a.user_id == user_id)
            return a;
    throw ModelError("no allocation for user " + std::to_string(user_id));
}

std::vector<std::size_t> rank_units(const CnrTable &table, std::size_t user)
{
    const auto &row = table.entries.at(user);
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row[a].cnr != row[b].cnr)
            return row[a].cnr > row[b].cnr;
        return table.unit_ids[a] < table.unit_ids[b];
    });
    return order;
}

AllocationMap allocate(const CnrTable &table, ReceiverKind kind)
{
    const std::size_t n_users = table.user_ids.size();
    if (n_users > table.unit_ids.size())
        throw ModelError("more users (" + std::to_string(n_users) + ") than light units (" +
                         std::to_string(table.unit_ids.size()) + ")");

    AllocationMap map;
    map.users.resize(n_users);
    for (std::size_t i = 0; i < n_users; ++i)
    {
        map.users[i].user_id = table.user_ids[i];
        map.users[i].role = table.roles[i];
    }
    for (UserRole pass : {UserRole::stationary, UserRole::mobile})
        for (std::size_t i = 0; i < n_users; ++i)
            if (table.roles[i] == pass)
                map.priority.push_back(i);

    std::vector<char> taken(table.unit_ids.size(), 0);
    for (std::size_t i : map.priority)
    {
        Assignment &a = map.users[i];
        const auto ranking = rank_units(table, i);
        if (ranking.empty())
            continue;

        std::optional<std::size_t> pick;
        if (!taken[ranking.front()])
        {
            pick = ranking.front();
        }
        else
        {
            a.conflict = true;
            // An NI-R mobile user that wants a stationary user's unit is left unserved.
            const bool drop = kind == ReceiverKind::nir && a.role == UserRole::mobile;
            if (!drop)
            {
                for (std::size_t u : ranking)
                {
                    if (taken[u])
                        continue;
                    if (kind == ReceiverKind::nir && !table.entries[i][u].los)
                        continue;
                    pick = u;
                    break;
                }
            }
        }

        if (pick)
        {
            taken[*pick] = 1;
            a.unit = table.unit_ids[*pick];
            a.face = table.entries[i][*pick].face;
            map.active_units.push_back(*a.unit);
        }
    }
    std::sort(map.active_units.begin(), map.active_units.end());
    return map;
}

double green_interference(const Scene &scene, const UserObservation &user, std::size_t face, int own_unit,
                          std::span<const int> active_units)
{
    const Photodetector &pd = user.receiver.detector(face, Color::green);
    double sum = 0.0;
    for (int id : active_units)
    {
        if (id == own_unit)
            continue;
        const auto &units = scene.units();
        const auto it = std::find_if(units.begin(), units.end(), [id](const LightUnit &u) { return u.id == id; });
        if (it == units.end())
            throw ModelError("active unit " + std::to_string(id) + " is not in the scene");
        const auto u = static_cast<std::size_t>(it - units.begin());
        const double pr = it->tx_power[index_of(Color::green)] * user.gain[face][u];
        const double tone = tone_current(pd.responsivity, pr);
        sum += tone * tone;
    }
    return sum;
}

double scale_interference(const Scene &scene, ReceiverKind kind, Color color, double i_green)
{
    if (scene.units().empty())
        return 0.0;
    const auto &resp = scene.receiver_spec(kind).responsivity;
    const auto &pt = scene.units().front().tx_power;
    const double r = resp[index_of(color)] / resp[index_of(Color::green)];
    return r * r * (pt[index_of(color)] / pt[index_of(Color::green)]) * i_green;
}

CciLevels compute_cci(const Scene &scene, std::span<const UserObservation> users, const AllocationMap &map)
{
    CciLevels out;
    for (const auto &obs : users)
    {
        out.user_ids.push_back(obs.user_id);
        PerColor<double> levels{};
        const Assignment &a = map.for_user(obs.user_id);
        if (a.unit)
        {
            const double ig = green_interference(scene, obs, a.face, *a.unit, map.active_units);
            for (Color c : kColors)
                levels[index_of(c)] = scale_interference(scene, obs.receiver.kind, c, ig);
        }
        out.interference.push_back(levels);
    }
    return out;
}

} // namespace vlc
