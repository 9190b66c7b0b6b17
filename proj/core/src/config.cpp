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

#include "vlc/config.hpp"
#include "vlc/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace vlc
{

using nlohmann::json;

std::vector<ScenarioDefinition> standard_scenarios()
{
    return {
        {1, {{1, 1, 1}, {1, 7, 1}}},
        {2, {{1, 4, 1}, {3, 4, 1}}},
        {3, {{2, 1, 1}, {2, 7, 1}}},
        {4, {{1, 1, 1}, {2, 4, 1}}},
    };
}

namespace
{

void check_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &item : j.items())
        if (!ok.contains(item.key()))
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

template <typename T>
void read(const json &j, const char *key, T &out)
{
    if (j.contains(key))
    {
        try
        {
            out = j.at(key).get<T>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("invalid value for '") + key + "': " + e.what());
        }
    }
}

Vec3 to_vec3(const json &j)
{
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("positions are [x, y, z] arrays");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void read_colors(const json &j, const std::string &where, PerColor<double> &out)
{
    check_keys(j, where, {"red", "yellow", "green", "blue"});
    for (Color c : kColors)
        read(j, std::string(to_string(c)).c_str(), out[index_of(c)]);
}

void read_receiver(const json &j, const std::string &where, ReceiverSpec &spec)
{
    check_keys(j, where, {"fov_deg", "pd_area", "bandwidth", "responsivity", "faces"});
    read(j, "fov_deg", spec.fov_deg);
    read(j, "pd_area", spec.pd_area);
    read(j, "bandwidth", spec.bandwidth);
    if (j.contains("responsivity"))
        read_colors(j["responsivity"], where + ".responsivity", spec.responsivity);
    if (j.contains("faces"))
    {
        spec.orientations.clear();
        for (const auto &f : j["faces"])
        {
            if (!f.is_array() || f.size() != 2)
                throw ConfigError(where + ".faces: entries are [elevation, azimuth]");
            spec.orientations.emplace_back(f[0].get<double>(), f[1].get<double>());
        }
    }
}

ReceiverKind parse_kind(const std::string &s)
{
    if (s == "nir")
        return ReceiverKind::nir;
    if (s == "niadr")
        return ReceiverKind::niadr;
    throw ConfigError("receiver kind must be nir or niadr, got '" + s + "'");
}

} // namespace

RunConfig parse_run_config(const std::string &text)
{
    json root;
    try
    {
        root = json::parse(text, nullptr, true, true);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("scenario file is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    check_keys(root, "config", {"room", "units", "receivers", "scenarios", "sweep", "seed", "monte_carlo_positions",
                                "noise", "channel", "link", "illuminance"});

    if (root.contains("room"))
    {
        const json &r = root["room"];
        check_keys(r, "room",
                   {"width", "length", "height", "reflectance", "element_size_bounce1", "element_size_bounce2"});
        Room &room = cfg.scene.room;
        read(r, "width", room.width);
        read(r, "length", room.length);
        read(r, "height", room.height);
        read(r, "element_size_bounce1", room.element_size_bounce1);
        read(r, "element_size_bounce2", room.element_size_bounce2);
        if (r.contains("reflectance"))
        {
            const json &rho = r["reflectance"];
            check_keys(rho, "room.reflectance",
                       {"floor", "ceiling", "walls", "wall_x0", "wall_xw", "wall_y0", "wall_yl"});
            double walls = -1.0;
            read(rho, "walls", walls);
            if (rho.contains("walls"))
                for (Surface s : {Surface::wall_x0, Surface::wall_xw, Surface::wall_y0, Surface::wall_yl})
                    room.reflectance[static_cast<std::size_t>(s)] = walls;
            for (Surface s : kSurfaces)
                read(rho, std::string(to_string(s)).c_str(), room.reflectance[static_cast<std::size_t>(s)]);
        }
    }

    if (root.contains("units"))
    {
        const json &u = root["units"];
        check_keys(u, "units", {"centers", "ld_pitch", "tx_power", "lambertian_order", "center_luminous_intensity",
                                "intensity_per"});
        if (u.contains("centers"))
        {
            cfg.scene.unit_centers.clear();
            for (const auto &c : u["centers"])
                cfg.scene.unit_centers.push_back(to_vec3(c));
        }
        read(u, "ld_pitch", cfg.scene.ld_pitch);
        if (u.contains("tx_power"))
            read_colors(u["tx_power"], "units.tx_power", cfg.scene.tx_power);
        read(u, "lambertian_order", cfg.scene.tx_lambertian_order);
        read(u, "center_luminous_intensity", cfg.scene.center_luminous_intensity);
        if (u.contains("intensity_per"))
        {
            const auto s = u["intensity_per"].get<std::string>();
            if (s == "ld")
                cfg.scene.intensity_convention = IntensityConvention::per_ld;
            else if (s == "unit")
                cfg.scene.intensity_convention = IntensityConvention::per_unit;
            else
                throw ConfigError("units.intensity_per must be 'ld' or 'unit'");
        }
    }

    if (root.contains("receivers"))
    {
        const json &r = root["receivers"];
        check_keys(r, "receivers", {"nir", "niadr", "height", "kinds"});
        if (r.contains("nir"))
            read_receiver(r["nir"], "receivers.nir", cfg.scene.nir);
        if (r.contains("niadr"))
            read_receiver(r["niadr"], "receivers.niadr", cfg.scene.niadr);
        read(r, "height", cfg.scene.receiver_height);
        if (r.contains("kinds"))
        {
            cfg.receivers.clear();
            for (const auto &k : r["kinds"])
                cfg.receivers.push_back(parse_kind(k.get<std::string>()));
        }
    }

    if (root.contains("scenarios"))
    {
        const json &s = root["scenarios"];
        check_keys(s, "scenarios", {"definitions", "select"});
        if (s.contains("definitions"))
        {
            cfg.scenarios.clear();
            for (const auto &d : s["definitions"])
            {
                check_keys(d, "scenarios.definitions[]", {"id", "stationary"});
                ScenarioDefinition def;
                def.id = d.at("id").get<int>();
                for (const auto &p : d.at("stationary"))
                    def.stationary.push_back(to_vec3(p));
                if (def.stationary.size() != 2)
                    throw ConfigError("each scenario places exactly two stationary users");
                cfg.scenarios.push_back(def);
            }
        }
        read(s, "select", cfg.selected_scenarios);
    }

    if (root.contains("sweep"))
    {
        const json &s = root["sweep"];
        check_keys(s, "sweep", {"lanes", "y"});
        read(s, "lanes", cfg.lanes);
        read(s, "y", cfg.sweep_y);
    }

    read(root, "seed", cfg.seed);
    read(root, "monte_carlo_positions", cfg.monte_carlo_positions);

    if (root.contains("noise"))
    {
        const json &n = root["noise"];
        check_keys(n, "noise", {"preamp_density", "background_current"});
        read(n, "preamp_density", cfg.noise.preamp_density);
        read(n, "background_current", cfg.noise.background_current);
    }

    if (root.contains("channel"))
    {
        const json &c = root["channel"];
        check_keys(c, "channel", {"bin_width", "threedb"});
        read(c, "bin_width", cfg.channel.bin_width);
        if (c.contains("threedb"))
        {
            const auto s = c["threedb"].get<std::string>();
            if (s == "sqrt2")
                cfg.threedb = ThreeDbDefinition::electrical;
            else if (s == "half")
                cfg.threedb = ThreeDbDefinition::optical;
            else
                throw ConfigError("channel.threedb must be 'sqrt2' or 'half'");
        }
    }

    if (root.contains("link"))
    {
        check_keys(root["link"], "link", {"target_ber"});
        read(root["link"], "target_ber", cfg.target_ber);
    }

    if (root.contains("illuminance"))
    {
        const json &i = root["illuminance"];
        check_keys(i, "illuminance", {"plane_height", "grid_step"});
        read(i, "plane_height", cfg.illuminance_plane);
        read(i, "grid_step", cfg.illuminance_step);
    }

    if (cfg.selected_scenarios.empty())
        throw ConfigError("scenarios.select must name at least one scenario");
    for (int id : cfg.selected_scenarios)
        find_scenario(cfg, id);
    if (!(cfg.target_ber > 0.0 && cfg.target_ber < 0.5))
        throw ConfigError("link.target_ber must lie in (0, 0.5)");
    if (cfg.monte_carlo_positions < 2)
        throw ConfigError("monte_carlo_positions must be at least 2");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

void apply_fast_mode(RunConfig &config)
{
    config.scene.room.element_size_bounce1 *= 2.0;
    config.scene.room.element_size_bounce2 *= 2.0;
}

const ScenarioDefinition &find_scenario(const RunConfig &config, int id)
{
    for (const auto &s : config.scenarios)
        if (s.id == id)
            return s;
    throw ConfigError("scenario " + std::to_string(id) + " is not defined");
}

} // namespace vlc
