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

#include "vlc/scene.hpp"
#include "vlc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vlc
{

std::string_view to_string(Color c)
{
    switch (c)
    {
    case Color::red:
        return "red";
    case Color::yellow:
        return "yellow";
    case Color::green:
        return "green";
    case Color::blue:
        return "blue";
    }
    return "?";
}

std::string_view to_string(Surface s)
{
    switch (s)
    {
    case Surface::floor:
        return "floor";
    case Surface::ceiling:
        return "ceiling";
    case Surface::wall_x0:
        return "wall_x0";
    case Surface::wall_xw:
        return "wall_xw";
    case Surface::wall_y0:
        return "wall_y0";
    case Surface::wall_yl:
        return "wall_yl";
    }
    return "?";
}

std::string_view to_string(ReceiverKind k)
{
    return k == ReceiverKind::nir ? "NI-R" : "NI-ADR";
}

double Room::surface_area(Surface s) const
{
    switch (s)
    {
    case Surface::floor:
    case Surface::ceiling:
        return width * length;
    case Surface::wall_x0:
    case Surface::wall_xw:
        return length * height;
    case Surface::wall_y0:
    case Surface::wall_yl:
        return width * height;
    }
    return 0.0;
}

Vec3 Room::inward_normal(Surface s) const
{
    switch (s)
    {
    case Surface::floor:
        return {0, 0, 1};
    case Surface::ceiling:
        return {0, 0, -1};
    case Surface::wall_x0:
        return {1, 0, 0};
    case Surface::wall_xw:
        return {-1, 0, 0};
    case Surface::wall_y0:
        return {0, 1, 0};
    case Surface::wall_yl:
        return {0, -1, 0};
    }
    return {};
}

bool Room::contains(const Vec3 &p, double tol) const
{
    return p.x >= -tol && p.x <= width + tol && p.y >= -tol && p.y <= length + tol && p.z >= -tol &&
           p.z <= height + tol;
}

namespace
{

// Cell edges along one dimension; the last cell is clipped to `extent`.
std::vector<double> cell_edges(double extent, double size)
{
    const auto n = static_cast<std::size_t>(std::ceil(extent / size - 1e-9));
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        edges[i] = std::min(extent, static_cast<double>(i) * size);
    edges.back() = extent;
    return edges;
}

} // namespace

std::vector<SurfaceElement> discretize_surface(const Room &room, Surface s, double size)
{
    if (!(size > 0.0))
        throw ConfigError("element size must be positive");

    double ext_u = 0.0, ext_v = 0.0;
    switch (s)
    {
    case Surface::floor:
    case Surface::ceiling:
        ext_u = room.width, ext_v = room.length;
        break;
    case Surface::wall_x0:
    case Surface::wall_xw:
        ext_u = room.length, ext_v = room.height;
        break;
    case Surface::wall_y0:
    case Surface::wall_yl:
        ext_u = room.width, ext_v = room.height;
        break;
    }

    const auto eu = cell_edges(ext_u, size);
    const auto ev = cell_edges(ext_v, size);
    const Vec3 normal = room.inward_normal(s);
    const double rho = room.reflectance[static_cast<std::size_t>(s)];

    std::vector<SurfaceElement> out;
    out.reserve((eu.size() - 1) * (ev.size() - 1));
    for (std::size_t i = 0; i + 1 < eu.size(); ++i)
    {
        const double u = 0.5 * (eu[i] + eu[i + 1]);
        const double du = eu[i + 1] - eu[i];
        for (std::size_t j = 0; j + 1 < ev.size(); ++j)
        {
            const double v = 0.5 * (ev[j] + ev[j + 1]);
            const double dv = ev[j + 1] - ev[j];
            Vec3 c;
            switch (s)
            {
            case Surface::floor:
                c = {u, v, 0.0};
                break;
            case Surface::ceiling:
                c = {u, v, room.height};
                break;
            case Surface::wall_x0:
                c = {0.0, u, v};
                break;
            case Surface::wall_xw:
                c = {room.width, u, v};
                break;
            case Surface::wall_y0:
                c = {u, 0.0, v};
                break;
            case Surface::wall_yl:
                c = {u, room.length, v};
                break;
            }
            out.push_back({c, normal, du * dv, rho, s});
        }
    }
    return out;
}

double Photodetector::cos_fov() const
{
    return std::cos(fov_deg * kPi / 180.0);
}

namespace
{

// sin/cos of an angle in degrees, exact at multiples of 90.
std::pair<double, double> sincos_deg(double deg)
{
    const double r = std::fmod(deg, 360.0);
    const double m = r < 0 ? r + 360.0 : r;
    if (m == 0.0)
        return {0.0, 1.0};
    if (m == 90.0)
        return {1.0, 0.0};
    if (m == 180.0)
        return {0.0, -1.0};
    if (m == 270.0)
        return {-1.0, 0.0};
    const double rad = m * kPi / 180.0;
    return {std::sin(rad), std::cos(rad)};
}

} // namespace

Vec3 face_normal(double elevation_deg, double azimuth_deg)
{
    const auto [se, ce] = sincos_deg(elevation_deg);
    const auto [sa, ca] = sincos_deg(azimuth_deg);
    return {ce * ca, ce * sa, se};
}

bool fov_accepts(const Photodetector &pd, const Vec3 &source)
{
    const Vec3 d = source - pd.position;
    const double len = norm(d);
    if (len == 0.0)
        return false;
    return dot(pd.normal, d) / len >= pd.cos_fov();
}

ReceiverSpec ReceiverSpec::nir()
{
    ReceiverSpec s;
    s.kind = ReceiverKind::nir;
    s.fov_deg = 40.0;
    s.pd_area = 6.25e-6;
    s.bandwidth = 0.5e9;
    s.orientations = {{90.0, 0.0}};
    return s;
}

ReceiverSpec ReceiverSpec::niadr()
{
    ReceiverSpec s;
    s.kind = ReceiverKind::niadr;
    s.fov_deg = 20.0;
    s.pd_area = 4e-6;
    s.bandwidth = 0.75e9;
    s.orientations = {{90.0, 0.0},  {50.0, 0.0},   {50.0, 60.0}, {50.0, 120.0},
                      {50.0, 180.0}, {50.0, 240.0}, {50.0, 300.0}};
    return s;
}

std::vector<Vec3> mobile_sweep(double lane_x, double room_length, double z)
{
    std::vector<Vec3> out;
    for (double y = 0.5; y < room_length; y += 1.0)
        out.push_back({lane_x, y, z});
    return out;
}

const LightUnit &Scene::unit(int id) const
{
    for (const auto &u : units_)
        if (u.id == id)
            return u;
    throw ModelError("no light unit with id " + std::to_string(id));
}

Receiver Scene::make_receiver(ReceiverKind kind, const Vec3 &position) const
{
    if (!room_.contains(position))
        throw ConfigError("receiver position outside the room");
    const ReceiverSpec &spec = receiver_spec(kind);
    Receiver r;
    r.kind = kind;
    r.position = position;
    r.bandwidth = spec.bandwidth;
    for (const auto &[el, az] : spec.orientations)
    {
        Face f;
        f.elevation_deg = el;
        f.azimuth_deg = az;
        f.normal = face_normal(el, az);
        for (Color c : kColors)
        {
            Photodetector &pd = f.detectors[index_of(c)];
            pd.position = position;
            pd.normal = f.normal;
            pd.area = spec.pd_area;
            pd.fov_deg = spec.fov_deg;
            pd.color = c;
            pd.responsivity = spec.responsivity[index_of(c)];
        }
        r.faces.push_back(f);
    }
    return r;
}

namespace
{

void validate_receiver_spec(const ReceiverSpec &s)
{
    if (!(s.fov_deg > 0.0 && s.fov_deg <= 90.0))
        throw ConfigError("receiver FOV must lie in (0, 90] degrees");
    if (!(s.pd_area > 0.0))
        throw ConfigError("photodetector area must be positive");
    if (!(s.bandwidth > 0.0))
        throw ConfigError("receiver bandwidth must be positive");
    if (s.orientations.empty())
        throw ConfigError("receiver needs at least one face");
    for (double r : s.responsivity)
        if (!(r > 0.0))
            throw ConfigError("photodetector responsivity must be positive");
}

} // namespace

Scene build_scene(const SceneConfig &config)
{
    const Room &room = config.room;
    if (!(room.width > 0.0 && room.length > 0.0 && room.height > 0.0))
        throw ConfigError("room dimensions must be positive");
    for (double rho : room.reflectance)
        if (!(rho >= 0.0 && rho <= 1.0))
            throw ConfigError("surface reflectance must lie in [0, 1]");
    if (!(room.element_size_bounce1 > 0.0 && room.element_size_bounce2 > 0.0))
        throw ConfigError("element sizes must be positive");
    if (!(config.tx_lambertian_order >= 0.0))
        throw ConfigError("transmitter Lambertian order must be non-negative");
    if (!(config.ld_pitch >= 0.0))
        throw ConfigError("LD pitch must be non-negative");
    if (!(config.center_luminous_intensity >= 0.0))
        throw ConfigError("luminous intensity must be non-negative");
    for (double p : config.tx_power)
        if (!(p > 0.0))
            throw ConfigError("per-colour transmit power must be positive");
    if (!(config.receiver_height > 0.0 && config.receiver_height < room.height))
        throw ConfigError("receiver plane must lie inside the room");
    validate_receiver_spec(config.nir);
    validate_receiver_spec(config.niadr);
    for (const auto &p : config.receiver_positions)
        if (!room.contains(p))
            throw ConfigError("receiver position outside the room");

    Scene scene;
    scene.room_ = room;
    for (Surface s : kSurfaces)
    {
        auto b1 = discretize_surface(room, s, room.element_size_bounce1);
        scene.bounce1_.insert(scene.bounce1_.end(), b1.begin(), b1.end());
        auto b2 = discretize_surface(room, s, room.element_size_bounce2);
        scene.bounce2_.insert(scene.bounce2_.end(), b2.begin(), b2.end());
    }

    const double per_ld_cd = config.intensity_convention == IntensityConvention::per_ld
                                 ? config.center_luminous_intensity
                                 : config.center_luminous_intensity / static_cast<double>(kLdsPerUnit);
    const double h = 0.5 * config.ld_pitch;
    const std::array<Vec3, kLdsPerUnit> offsets = {
        Vec3{-h, -config.ld_pitch, 0}, Vec3{-h, 0, 0}, Vec3{-h, config.ld_pitch, 0},
        Vec3{h, -config.ld_pitch, 0},  Vec3{h, 0, 0},  Vec3{h, config.ld_pitch, 0}};

    int id = 1;
    for (const auto &c : config.unit_centers)
    {
        if (!room.contains(c))
            throw ConfigError("light unit " + std::to_string(id) + " lies outside the room");
        LightUnit u;
        u.id = id++;
        u.center = c;
        for (std::size_t k = 0; k < kLdsPerUnit; ++k)
            u.ld_positions[k] = c + offsets[k];
        u.tx_power = config.tx_power;
        u.lambertian_order = config.tx_lambertian_order;
        u.ld_luminous_intensity = per_ld_cd;
        scene.units_.push_back(u);
    }

    scene.nir_ = config.nir;
    scene.nir_.kind = ReceiverKind::nir;
    scene.niadr_ = config.niadr;
    scene.niadr_.kind = ReceiverKind::niadr;
    scene.receiver_height_ = config.receiver_height;
    scene.convention_ = config.intensity_convention;
    scene.center_intensity_ = config.center_luminous_intensity;
    return scene;
}

// ------------------------------------------------------------------------

double IlluminanceGrid::min() const
{
    return lux.empty() ? 0.0 : *std::min_element(lux.begin(), lux.end());
}

double IlluminanceGrid::max() const
{
    return lux.empty() ? 0.0 : *std::max_element(lux.begin(), lux.end());
}

double IlluminanceGrid::mean() const
{
    return lux.empty() ? 0.0 : std::accumulate(lux.begin(), lux.end(), 0.0) / static_cast<double>(lux.size());
}

double illuminance_at(const Scene &scene, const Vec3 &point)
{
    const Vec3 up{0, 0, 1};
    double e = 0.0;
    for (const auto &u : scene.units())
    {
        for (const auto &ld : u.ld_positions)
        {
            const Vec3 d = ld - point;
            const double d2 = dot(d, d);
            const double dist = std::sqrt(d2);
            const double cos_emit = dot(u.normal, -d) / dist;
            const double cos_inc = dot(up, d) / dist;
            if (cos_emit <= 0.0 || cos_inc <= 0.0)
                continue;
            e += u.ld_luminous_intensity * std::pow(cos_emit, u.lambertian_order) * cos_inc / d2;
        }
    }
    return e;
}

IlluminanceGrid illuminance_map(const Scene &scene, double plane_height, double grid_step)
{
    const Room &room = scene.room();
    if (!(plane_height >= 0.0 && plane_height < room.height))
        throw ConfigError("illuminance plane must lie in [0, room height)");
    if (!(grid_step > 0.0))
        throw ConfigError("grid step must be positive");

    auto axis = [grid_step](double extent) {
        std::vector<double> v;
        const auto n = static_cast<std::size_t>(std::floor(extent / grid_step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
            v.push_back(static_cast<double>(i) * grid_step);
        return v;
    };

    IlluminanceGrid g;
    g.plane_height = plane_height;
    g.xs = axis(room.width);
    g.ys = axis(room.length);
    g.lux.resize(g.xs.size() * g.ys.size());
    for (std::size_t i = 0; i < g.xs.size(); ++i)
        for (std::size_t j = 0; j < g.ys.size(); ++j)
            g.lux[i * g.ys.size() + j] = illuminance_at(scene, {g.xs[i], g.ys[j], plane_height});
    return g;
}

} // namespace vlc
