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

#ifndef VLC_SCENE_HPP
#define VLC_SCENE_HPP

#include "vlc/vec3.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace vlc
{

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kElectronCharge = 1.602176634e-19; // C
inline constexpr double kPi = 3.14159265358979323846;

// ------------------------------------------------------------------------
// Colours of the RYGB laser diodes and the matching filtered photodetectors
// ------------------------------------------------------------------------

enum class Color : std::uint8_t
{
    red = 0,
    yellow = 1,
    green = 2,
    blue = 3
};

inline constexpr std::array<Color, 4> kColors = {Color::red, Color::yellow, Color::green, Color::blue};

template <typename T>
using PerColor = std::array<T, 4>;

constexpr std::size_t index_of(Color c) { return static_cast<std::size_t>(c); }
std::string_view to_string(Color c);

// ------------------------------------------------------------------------
// Room and surface discretisation
// ------------------------------------------------------------------------

enum class Surface : std::uint8_t
{
    floor = 0,
    ceiling,
    wall_x0, // plane x = 0
    wall_xw, // plane x = width
    wall_y0, // plane y = 0
    wall_yl  // plane y = length
};

inline constexpr std::array<Surface, 6> kSurfaces = {Surface::floor,   Surface::ceiling, Surface::wall_x0,
                                                     Surface::wall_xw, Surface::wall_y0, Surface::wall_yl};

std::string_view to_string(Surface s);

struct Room
{
    double width = 4.0;  // x extent [m]
    double length = 8.0; // y extent [m]
    double height = 3.0; // z extent [m]

    // Indexed by Surface
    std::array<double, 6> reflectance = {0.3, 0.8, 0.8, 0.8, 0.8, 0.8};

    double element_size_bounce1 = 0.05; // [m]
    double element_size_bounce2 = 0.20; // [m]

    double surface_area(Surface s) const;
    Vec3 inward_normal(Surface s) const;
    bool contains(const Vec3 &p, double tol = 1e-9) const;
};

// Square patch of a reflecting surface, re-emitting as a first-order Lambertian.
struct SurfaceElement
{
    static constexpr double lambertian_order = 1.0;

    Vec3 center;
    Vec3 normal; // unit, pointing into the room
    double area = 0.0;
    double reflectance = 0.0;
    Surface surface = Surface::floor;
};

// Splits one surface of the room into square cells of edge `size`. Cells on the far
// edges are clipped to the surface boundary and carry their clipped area.
std::vector<SurfaceElement> discretize_surface(const Room &room, Surface s, double size);

// ------------------------------------------------------------------------
// Transmitters
// ------------------------------------------------------------------------

inline constexpr std::size_t kLdsPerUnit = 6;

struct LightUnit
{
    int id = 0; // 1-based
    Vec3 center;
    std::array<Vec3, kLdsPerUnit> ld_positions{};
    Vec3 normal{0.0, 0.0, -1.0};
    PerColor<double> tx_power{}; // optical power per LD and colour [W]
    double lambertian_order = 0.65;
    double ld_luminous_intensity = 162.0; // on-axis intensity of one LD [cd]
};

enum class IntensityConvention : std::uint8_t
{
    per_ld,  // the quoted centre luminous intensity belongs to each LD
    per_unit // the quoted value is shared by the six LDs of a unit
};

// ------------------------------------------------------------------------
// Receivers
// ------------------------------------------------------------------------

enum class ReceiverKind : std::uint8_t
{
    nir,
    niadr
};

std::string_view to_string(ReceiverKind k);

struct Photodetector
{
    Vec3 position;
    Vec3 normal{0.0, 0.0, 1.0};
    double area = 6.25e-6; // [m^2]
    double fov_deg = 40.0; // half angle from the normal
    Color color = Color::green;
    double responsivity = 0.3; // [A/W]

    double cos_fov() const;
};

struct Face
{
    double elevation_deg = 90.0;
    double azimuth_deg = 0.0;
    Vec3 normal{0.0, 0.0, 1.0};
    PerColor<Photodetector> detectors{};
};

struct Receiver
{
    ReceiverKind kind = ReceiverKind::nir;
    Vec3 position;
    double bandwidth = 0.5e9; // [Hz]
    std::vector<Face> faces;

    const Photodetector &detector(std::size_t face, Color c) const { return faces[face].detectors[index_of(c)]; }
};

// Constructional constants shared by every receiver of one kind.
struct ReceiverSpec
{
    ReceiverKind kind = ReceiverKind::nir;
    double fov_deg = 40.0;
    double pd_area = 6.25e-6;
    double bandwidth = 0.5e9;
    std::vector<std::pair<double, double>> orientations; // (elevation, azimuth) in degrees
    PerColor<double> responsivity = {0.4, 0.35, 0.3, 0.2};

    static ReceiverSpec nir();
    static ReceiverSpec niadr();
};

// (cos El cos Az, cos El sin Az, sin El), exact for multiples of 90 degrees.
Vec3 face_normal(double elevation_deg, double azimuth_deg);

// Angle between the detector normal and the direction to `source` is within the FOV.
bool fov_accepts(const Photodetector &pd, const Vec3 &source);

// ------------------------------------------------------------------------
// Users
// ------------------------------------------------------------------------

struct UserPlacement
{
    int id = 0;
    Vec3 position;
};

struct UserLayout
{
    int scenario_id = 1;
    std::vector<UserPlacement> stationary;
    int mobile_id = 3;
    std::vector<Vec3> mobile_sweep;
};

// y in {0.5, ..., length - 0.5} in 1 m steps at the given lane x, on the z = height plane.
std::vector<Vec3> mobile_sweep(double lane_x, double room_length = 8.0, double z = 1.0);

// ------------------------------------------------------------------------
// Scene
// ------------------------------------------------------------------------

struct SceneConfig
{
    Room room;
    std::vector<Vec3> unit_centers = {{1, 1, 3}, {1, 3, 3}, {1, 5, 3}, {1, 7, 3}, {2, 1, 3}, {2, 3, 3},
                                      {2, 5, 3}, {2, 7, 3}, {3, 1, 3}, {3, 3, 3}, {3, 5, 3}, {3, 7, 3}};
    double ld_pitch = 0.02;
    PerColor<double> tx_power = {0.8, 0.5, 0.3, 0.3};
    double tx_lambertian_order = 0.65;
    double center_luminous_intensity = 162.0;
    IntensityConvention intensity_convention = IntensityConvention::per_ld;
    ReceiverSpec nir = ReceiverSpec::nir();
    ReceiverSpec niadr = ReceiverSpec::niadr();
    double receiver_height = 1.0;
    std::vector<Vec3> receiver_positions; // validated against the room when given
};

class Scene
{
  public:
    const Room &room() const { return room_; }
    const std::vector<SurfaceElement> &bounce1_elements() const { return bounce1_; }
    const std::vector<SurfaceElement> &bounce2_elements() const { return bounce2_; }
    const std::vector<LightUnit> &units() const { return units_; }
    const LightUnit &unit(int id) const;
    const ReceiverSpec &receiver_spec(ReceiverKind k) const { return k == ReceiverKind::nir ? nir_ : niadr_; }
    double receiver_height() const { return receiver_height_; }
    IntensityConvention intensity_convention() const { return convention_; }
    double center_luminous_intensity() const { return center_intensity_; }

    Receiver make_receiver(ReceiverKind kind, const Vec3 &position) const;

  private:
    friend Scene build_scene(const SceneConfig &config);

    Room room_;
    std::vector<SurfaceElement> bounce1_;
    std::vector<SurfaceElement> bounce2_;
    std::vector<LightUnit> units_;
    ReceiverSpec nir_;
    ReceiverSpec niadr_;
    double receiver_height_ = 1.0;
    IntensityConvention convention_ = IntensityConvention::per_ld;
    double center_intensity_ = 162.0;
};

// Validates the configuration and discretises the room. Throws ConfigError.
Scene build_scene(const SceneConfig &config = {});

// ------------------------------------------------------------------------
// Illumination
// ------------------------------------------------------------------------

struct IlluminanceGrid
{
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> lux; // row-major, lux[ix * ys.size() + iy]
    double plane_height = 0.0;

    double at(std::size_t ix, std::size_t iy) const { return lux[ix * ys.size() + iy]; }
    double min() const;
    double max() const;
    double mean() const;
};

// Horizontal illuminance from direct light only, on grid points 0, step, ..., extent.
IlluminanceGrid illuminance_map(const Scene &scene, double plane_height, double grid_step);

// Direct horizontal illuminance at one point.
double illuminance_at(const Scene &scene, const Vec3 &point);

} // namespace vlc

#endif
