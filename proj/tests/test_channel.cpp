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
#include "vlc/parallel.hpp"
#include "vlc/scene.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace vlc;

namespace
{

Photodetector up_detector(const Vec3 &p, double area = 6.25e-6, double fov = 40.0)
{
    Photodetector pd;
    pd.position = p;
    pd.area = area;
    pd.fov_deg = fov;
    return pd;
}

SceneConfig coarse_config()
{
    SceneConfig cfg;
    cfg.room.element_size_bounce1 = 0.2;
    cfg.room.element_size_bounce2 = 0.4;
    return cfg;
}

// Straightforward triple loop over LDs, elements and element pairs.
struct ReferenceGain
{
    double los = 0.0, b1 = 0.0, b2 = 0.0;
};

double ref_transfer(const Vec3 &a, const Vec3 &na, double n, const Vec3 &b, const Vec3 &nb, double area,
                    double min_cos)
{
    const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
    const double d2 = dx * dx + dy * dy + dz * dz;
    const double d = std::sqrt(d2);
    const double ce = (na.x * dx + na.y * dy + na.z * dz) / d;
    const double ci = -(nb.x * dx + nb.y * dy + nb.z * dz) / d;
    if (ce <= 0.0 || ci <= 0.0 || ci < min_cos)
        return 0.0;
    return (n + 1.0) / (2.0 * kPi) * std::pow(ce, n) * ci * area / d2;
}

ReferenceGain reference_gain(const Scene &scene, const LightUnit &u, const Photodetector &pd)
{
    ReferenceGain g;
    const double cf = std::cos(pd.fov_deg * kPi / 180.0);
    for (const Vec3 &ld : u.ld_positions)
    {
        g.los += ref_transfer(ld, u.normal, u.lambertian_order, pd.position, pd.normal, pd.area, cf);
        for (const auto &e1 : scene.bounce1_elements())
        {
            const double in = ref_transfer(ld, u.normal, u.lambertian_order, e1.center, e1.normal, e1.area, 0.0);
            if (in == 0.0)
                continue;
            g.b1 += in * e1.reflectance *
                    ref_transfer(e1.center, e1.normal, 1.0, pd.position, pd.normal, pd.area, cf);
            for (const auto &e2 : scene.bounce2_elements())
            {
                const double hop = ref_transfer(e1.center, e1.normal, 1.0, e2.center, e2.normal, e2.area, 0.0);
                if (hop == 0.0)
                    continue;
                g.b2 += in * e1.reflectance * hop * e2.reflectance *
                        ref_transfer(e2.center, e2.normal, 1.0, pd.position, pd.normal, pd.area, cf);
            }
        }
    }
    return g;
}

} // namespace

TEST(LosGain, OnAxis)
{
    const auto pd = up_detector({0.0, 0.0, 1.0});
    EXPECT_NEAR(los_gain({0.0, 0.0, 3.0}, {0.0, 0.0, -1.0}, 0.65, pd), 4.1033e-7, 1e-11);
}

TEST(LosGain, OutsideFieldOfView)
{
    const auto pd = up_detector({0.0, 0.0, 0.0});
    const double a = 50.0 * kPi / 180.0;
    const Vec3 tx{2.0 * std::sin(a), 0.0, 2.0 * std::cos(a)};
    EXPECT_EQ(los_gain(tx, {0.0, 0.0, -1.0}, 0.65, pd), 0.0);
}

TEST(LosGain, OffAxisClosedForm)
{
    const auto pd = up_detector({1.5, 2.0, 1.0});
    const double d2 = 0.25 + 1.0 + 4.0;
    const double c = 2.0 / std::sqrt(d2);
    const double oracle = 1.65 * 6.25e-6 * std::pow(c, 0.65) * c / (2.0 * kPi * d2);
    const double g = los_gain({1.0, 1.0, 3.0}, {0.0, 0.0, -1.0}, 0.65, pd);
    EXPECT_NEAR(g, oracle, 1e-15);
    EXPECT_NEAR(g, 2.498e-7, 5e-11);
}

TEST(Trace, NoReflectionsGivesSingleLosBin)
{
    SceneConfig cfg = coarse_config();
    cfg.room.reflectance.fill(0.0);
    cfg.ld_pitch = 0.0;
    const Scene scene = build_scene(cfg);
    const auto pd = up_detector({1.0, 1.0, 1.0});
    const auto ir = trace_impulse_response(scene, scene.unit(1), pd);
    ASSERT_EQ(ir.size(), 1u);
    EXPECT_EQ(ir.bounce1_gain(), 0.0);
    EXPECT_EQ(ir.bounce2_gain(), 0.0);
    EXPECT_NEAR(ir.los_gain(), 6.0 * 4.1033e-7, 1e-10);
    const double tof = 2.0 / kSpeedOfLight;
    EXPECT_LE(std::abs(ir.origin_time() - tof), ir.bin_width);
}

TEST(Trace, TimeOfFlightWithinOneBin)
{
    const Scene scene = build_scene(coarse_config());
    for (const Vec3 p : {Vec3{0.5, 0.5, 1.0}, Vec3{1.7, 2.9, 0.8}, Vec3{3.2, 6.1, 1.0}})
    {
        const auto pd = up_detector(p, 6.25e-6, 90.0);
        for (const LightUnit &u : scene.units())
        {
            double dmin = 1e9;
            for (const Vec3 &ld : u.ld_positions)
                dmin = std::min(dmin, norm(ld - p));
            const auto ir = trace_impulse_response(scene, u, pd);
            ASSERT_GT(ir.los_gain(), 0.0);
            EXPECT_LE(std::abs(ir.origin_time() - dmin / kSpeedOfLight), ir.bin_width);
        }
    }
}

TEST(Trace, MatchesBruteForceReference)
{
    const Scene scene = build_scene(coarse_config());
    const ChannelTracer tracer(scene);
    for (const Vec3 p : {Vec3{1.0, 1.0, 1.0}, Vec3{2.5, 4.2, 1.0}})
    {
        const auto pd = up_detector(p, 6.25e-6, 60.0);
        const auto irs = tracer.trace_all(pd);
        const auto gains = tracer.gains_all(pd);
        for (int id : {1, 7, 12})
        {
            const auto ref = reference_gain(scene, scene.unit(id), pd);
            const auto &ir = irs[static_cast<std::size_t>(id - 1)];
            const auto &g = gains[static_cast<std::size_t>(id - 1)];
            EXPECT_NEAR(ir.los_gain(), ref.los, 1e-12 * ref.los + 1e-30);
            EXPECT_NEAR(ir.bounce1_gain(), ref.b1, 1e-9 * ref.b1);
            EXPECT_NEAR(ir.bounce2_gain(), ref.b2, 1e-9 * ref.b2);
            EXPECT_NEAR(g.total(), ir.total_gain(), 1e-9 * ir.total_gain());
        }
    }
}

TEST(Trace, MirrorSymmetry)
{
    const Scene scene = build_scene(coarse_config());
    const ChannelTracer tracer(scene);
    for (double y : {0.5, 1.5, 2.5, 3.5})
    {
        const auto a = tracer.gains_all(up_detector({2.0, y, 1.0}));
        const auto b = tracer.gains_all(up_detector({2.0, 8.0 - y, 1.0}));
        for (std::size_t u = 0; u < 12; ++u)
        {
            const std::size_t m = (u / 4) * 4 + (3 - u % 4); // unit at (x, 8 - y)
            EXPECT_NEAR(a[u].total(), b[m].total(), 1e-9 * a[u].total());
        }
    }
}

TEST(Trace, EnergyMonotoneInReflectance)
{
    double prev = -1.0;
    for (double rho : {0.0, 0.2, 0.5, 0.8, 1.0})
    {
        SceneConfig cfg = coarse_config();
        cfg.room.reflectance.fill(rho);
        const Scene scene = build_scene(cfg);
        const auto pd = up_detector({1.3, 2.2, 1.0});
        const double g = trace_impulse_response(scene, scene.unit(2), pd).total_gain();
        EXPECT_GT(g, prev);
        prev = g;
    }
}

TEST(Trace, DeterministicAcrossWorkerCounts)
{
    const Scene scene = build_scene(coarse_config());
    const WorkerPool one(1), three(3);
    ChannelOptions opts;
    opts.chunk_size = 128;
    const ChannelTracer a(scene, opts, one), b(scene, opts, three);
    const auto pd = up_detector({0.7, 3.3, 1.0});
    const auto x = a.trace_all(pd), y = b.trace_all(pd);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t u = 0; u < x.size(); ++u)
    {
        EXPECT_EQ(x[u].origin_bin, y[u].origin_bin);
        EXPECT_EQ(x[u].los, y[u].los);
        EXPECT_EQ(x[u].bounce1, y[u].bounce1);
        EXPECT_EQ(x[u].bounce2, y[u].bounce2);
    }
    const auto gx = a.gains_all(pd), gy = b.gains_all(pd);
    for (std::size_t u = 0; u < gx.size(); ++u)
        EXPECT_EQ(gx[u].total(), gy[u].total());
}

TEST(ReceivePower, LinearInTransmitPower)
{
    SceneConfig cfg = coarse_config();
    cfg.room.reflectance.fill(0.0);
    cfg.ld_pitch = 0.0;
    const Scene scene = build_scene(cfg);
    const ChannelTracer tracer(scene);
    const Receiver rx = scene.make_receiver(ReceiverKind::nir, {1.0, 1.0, 1.0});
    const auto p = receive_power(tracer, scene.unit(1), rx, Color::green);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0], 7.386e-7, 1e-10);
}

TEST(ReceivePower, NoPathNoPower)
{
    SceneConfig cfg = coarse_config();
    cfg.room.reflectance.fill(0.0);
    const Scene scene = build_scene(cfg);
    const ChannelTracer tracer(scene);
    const Receiver rx = scene.make_receiver(ReceiverKind::nir, {0.2, 0.2, 1.0});
    EXPECT_EQ(receive_power(tracer, scene.unit(12), rx, Color::green)[0], 0.0);
}

TEST(ReceivePower, PerFaceForAngleDiversity)
{
    const Scene scene = build_scene(coarse_config());
    const ChannelTracer tracer(scene);
    const Receiver rx = scene.make_receiver(ReceiverKind::niadr, {1.0, 1.0, 1.0});
    const auto p = receive_power(tracer, scene.unit(1), rx, Color::red);
    ASSERT_EQ(p.size(), 7u);
    const auto ir = tracer.trace(scene.unit(1), rx.detector(0, Color::red));
    EXPECT_NEAR(p[0], 0.8 * ir.total_gain(), 1e-12 * p[0]);
}

// ------------------------------------------------------------------------

namespace
{

ImpulseResponse from_taps(const std::vector<double> &taps, double bw = 0.05e-9)
{
    return ImpulseResponse::from_absolute(bw, taps, std::vector<double>(taps.size(), 0.0),
                                          std::vector<double>(taps.size(), 0.0));
}

} // namespace

TEST(ThreeDb, SingleBinIsFlat)
{
    EXPECT_FALSE(three_db_bandwidth(from_taps({0.0, 0.0, 1e-6})).has_value());
}

TEST(ThreeDb, TwoEqualTaps)
{
    // |H(f)| / H(0) = |cos(pi f tau)|
    std::vector<double> taps(21, 0.0);
    taps[0] = taps[20] = 1.0;
    const auto ir = from_taps(taps);
    const double tau = 20 * 0.05e-9;
    EXPECT_NEAR(*three_db_bandwidth(ir, ThreeDbDefinition::electrical), 1.0 / (4.0 * tau), 1e3);
    EXPECT_NEAR(*three_db_bandwidth(ir, ThreeDbDefinition::optical), 1.0 / (3.0 * tau), 1e3);
}

TEST(ThreeDb, GeometricDecayClosedForm)
{
    const double r = 0.97;
    std::vector<double> taps(4000);
    for (std::size_t k = 0; k < taps.size(); ++k)
        taps[k] = std::pow(r, static_cast<double>(k));
    const double bw = 0.05e-9;
    const auto ir = from_taps(taps, bw);
    // (1 - r)^2 / (1 - 2 r cos w + r^2) = 1/2
    const double cw = (1.0 + r * r - 2.0 * (1.0 - r) * (1.0 - r)) / (2.0 * r);
    const double f3 = std::acos(cw) / (2.0 * kPi * bw);
    EXPECT_NEAR(*three_db_bandwidth(ir), f3, 1e-4 * f3);
    EXPECT_NEAR(magnitude_at(ir, f3), 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(ThreeDb, ZeroResponseThrows)
{
    ImpulseResponse ir;
    EXPECT_THROW(three_db_bandwidth(ir), ModelError);
}

TEST(ThreeDb, FrequencyResponseStartsAtUnity)
{
    const auto fr = frequency_response(from_taps({1.0, 0.5, 0.25}), 10e6, 1e9);
    ASSERT_FALSE(fr.magnitude.empty());
    EXPECT_DOUBLE_EQ(fr.frequencies.front(), 0.0);
    EXPECT_NEAR(fr.magnitude.front(), 1.0, 1e-15);
    for (double m : fr.magnitude)
        EXPECT_LE(m, 1.0 + 1e-12);
}

TEST(Export, ImpulseResponseCsv)
{
    std::ostringstream os;
    write_impulse_response(os, from_taps({1.0, 0.0, 2.0}));
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("# schema:", 0), 0u);
    EXPECT_NE(s.find('\n'), std::string::npos);
}
