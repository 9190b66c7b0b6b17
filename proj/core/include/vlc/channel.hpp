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

#ifndef VLC_CHANNEL_HPP
#define VLC_CHANNEL_HPP

#include "vlc/parallel.hpp"
#include "vlc/scene.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace vlc
{

struct ChannelOptions
{
    double bin_width = 0.05e-9;   // [s]
    std::size_t chunk_size = 2048; // bounce-1 elements per reduction chunk
};

// Time-binned channel gain from one light unit (all six LDs, unit power each) to one
// photodetector. bins[k] covers [origin_time() + k * bin_width, ... + bin_width).
struct ImpulseResponse
{
    double bin_width = 0.05e-9;
    std::size_t origin_bin = 0; // absolute index of the first stored bin
    std::vector<double> los;
    std::vector<double> bounce1;
    std::vector<double> bounce2;

    std::size_t size() const { return los.size(); }
    double origin_time() const { return static_cast<double>(origin_bin) * bin_width; }
    double los_gain() const;
    double bounce1_gain() const;
    double bounce2_gain() const;
    double total_gain() const;
    std::vector<double> combined() const;

    // Builds a response from absolute-time bins, trimming leading and trailing zeros.
    static ImpulseResponse from_absolute(double bin_width, std::vector<double> los, std::vector<double> bounce1,
                                         std::vector<double> bounce2);
};

// Total gain by reflection order, without time resolution.
struct ChannelGain
{
    double los = 0.0;
    double bounce1 = 0.0;
    double bounce2 = 0.0;

    double total() const { return los + bounce1 + bounce2; }
};

// Lambertian line-of-sight gain; zero outside the detector FOV or behind the emitter.
double los_gain(const Vec3 &tx_point, const Vec3 &tx_normal, double lambertian_order, const Photodetector &pd);

// Ray tracer up to second-order reflections. Construction caches the irradiance of
// every bounce-1 element by every light unit; tracing is then per detector.
class ChannelTracer
{
  public:
    explicit ChannelTracer(const Scene &scene, ChannelOptions options = {}, const WorkerPool &pool = serial_pool());

    const Scene &scene() const { return *scene_; }
    const ChannelOptions &options() const { return options_; }

    // One response per light unit, in scene.units() order.
    std::vector<ImpulseResponse> trace_all(const Photodetector &pd) const;
    ImpulseResponse trace(const LightUnit &unit, const Photodetector &pd) const;

    // Same physics, without binning; much cheaper.
    std::vector<ChannelGain> gains_all(const Photodetector &pd) const;

    // True when at least one LD of the unit reaches the detector directly.
    std::vector<bool> los_visible(const Photodetector &pd) const;

  private:
    struct ElementView
    {
        std::size_t index;
        double gain; // element -> detector, including reflectance
        double distance;
    };

    std::vector<ElementView> visible_elements(const std::vector<SurfaceElement> &elems, const Photodetector &pd) const;
    std::vector<ImpulseResponse> trace_units(const std::vector<std::size_t> &unit_indices,
                                             const Photodetector &pd) const;

    const Scene *scene_;
    ChannelOptions options_;
    const WorkerPool *pool_;
    std::size_t n_units_ = 0;
    std::size_t n_bins_ = 0;
    // Per bounce-1 element e and unit u (index e * n_units + u): summed LD irradiance
    // gain and the gain-weighted LD-to-element distance.
    std::vector<double> unit_gain_;
    std::vector<double> unit_dist_;
    std::vector<char> element_lit_;
};

ImpulseResponse trace_impulse_response(const Scene &scene, const LightUnit &unit, const Photodetector &pd,
                                       const ChannelOptions &options = {});

// Received optical power of one colour from one unit, one value per receiver face.
std::vector<double> receive_power(const ChannelTracer &tracer, const LightUnit &unit, const Receiver &receiver,
                                  Color color);

// ------------------------------------------------------------------------
// Frequency domain
// ------------------------------------------------------------------------

struct FrequencyResponse
{
    std::vector<double> frequencies; // [Hz]
    std::vector<double> magnitude;   // |H(f)| / H(0)
};

enum class ThreeDbDefinition
{
    electrical, // |H| falls to 1/sqrt(2) of DC
    optical     // |H| falls to 1/2 of DC
};

double magnitude_at(const ImpulseResponse &ir, double frequency);

// Grid 0, step, ..., max_frequency (defaults to the Nyquist limit of the binning).
FrequencyResponse frequency_response(const ImpulseResponse &ir, double step = 10e6, double max_frequency = 0.0);

// Smallest frequency at which the normalised magnitude reaches the 3-dB level;
// nullopt ("flat") when that never happens below the Nyquist limit.
std::optional<double> three_db_bandwidth(const ImpulseResponse &ir,
                                         ThreeDbDefinition definition = ThreeDbDefinition::electrical,
                                         double scan_step = 1e6);

void write_impulse_response(std::ostream &os, const ImpulseResponse &ir);
void write_frequency_response(std::ostream &os, const FrequencyResponse &fr);

} // namespace vlc

#endif
