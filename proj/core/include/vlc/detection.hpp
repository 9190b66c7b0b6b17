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

#ifndef VLC_DETECTION_HPP
#define VLC_DETECTION_HPP

#include "vlc/channel.hpp"
#include "vlc/parallel.hpp"
#include "vlc/scene.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace vlc
{

// Identification tones: unit i (1-based) carries tone i on the green channel.
struct TonePlan
{
    std::vector<double> frequencies; // [Hz]
    double bpf_bandwidth = 4e6;      // [Hz]

    // 500 MHz + 60 MHz * (i - 1)
    static TonePlan standard(std::size_t n_units = 12);

    double tone_for_unit(int unit_id) const;
    int unit_for_tone(std::size_t tone_index) const { return static_cast<int>(tone_index) + 1; }
};

struct NoiseModel
{
    double preamp_density = 4.5e-12;   // [A/sqrt(Hz)]
    double background_current = 100e-6; // [A]
};

// Root-sum-square of background shot, signal shot and preamplifier noise.
double total_noise_sigma(const NoiseModel &model, double responsivity, double received_power, double bandwidth);

// Tone current amplitude R * Pr / 2; its square is the tone's electrical power.
double tone_current(double responsivity, double received_power);

struct ToneCurrentDistributions
{
    double m_ds = 0.0;
    double sigma_ds = 0.0;
    double m_us = 0.0;
    double sigma_us = 0.0;
};

struct Histogram
{
    std::vector<double> edges; // size counts.size() + 1
    std::vector<std::size_t> counts;
};

Histogram make_histogram(std::span<const double> values, std::size_t n_bins);

struct DistributionEstimate
{
    ToneCurrentDistributions distributions;
    // case_counts[k]: positions where exactly k units have a LOS path (k >= 7 pooled).
    std::array<std::size_t, 8> case_counts{};
    std::vector<double> desired;   // a samples [A]
    std::vector<double> undesired; // b samples [A]
    Histogram desired_histogram;
    Histogram undesired_histogram;
};

// Classifies each position by its LOS unit count; for two-unit positions records the
// stronger (desired) and weaker (undesired) green tone current.
DistributionEstimate estimate_distributions_at(const ChannelTracer &tracer, ReceiverKind kind,
                                               std::span<const Vec3> positions);

// Uniform positions on the receiver plane drawn from a counter-based stream.
std::vector<Vec3> random_positions(const Scene &scene, std::size_t n, std::uint64_t seed);

DistributionEstimate estimate_distributions(const ChannelTracer &tracer, ReceiverKind kind, std::size_t n_positions,
                                            std::uint64_t seed);

// Gaussian likelihoods of the BPF output under each hypothesis.
double likelihood_undesired(double z, const ToneCurrentDistributions &d, double sigma_t);
double likelihood_desired(double z, const ToneCurrentDistributions &d, double sigma_t);

// Point between the means where the two likelihoods are equal.
double optimal_threshold(const ToneCurrentDistributions &d, double sigma_t);

struct DetectionModel
{
    ToneCurrentDistributions distributions;
    double sigma_t = 0.0;
    double threshold = 0.0;
    double pc_ds = 0.0;
    double pf_us = 0.0;
    double pc_us = 0.0;
    double pc_d = 0.0;
    double pwd = 0.0;
    int units = 12;
};

DetectionModel detection_probabilities(const ToneCurrentDistributions &d, double sigma_t, double threshold, int units);

// Flat key = value block.
void write_detection_model(std::ostream &os, const DetectionModel &m);
void write_histogram(std::ostream &os, const Histogram &h);

} // namespace vlc

#endif
