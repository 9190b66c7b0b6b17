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

#ifndef VLC_PIPELINE_HPP
#define VLC_PIPELINE_HPP

#include "vlc/allocation.hpp"
#include "vlc/channel.hpp"
#include "vlc/config.hpp"
#include "vlc/detection.hpp"
#include "vlc/link.hpp"
#include "vlc/parallel.hpp"
#include "vlc/scene.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

namespace vlc
{

// Scene plus tracer for one run configuration. Observations are memoised by
// receiver kind and position, so subcommands sharing a Simulation do not retrace.
class Simulation
{
  public:
    Simulation(RunConfig config, const WorkerPool &pool);

    const RunConfig &config() const { return config_; }
    const Scene &scene() const { return *scene_; }
    const ChannelTracer &tracer() const { return *tracer_; }
    const WorkerPool &pool() const { return *pool_; }

    // Full impulse responses for every face and unit.
    const UserObservation &observe(ReceiverKind kind, const Vec3 &position);

  private:
    RunConfig config_;
    const WorkerPool *pool_;
    std::unique_ptr<Scene> scene_;
    std::unique_ptr<ChannelTracer> tracer_;
    std::map<std::tuple<int, double, double, double>, UserObservation> cache_;
};

// ------------------------------------------------------------------------

struct BandwidthCell
{
    ReceiverKind kind = ReceiverKind::nir;
    Vec3 position;
    int unit = 0;         // serving unit
    std::size_t face = 0; // serving face
    std::optional<double> bandwidth; // [Hz], nullopt: flat
};

struct Table2
{
    std::vector<double> ys;
    std::vector<double> lanes;
    std::vector<ReceiverKind> kinds;
    // cells[row][lane * kinds.size() + kind]
    std::vector<std::vector<BandwidthCell>> cells;
};

// Serving link of a lone user: its highest-CNR unit, on the face with the highest CNR.
BandwidthCell serving_link_bandwidth(Simulation &sim, ReceiverKind kind, const Vec3 &position);

Table2 run_table2(Simulation &sim);

struct DetectionReport
{
    DistributionEstimate estimate;
    DetectionModel model;
    ReceiverKind kind = ReceiverKind::nir;
    std::size_t positions = 0;
    double background_current = 0.0;
};

DetectionReport run_detection_report(Simulation &sim);

struct PositionResult
{
    int scenario = 0;
    ReceiverKind kind = ReceiverKind::nir;
    double lane = 0.0;
    Vec3 mobile;
    std::vector<Vec3> positions; // per user, table order
    CnrTable table;
    AllocationMap allocation;
    CciLevels cci;
    LinkReport links;
};

std::vector<PositionResult> run_scenarios(Simulation &sim);

struct IlluminanceReport
{
    IlluminanceGrid grid;
    IntensityConvention convention = IntensityConvention::per_ld;
    IlluminanceGrid alternate; // same map under the other intensity convention
    double target_lux = 300.0;

    bool meets_target() const { return grid.min() >= target_lux; }
};

IlluminanceReport run_illuminance(const RunConfig &config);

// ------------------------------------------------------------------------
// Writers. Every file starts with a "# schema: ..." line followed by a header row.

void write_table2(const std::filesystem::path &dir, const Table2 &t);
void write_detection_report(const std::filesystem::path &dir, const DetectionReport &r);
void write_scenarios(const std::filesystem::path &dir, const std::vector<PositionResult> &results);
void write_illuminance(const std::filesystem::path &dir, const IlluminanceReport &r);

} // namespace vlc

#endif
