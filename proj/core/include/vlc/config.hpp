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

#ifndef VLC_CONFIG_HPP
#define VLC_CONFIG_HPP

#include "vlc/channel.hpp"
#include "vlc/detection.hpp"
#include "vlc/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vlc
{

struct ScenarioDefinition
{
    int id = 1;
    std::vector<Vec3> stationary; // users 1 and 2
};

// The four evaluation layouts: two stationary users, one mobile user sweeping two lanes.
std::vector<ScenarioDefinition> standard_scenarios();

struct RunConfig
{
    SceneConfig scene;
    ChannelOptions channel;
    NoiseModel noise;
    ThreeDbDefinition threedb = ThreeDbDefinition::electrical;

    std::vector<ScenarioDefinition> scenarios = standard_scenarios();
    std::vector<int> selected_scenarios = {1, 2, 3, 4};
    std::vector<ReceiverKind> receivers = {ReceiverKind::nir, ReceiverKind::niadr};
    std::vector<double> lanes = {0.5, 1.5};
    std::vector<double> sweep_y = {0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5};

    std::uint64_t seed = 20180101;
    std::size_t monte_carlo_positions = 1000;
    double target_ber = 1e-6;
    double illuminance_plane = 0.0;
    double illuminance_step = 0.1;
};

// Parses a scenario description (JSON). Missing keys keep their defaults; unknown
// keys are rejected. Throws ConfigError.
RunConfig parse_run_config(const std::string &text);
RunConfig load_run_config(const std::filesystem::path &path);

// Doubles both element sizes.
void apply_fast_mode(RunConfig &config);

const ScenarioDefinition &find_scenario(const RunConfig &config, int id);

} // namespace vlc

#endif
