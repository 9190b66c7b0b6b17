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

#include "vlc/error.hpp"
#include "vlc/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace
{

struct Options
{
    std::string config;
    std::optional<int> scenario;
    std::string receiver = "both";
    std::optional<std::uint64_t> seed;
    bool fast = false;
    std::string out = "out";
    std::optional<double> ibg;
    std::string cd_per;
    std::string threedb;
    std::size_t workers = 0;
};

vlc::RunConfig make_config(const Options &o)
{
    vlc::RunConfig cfg = o.config.empty() ? vlc::RunConfig{} : vlc::load_run_config(o.config);
    if (o.scenario)
    {
        vlc::find_scenario(cfg, *o.scenario);
        cfg.selected_scenarios = {*o.scenario};
    }
    if (o.receiver == "nir")
        cfg.receivers = {vlc::ReceiverKind::nir};
    else if (o.receiver == "niadr")
        cfg.receivers = {vlc::ReceiverKind::niadr};
    else if (o.receiver == "both")
        cfg.receivers = {vlc::ReceiverKind::nir, vlc::ReceiverKind::niadr};
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.ibg)
    {
        if (*o.ibg < 0.0)
            throw vlc::ConfigError("--ibg must be non-negative");
        cfg.noise.background_current = *o.ibg;
    }
    if (o.cd_per == "ld")
        cfg.scene.intensity_convention = vlc::IntensityConvention::per_ld;
    else if (o.cd_per == "unit")
        cfg.scene.intensity_convention = vlc::IntensityConvention::per_unit;
    if (o.threedb == "sqrt2")
        cfg.threedb = vlc::ThreeDbDefinition::electrical;
    else if (o.threedb == "half")
        cfg.threedb = vlc::ThreeDbDefinition::optical;
    if (o.fast)
        vlc::apply_fast_mode(cfg);
    return cfg;
}

class Stage
{
  public:
    explicit Stage(std::string name) : name_(std::move(name)) {}
    const std::string &name() const { return name_; }

  private:
    std::string name_;
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"vlcsim - multi-user indoor visible light communication simulator"};
    app.require_subcommand(1);
    Options o;

    app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--scenario", o.scenario, "Run a single scenario (1-4)");
    app.add_option("--receiver", o.receiver, "Receiver kind")->check(CLI::IsMember({"nir", "niadr", "both"}));
    app.add_option("--seed", o.seed, "Monte Carlo seed");
    app.add_flag("--fast", o.fast, "Double element sizes for quick runs");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--ibg", o.ibg, "Background photocurrent [A]");
    app.add_option("--cd-per", o.cd_per, "Luminous intensity applies per laser diode or per unit")
        ->check(CLI::IsMember({"ld", "unit"}));
    app.add_option("--threedb", o.threedb, "3-dB definition: sqrt2 (electrical) or half (optical)")
        ->check(CLI::IsMember({"sqrt2", "half"}));
    app.add_option("--workers", o.workers, "Worker threads (0: machine parallelism)");

    auto *table2 = app.add_subcommand("table2", "3-dB bandwidth of the serving link over the sweep grid");
    auto *detect = app.add_subcommand("detect", "Tone detection Monte Carlo and probability report");
    auto *scenarios = app.add_subcommand("scenarios", "Allocation, interference and rates for the user scenarios");
    auto *illum = app.add_subcommand("illuminance", "Floor illuminance map and summary");
    auto *all = app.add_subcommand("all", "Run every stage");
    for (auto *sub : {table2, detect, scenarios, illum, all})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    Stage stage("config");
    try
    {
        const vlc::RunConfig cfg = make_config(o);
        const std::filesystem::path out = o.out;
        std::filesystem::create_directories(out);
        const vlc::WorkerPool pool(o.workers);

        const bool want_all = all->parsed();
        if (illum->parsed() || want_all)
        {
            stage = Stage("illuminance");
            vlc::write_illuminance(out, vlc::run_illuminance(cfg));
        }
        if (!(table2->parsed() || detect->parsed() || scenarios->parsed() || want_all))
            return 0;

        stage = Stage("scene");
        vlc::Simulation sim(cfg, pool);

        if (table2->parsed() || want_all)
        {
            stage = Stage("table2");
            vlc::write_table2(out, vlc::run_table2(sim));
        }
        if (detect->parsed() || want_all)
        {
            stage = Stage("detect");
            vlc::write_detection_report(out / "detect", vlc::run_detection_report(sim));
        }
        if (scenarios->parsed() || want_all)
        {
            stage = Stage("scenarios");
            vlc::write_scenarios(out, vlc::run_scenarios(sim));
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "vlcsim: " << stage.name() << " stage failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
