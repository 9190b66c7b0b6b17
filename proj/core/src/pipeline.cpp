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

#include "vlc/pipeline.hpp"
#include "vlc/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vlc
{

Simulation::Simulation(RunConfig config, const WorkerPool &pool)
    : config_(std::move(config)), pool_(&pool), scene_(std::make_unique<Scene>(build_scene(config_.scene))),
      tracer_(std::make_unique<ChannelTracer>(*scene_, config_.channel, pool))
{
}

const UserObservation &Simulation::observe(ReceiverKind kind, const Vec3 &position)
{
    const auto key = std::make_tuple(static_cast<int>(kind), position.x, position.y, position.z);
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, observe_user(*tracer_, 0, UserRole::stationary, kind, position, true)).first;
    return it->second;
}

namespace
{

double tone_noise(const Simulation &sim)
{
    const auto &spec = sim.scene().receiver_spec(ReceiverKind::nir);
    return total_noise_sigma(sim.config().noise, spec.responsivity[index_of(Color::green)], 0.0,
                             TonePlan::standard().bpf_bandwidth);
}

} // namespace

BandwidthCell serving_link_bandwidth(Simulation &sim, ReceiverKind kind, const Vec3 &position)
{
    const UserObservation &obs = sim.observe(kind, position);
    const CnrTable table = compute_cnr_table(sim.scene(), std::span(&obs, 1), tone_noise(sim));
    const std::size_t best = rank_units(table, 0).front();

    BandwidthCell cell;
    cell.kind = kind;
    cell.position = position;
    cell.unit = table.unit_ids[best];
    cell.face = table.entries[0][best].face;
    cell.bandwidth = three_db_bandwidth(obs.paths[cell.face][best], sim.config().threedb);
    return cell;
}

Table2 run_table2(Simulation &sim)
{
    const RunConfig &cfg = sim.config();
    Table2 t;
    t.ys = cfg.sweep_y;
    t.lanes = cfg.lanes;
    t.kinds = cfg.receivers;
    for (double y : t.ys)
    {
        std::vector<BandwidthCell> row;
        for (double x : t.lanes)
            for (ReceiverKind k : t.kinds)
                row.push_back(serving_link_bandwidth(sim, k, {x, y, sim.scene().receiver_height()}));
        t.cells.push_back(std::move(row));
    }
    return t;
}

DetectionReport run_detection_report(Simulation &sim)
{
    const RunConfig &cfg = sim.config();
    DetectionReport r;
    r.kind = ReceiverKind::nir;
    r.positions = cfg.monte_carlo_positions;
    r.background_current = cfg.noise.background_current;
    r.estimate = estimate_distributions(sim.tracer(), r.kind, cfg.monte_carlo_positions, cfg.seed);

    const auto &d = r.estimate.distributions;
    const double rg = sim.scene().receiver_spec(r.kind).responsivity[index_of(Color::green)];
    // Shot noise of the desired tone at its mean level.
    const double sigma_t = total_noise_sigma(cfg.noise, rg, 2.0 * d.m_ds / rg, TonePlan::standard().bpf_bandwidth);
    const double th = optimal_threshold(d, sigma_t);
    r.model = detection_probabilities(d, sigma_t, th, static_cast<int>(sim.scene().units().size()));
    return r;
}

std::vector<PositionResult> run_scenarios(Simulation &sim)
{
    const RunConfig &cfg = sim.config();
    const double z = sim.scene().receiver_height();
    const double sigma_t = tone_noise(sim);
    std::vector<PositionResult> out;

    for (int id : cfg.selected_scenarios)
    {
        const ScenarioDefinition &def = find_scenario(cfg, id);
        for (ReceiverKind kind : cfg.receivers)
        {
            for (double lane : cfg.lanes)
            {
                for (double y : cfg.sweep_y)
                {
                    PositionResult pr;
                    pr.scenario = id;
                    pr.kind = kind;
                    pr.lane = lane;
                    pr.mobile = {lane, y, z};

                    std::vector<UserObservation> users;
                    int uid = 1;
                    for (const Vec3 &p : def.stationary)
                    {
                        users.push_back(sim.observe(kind, p));
                        users.back().user_id = uid++;
                        users.back().role = UserRole::stationary;
                        pr.positions.push_back(p);
                    }
                    users.push_back(sim.observe(kind, pr.mobile));
                    users.back().user_id = uid;
                    users.back().role = UserRole::mobile;
                    pr.positions.push_back(pr.mobile);

                    pr.table = compute_cnr_table(sim.scene(), users, sigma_t);
                    pr.allocation = allocate(pr.table, kind);
                    pr.cci = compute_cci(sim.scene(), users, pr.allocation);
                    pr.links = evaluate_links(sim.scene(), users, pr.allocation, cfg.noise, cfg.target_ber);
                    out.push_back(std::move(pr));
                }
            }
        }
    }
    return out;
}

IlluminanceReport run_illuminance(const RunConfig &config)
{
    IlluminanceReport r;
    r.convention = config.scene.intensity_convention;
    SceneConfig sc = config.scene;
    const Scene scene = build_scene(sc);
    r.grid = illuminance_map(scene, config.illuminance_plane, config.illuminance_step);

    sc.intensity_convention = r.convention == IntensityConvention::per_ld ? IntensityConvention::per_unit
                                                                          : IntensityConvention::per_ld;
    const Scene alt = build_scene(sc);
    r.alternate = illuminance_map(alt, config.illuminance_plane, config.illuminance_step);
    return r;
}

// ------------------------------------------------------------------------

namespace
{

std::string num(double v)
{
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

std::ofstream open_output(const std::filesystem::path &dir, const std::string &name, const std::string &schema)
{
    std::filesystem::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os)
        throw Error("cannot write " + (dir / name).string());
    os << "# schema: " << schema << '\n';
    return os;
}

std::string kind_tag(ReceiverKind k)
{
    return k == ReceiverKind::nir ? "nir" : "niadr";
}

std::string convention_tag(IntensityConvention c)
{
    return c == IntensityConvention::per_ld ? "ld" : "unit";
}

} // namespace

void write_table2(const std::filesystem::path &dir, const Table2 &t)
{
    auto os = open_output(dir, "table2.csv", "vlcsim-table2 v1");
    os << "y_m";
    for (double x : t.lanes)
        for (ReceiverKind k : t.kinds)
            os << ',' << kind_tag(k) << "_x" << num(x) << "_ghz";
    os << '\n';
    for (std::size_t r = 0; r < t.ys.size(); ++r)
    {
        os << num(t.ys[r]);
        for (const auto &c : t.cells[r])
            os << ',' << (c.bandwidth ? num(*c.bandwidth / 1e9) : std::string("flat"));
        os << '\n';
    }

    auto links = open_output(dir, "table2_links.csv", "vlcsim-table2-links v1");
    links << "receiver,x,y,unit,face,bandwidth_ghz\n";
    for (const auto &row : t.cells)
        for (const auto &c : row)
            links << kind_tag(c.kind) << ',' << num(c.position.x) << ',' << num(c.position.y) << ',' << c.unit << ','
                  << c.face + 1 << ',' << (c.bandwidth ? num(*c.bandwidth / 1e9) : std::string("flat")) << '\n';
}

void write_detection_report(const std::filesystem::path &dir, const DetectionReport &r)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "detection_report.txt");
        if (!os)
            throw Error("cannot write detection report");
        os << "# schema: vlcsim-detection v1\n";
        os << "receiver = " << kind_tag(r.kind) << '\n';
        os << "positions = " << r.positions << '\n';
        os << "background_current = " << num(r.background_current) << '\n';
        for (std::size_t k = 0; k < r.estimate.case_counts.size(); ++k)
            os << "case_los_" << k << " = " << r.estimate.case_counts[k] << '\n';
        os << "case_two_samples = " << r.estimate.desired.size() << '\n';
        write_detection_model(os, r.model);
    }
    {
        std::ofstream os(dir / "hist_desired.csv");
        write_histogram(os, r.estimate.desired_histogram);
    }
    {
        std::ofstream os(dir / "hist_undesired.csv");
        write_histogram(os, r.estimate.undesired_histogram);
    }
}

void write_scenarios(const std::filesystem::path &dir, const std::vector<PositionResult> &results)
{
    std::map<int, std::vector<const PositionResult *>> by_scenario;
    for (const auto &r : results)
        by_scenario[r.scenario].push_back(&r);

    for (const auto &[id, rows] : by_scenario)
    {
        const std::string stem = "scenario" + std::to_string(id);

        auto alloc = open_output(dir, stem + "_allocation.csv", "vlcsim-allocation v1");
        alloc << "scenario,receiver,mobile_x,mobile_y,user,x,y,z,unit,face,cnr_db,i_green_a2\n";
        auto links = open_output(dir, stem + "_links.csv", "vlcsim-links v1");
        links << "scenario,receiver,mobile_x,mobile_y,user,color,face,sinr_db,rate_bps,aggregate_bps\n";

        std::map<std::pair<int, double>, std::vector<const PositionResult *>> curves;
        for (const PositionResult *r : rows)
        {
            curves[{static_cast<int>(r->kind), r->lane}].push_back(r);
            const std::string prefix = std::to_string(id) + ',' + kind_tag(r->kind) + ',' + num(r->mobile.x) + ',' +
                                       num(r->mobile.y) + ',';
            for (std::size_t i = 0; i < r->allocation.users.size(); ++i)
            {
                const Assignment &a = r->allocation.users[i];
                const Vec3 &p = r->positions[i];
                std::string unit = "UNSERVED", face = "", cnr = "";
                if (a.unit)
                {
                    unit = std::to_string(*a.unit);
                    face = std::to_string(a.face + 1);
                    std::size_t col = 0;
                    while (r->table.unit_ids[col] != *a.unit)
                        ++col;
                    cnr = num(r->table.cnr_db(i, col));
                }
                alloc << prefix << a.user_id << ',' << num(p.x) << ',' << num(p.y) << ',' << num(p.z) << ',' << unit
                      << ',' << face << ',' << cnr << ',' << num(r->cci.interference[i][index_of(Color::green)])
                      << '\n';
            }
            for (const auto &u : r->links.users)
            {
                for (const auto &c : u.colors)
                {
                    const std::string sinr_db = c.sinr > 0.0 ? num(10.0 * std::log10(c.sinr)) : std::string("-inf");
                    links << prefix << u.user_id << ',' << to_string(c.color) << ','
                          << (u.unit ? std::to_string(c.face + 1) : std::string()) << ',' << sinr_db << ','
                          << num(c.rate) << ',' << num(u.aggregate) << '\n';
                }
            }
        }

        for (const auto &[key, pts] : curves)
        {
            const auto kind = static_cast<ReceiverKind>(key.first);
            auto plot = open_output(dir, stem + "_" + kind_tag(kind) + "_x" + num(key.second) + ".csv",
                                    "vlcsim-rate-curve v1");
            plot << "mobile_y";
            for (const auto &u : pts.front()->links.users)
                plot << ",user" << u.user_id << "_bps";
            plot << ",total_bps\n";
            for (const PositionResult *r : pts)
            {
                plot << num(r->mobile.y);
                for (const auto &u : r->links.users)
                    plot << ',' << num(u.aggregate);
                plot << ',' << num(r->links.total()) << '\n';
            }
        }
    }
}

void write_illuminance(const std::filesystem::path &dir, const IlluminanceReport &r)
{
    auto os = open_output(dir, "illuminance.csv", "vlcsim-illuminance v1");
    os << "x_m,y_m,lux\n";
    for (std::size_t i = 0; i < r.grid.xs.size(); ++i)
        for (std::size_t j = 0; j < r.grid.ys.size(); ++j)
            os << num(r.grid.xs[i]) << ',' << num(r.grid.ys[j]) << ',' << num(r.grid.at(i, j)) << '\n';

    std::ofstream s(dir / "illuminance_summary.txt");
    if (!s)
        throw Error("cannot write illuminance summary");
    s << "# schema: vlcsim-illuminance-summary v1\n";
    s << "plane_height = " << num(r.grid.plane_height) << '\n';
    s << "intensity_per = " << convention_tag(r.convention) << '\n';
    s << "min_lux = " << num(r.grid.min()) << '\n';
    s << "mean_lux = " << num(r.grid.mean()) << '\n';
    s << "max_lux = " << num(r.grid.max()) << '\n';
    s << "target_lux = " << num(r.target_lux) << '\n';
    s << "meets_target = " << (r.meets_target() ? "yes" : "no") << '\n';
    if (!r.meets_target())
        s << "shortfall_lux = " << num(r.target_lux - r.grid.min()) << '\n';
    const auto alt = r.convention == IntensityConvention::per_ld ? IntensityConvention::per_unit
                                                                 : IntensityConvention::per_ld;
    s << "alternate_intensity_per = " << convention_tag(alt) << '\n';
    s << "alternate_min_lux = " << num(r.alternate.min()) << '\n';
    s << "alternate_mean_lux = " << num(r.alternate.mean()) << '\n';
    s << "alternate_max_lux = " << num(r.alternate.max()) << '\n';
}

} // namespace vlc
