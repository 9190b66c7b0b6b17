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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vlc;
namespace fs = std::filesystem;

namespace
{

RunConfig small_config()
{
    RunConfig cfg;
    cfg.scene.room.element_size_bounce1 = 0.2;
    cfg.scene.room.element_size_bounce2 = 0.4;
    cfg.monte_carlo_positions = 150;
    cfg.illuminance_step = 0.5;
    return cfg;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t data_rows(const fs::path &p)
{
    std::ifstream in(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            ++n;
    return n - 1; // header
}

void run_everything(const RunConfig &cfg, const fs::path &out, std::size_t workers)
{
    const WorkerPool pool(workers);
    Simulation sim(cfg, pool);
    write_illuminance(out, run_illuminance(cfg));
    write_table2(out, run_table2(sim));
    write_detection_report(out / "detect", run_detection_report(sim));
    write_scenarios(out, run_scenarios(sim));
}

} // namespace

TEST(Pipeline, TableShapeAndSymmetry)
{
    RunConfig cfg = small_config();
    const WorkerPool pool(1);
    Simulation sim(cfg, pool);
    const Table2 t = run_table2(sim);
    ASSERT_EQ(t.cells.size(), 8u);
    for (const auto &row : t.cells)
        ASSERT_EQ(row.size(), 4u);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
        {
            const auto &a = t.cells[r][c];
            const auto &b = t.cells[7 - r][c];
            EXPECT_EQ(a.bandwidth.has_value(), b.bandwidth.has_value());
            if (a.bandwidth && b.bandwidth)
                EXPECT_NEAR(*a.bandwidth, *b.bandwidth, 0.01 * *a.bandwidth);
        }
}

TEST(Pipeline, CoarseTableTracksFinerTable)
{
    const WorkerPool pool(0);
    RunConfig fine = small_config();
    fine.scene.room.element_size_bounce1 = 0.1;
    fine.scene.room.element_size_bounce2 = 0.4;
    RunConfig coarse = fine;
    apply_fast_mode(coarse);
    Simulation a(fine, pool), b(coarse, pool);
    const Table2 tf = run_table2(a), tc = run_table2(b);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 4; ++c)
        {
            const auto &f = tf.cells[r][c].bandwidth;
            const auto &g = tc.cells[r][c].bandwidth;
            if (f && g)
                EXPECT_NEAR(*g, *f, 0.25 * *f) << r << "," << c;
            else
                EXPECT_EQ(f.has_value(), g.has_value()) << r << "," << c;
        }
}

TEST(Pipeline, ScenarioRowsMatchSweep)
{
    RunConfig cfg = small_config();
    cfg.selected_scenarios = {1};
    const WorkerPool pool(1);
    Simulation sim(cfg, pool);
    const auto results = run_scenarios(sim);
    ASSERT_EQ(results.size(), 2u * 2u * 8u);

    const fs::path out = fs::temp_directory_path() / "vlcsim_pipeline_rows";
    fs::remove_all(out);
    write_scenarios(out, results);
    EXPECT_EQ(data_rows(out / "scenario1_allocation.csv"), results.size() * 3);
    EXPECT_EQ(data_rows(out / "scenario1_links.csv"), results.size() * 3 * 4);
    EXPECT_EQ(data_rows(out / "scenario1_nir_x0.5.csv"), 8u);
    EXPECT_EQ(data_rows(out / "scenario1_niadr_x1.5.csv"), 8u);
    fs::remove_all(out);
}

TEST(Pipeline, ColocatedNonImagingMobileGetsNothing)
{
    RunConfig cfg = small_config();
    cfg.selected_scenarios = {1};
    cfg.receivers = {ReceiverKind::nir};
    cfg.lanes = {1.0};
    cfg.sweep_y = {1.0};
    const WorkerPool pool(1);
    Simulation sim(cfg, pool);
    const auto results = run_scenarios(sim);
    ASSERT_EQ(results.size(), 1u);
    const auto &r = results.front();
    EXPECT_FALSE(r.allocation.for_user(3).unit.has_value());
    EXPECT_TRUE(r.allocation.for_user(3).conflict);
    EXPECT_EQ(r.links.for_user(3).aggregate, 0.0);
    EXPECT_TRUE(r.allocation.for_user(1).unit.has_value());
    EXPECT_TRUE(r.allocation.for_user(2).unit.has_value());
}

TEST(Pipeline, LinkReportInvariants)
{
    RunConfig cfg = small_config();
    cfg.selected_scenarios = {4};
    const WorkerPool pool(1);
    Simulation sim(cfg, pool);
    const double thr = sinr_for_ber(cfg.target_ber);
    for (const auto &r : run_scenarios(sim))
    {
        for (const auto &u : r.links.users)
        {
            double sum = 0.0;
            for (const auto &c : u.colors)
            {
                sum += c.rate;
                if (c.rate > 0.0)
                    EXPECT_GE(c.sinr, thr * 0.995);
            }
            EXPECT_EQ(u.aggregate, sum);
            if (!u.unit)
                EXPECT_EQ(u.aggregate, 0.0);
        }
    }
}

TEST(Pipeline, StationaryAssignmentsIgnoreMobileUser)
{
    RunConfig cfg = small_config();
    const WorkerPool pool(1);
    Simulation sim(cfg, pool);
    std::map<std::tuple<int, int, int>, int> seen;
    for (const auto &r : run_scenarios(sim))
        for (int uid : {1, 2})
        {
            const auto &a = r.allocation.for_user(uid);
            ASSERT_TRUE(a.unit.has_value());
            const auto key = std::make_tuple(r.scenario, static_cast<int>(r.kind), uid);
            const auto [it, fresh] = seen.emplace(key, *a.unit);
            if (!fresh)
                EXPECT_EQ(it->second, *a.unit);
        }
}

TEST(Pipeline, DetectionReportIsReproducible)
{
    RunConfig cfg = small_config();
    const WorkerPool pool(1);
    Simulation a(cfg, pool), b(cfg, pool);
    const auto ra = run_detection_report(a);
    const auto rb = run_detection_report(b);
    EXPECT_EQ(ra.model.pwd, rb.model.pwd);
    EXPECT_EQ(ra.estimate.desired, rb.estimate.desired);
    EXPECT_GT(ra.estimate.distributions.m_ds, ra.estimate.distributions.m_us);
}

TEST(Pipeline, IlluminanceReportsBothConventions)
{
    const auto r = run_illuminance(small_config());
    EXPECT_EQ(r.convention, IntensityConvention::per_ld);
    EXPECT_NEAR(r.grid.max(), 6.0 * r.alternate.max(), 1e-9 * r.grid.max());
    const fs::path out = fs::temp_directory_path() / "vlcsim_pipeline_lux";
    fs::remove_all(out);
    write_illuminance(out, r);
    EXPECT_EQ(data_rows(out / "illuminance.csv"), 9u * 17u);
    const std::string summary = slurp(out / "illuminance_summary.txt");
    EXPECT_NE(summary.find("alternate_min_lux"), std::string::npos);
    fs::remove_all(out);
}

TEST(Pipeline, OutputsIdenticalAcrossWorkersAndReruns)
{
    RunConfig cfg = small_config();
    cfg.channel.chunk_size = 256;
    const fs::path base = fs::temp_directory_path() / "vlcsim_pipeline_det";
    fs::remove_all(base);
    run_everything(cfg, base / "w1", 1);
    run_everything(cfg, base / "w3", 3);
    run_everything(cfg, base / "w1b", 1);

    std::size_t compared = 0;
    for (const auto &entry : fs::recursive_directory_iterator(base / "w1"))
    {
        if (!entry.is_regular_file())
            continue;
        const auto rel = fs::relative(entry.path(), base / "w1");
        const std::string ref = slurp(entry.path());
        EXPECT_EQ(ref, slurp(base / "w3" / rel)) << rel;
        EXPECT_EQ(ref, slurp(base / "w1b" / rel)) << rel;
        ++compared;
    }
    EXPECT_GT(compared, 10u);
    fs::remove_all(base);
}

TEST(Pipeline, RepeatedRunsInOneProcessAgree)
{
    RunConfig cfg = small_config();
    cfg.selected_scenarios = {2};
    const WorkerPool pool(1);
    Simulation shared(cfg, pool);
    const auto first = run_scenarios(shared);
    run_table2(shared);
    const auto second = run_scenarios(shared);
    Simulation fresh(cfg, pool);
    const auto third = run_scenarios(fresh);
    ASSERT_EQ(first.size(), third.size());
    for (std::size_t i = 0; i < first.size(); ++i)
    {
        EXPECT_EQ(first[i].links.total(), second[i].links.total());
        EXPECT_EQ(first[i].links.total(), third[i].links.total());
    }
}
