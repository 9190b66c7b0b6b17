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

#include "vlc/detection.hpp"
#include "vlc/error.hpp"
#include "vlc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace vlc
{

TonePlan TonePlan::standard(std::size_t n_units)
{
    TonePlan p;
    for (std::size_t i = 0; i < n_units; ++i)
        p.frequencies.push_back(500e6 + 60e6 * static_cast<double>(i));
    p.bpf_bandwidth = 4e6;
    return p;
}

double TonePlan::tone_for_unit(int unit_id) const
{
    if (unit_id < 1 || static_cast<std::size_t>(unit_id) > frequencies.size())
        throw ModelError("no tone assigned to unit " + std::to_string(unit_id));
    return frequencies[static_cast<std::size_t>(unit_id - 1)];
}

double total_noise_sigma(const NoiseModel &model, double responsivity, double received_power, double bandwidth)
{
    if (!(bandwidth > 0.0))
        throw ModelError("noise bandwidth must be positive");
    if (received_power < 0.0)
        throw ModelError("received power must be non-negative");
    if (model.background_current < 0.0 || model.preamp_density < 0.0)
        throw ModelError("noise parameters must be non-negative");
    const double pr = model.preamp_density * model.preamp_density * bandwidth;
    const double shot = 2.0 * kElectronCharge * responsivity * received_power * bandwidth;
    const double bg = 2.0 * kElectronCharge * model.background_current * bandwidth;
    return std::sqrt(bg + shot + pr);
}

double tone_current(double responsivity, double received_power)
{
    return responsivity * received_power / 2.0;
}

// ------------------------------------------------------------------------

Histogram make_histogram(std::span<const double> values, std::size_t n_bins)
{
    Histogram h;
    if (values.empty() || n_bins == 0)
        return h;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi <= lo)
    {
        const double pad = lo == 0.0 ? 1e-12 : std::abs(lo) * 1e-6;
        lo -= pad, hi += pad;
    }
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i <= n_bins; ++i)
        h.edges.push_back(lo + width * static_cast<double>(i));
    h.edges.back() = hi;
    h.counts.assign(n_bins, 0);
    for (double v : values)
    {
        auto k = static_cast<std::size_t>((v - lo) / width);
        ++h.counts[std::min(k, n_bins - 1)];
    }
    return h;
}

namespace
{

std::pair<double, double> mean_and_stddev(const std::vector<double> &v)
{
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

} // namespace

DistributionEstimate estimate_distributions_at(const ChannelTracer &tracer, ReceiverKind kind,
                                               std::span<const Vec3> positions)
{
    const Scene &scene = tracer.scene();
    const std::size_t n_units = scene.units().size();
    DistributionEstimate est;

    for (const Vec3 &p : positions)
    {
        const Receiver rx = scene.make_receiver(kind, p);
        std::vector<double> current(n_units, 0.0);
        std::vector<bool> los(n_units, false);
        for (std::size_t f = 0; f < rx.faces.size(); ++f)
        {
            const Photodetector &pd = rx.detector(f, Color::green);
            const auto gains = tracer.gains_all(pd);
            const auto vis = tracer.los_visible(pd);
            for (std::size_t u = 0; u < n_units; ++u)
            {
                const double pr = scene.units()[u].tx_power[index_of(Color::green)] * gains[u].total();
                current[u] = std::max(current[u], tone_current(pd.responsivity, pr));
                los[u] = los[u] || vis[u];
            }
        }

        std::vector<std::size_t> seen;
        for (std::size_t u = 0; u < n_units; ++u)
            if (los[u])
                seen.push_back(u);
        ++est.case_counts[std::min<std::size_t>(seen.size(), est.case_counts.size() - 1)];
        if (seen.size() != 2)
            continue;

        const double c0 = current[seen[0]], c1 = current[seen[1]];
        est.desired.push_back(std::max(c0, c1));
        est.undesired.push_back(std::min(c0, c1));
    }

    if (est.desired.empty())
    {
        std::string counts;
        for (std::size_t k = 0; k < est.case_counts.size(); ++k)
            counts += (k ? ", " : "") + std::to_string(k) + " LOS: " + std::to_string(est.case_counts[k]);
        throw ModelError("no two-unit (case two) positions among " + std::to_string(positions.size()) +
                         " samples (" + counts + ")");
    }

    const auto [m_ds, s_ds] = mean_and_stddev(est.desired);
    const auto [m_us, s_us] = mean_and_stddev(est.undesired);
    est.distributions = {m_ds, s_ds, m_us, s_us};
    est.desired_histogram = make_histogram(est.desired, 30);
    est.undesired_histogram = make_histogram(est.undesired, 30);
    return est;
}

std::vector<Vec3> random_positions(const Scene &scene, std::size_t n, std::uint64_t seed)
{
    const CounterRng rng(seed);
    const Room &room = scene.room();
    std::vector<Vec3> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = {room.width * rng.uniform(i, 0), room.length * rng.uniform(i, 1), scene.receiver_height()};
    return out;
}

DistributionEstimate estimate_distributions(const ChannelTracer &tracer, ReceiverKind kind, std::size_t n_positions,
                                            std::uint64_t seed)
{
    if (n_positions < 2)
        throw ModelError("at least two receiver positions are required");
    const auto positions = random_positions(tracer.scene(), n_positions, seed);
    return estimate_distributions_at(tracer, kind, positions);
}

// ------------------------------------------------------------------------

namespace
{

double gaussian_pdf(double z, double mean, double var)
{
    return std::exp(-(z - mean) * (z - mean) / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

// P(X >= x) for X ~ N(mean, var); exact step when var == 0.
double upper_tail(double x, double mean, double var)
{
    if (var <= 0.0)
        return x < mean ? 1.0 : (x == mean ? 0.5 : 0.0);
    return 0.5 * std::erfc((x - mean) / std::sqrt(2.0 * var));
}

} // namespace

double likelihood_undesired(double z, const ToneCurrentDistributions &d, double sigma_t)
{
    return gaussian_pdf(z, d.m_us, d.sigma_us * d.sigma_us + sigma_t * sigma_t);
}

double likelihood_desired(double z, const ToneCurrentDistributions &d, double sigma_t)
{
    return gaussian_pdf(z, d.m_ds, d.sigma_ds * d.sigma_ds + sigma_t * sigma_t);
}

double optimal_threshold(const ToneCurrentDistributions &d, double sigma_t)
{
    if (!(d.m_ds > d.m_us))
        throw ModelError("desired tone mean must exceed the undesired tone mean");
    if (d.sigma_ds < 0.0 || d.sigma_us < 0.0 || sigma_t < 0.0)
        throw ModelError("standard deviations must be non-negative");

    const double st2 = sigma_t * sigma_t;
    const double va = d.sigma_us * d.sigma_us + st2; // H1
    const double vb = d.sigma_ds * d.sigma_ds + st2; // H2
    const double a = vb - va;
    if (std::abs(a) <= 1e-12 * st2 || a == 0.0)
        return 0.5 * (d.m_ds + d.m_us);
    if (va <= 0.0 || vb <= 0.0)
        throw ModelError("a zero-variance hypothesis has no likelihood-ratio threshold");

    // vb (z - m_us)^2 - va (z - m_ds)^2 + va vb ln(va / vb) = 0, i.e. a z^2 - 2 b z + c = 0
    const double b = d.m_us * vb - d.m_ds * va;
    const double c = d.m_us * d.m_us * vb - d.m_ds * d.m_ds * va + va * vb * std::log(va / vb);
    const double disc = b * b - a * c;
    if (disc < 0.0)
        throw ModelError("likelihoods never intersect");
    const double q = b + std::copysign(std::sqrt(disc), b);

    std::vector<double> roots;
    roots.push_back(q / a);
    if (q != 0.0)
        roots.push_back(c / q);

    const double lo = d.m_us, hi = d.m_ds;
    double best = 0.0;
    bool found = false;
    for (double r : roots)
    {
        if (r >= lo && r <= hi && (!found || std::abs(r - 0.5 * (lo + hi)) < std::abs(best - 0.5 * (lo + hi))))
            best = r, found = true;
    }
    if (!found)
        throw ModelError("likelihoods do not intersect between the hypothesis means");
    return best;
}

DetectionModel detection_probabilities(const ToneCurrentDistributions &d, double sigma_t, double threshold, int units)
{
    if (units < 1)
        throw ModelError("at least one light unit is required");
    if (d.sigma_ds < 0.0 || d.sigma_us < 0.0 || sigma_t < 0.0)
        throw ModelError("standard deviations must be non-negative");

    const double st2 = sigma_t * sigma_t;
    const double vb = d.sigma_ds * d.sigma_ds + st2;
    const double va = d.sigma_us * d.sigma_us + st2;

    DetectionModel m;
    m.distributions = d;
    m.sigma_t = sigma_t;
    m.threshold = threshold;
    m.units = units;
    m.pc_ds = upper_tail(threshold, d.m_ds, vb);
    m.pf_us = upper_tail(threshold, d.m_us, va);
    m.pc_us = 1.0 - m.pf_us;
    m.pc_d = m.pc_ds * std::pow(m.pc_us, units - 1);

    // 1 - Pc_d without cancellation so tiny error rates survive.
    const double miss = upper_tail(-threshold, -d.m_ds, vb); // P(z <= threshold | H2)
    const double log_pc_d = std::log1p(-miss) + static_cast<double>(units - 1) * std::log1p(-m.pf_us);
    m.pwd = -std::expm1(log_pc_d);
    return m;
}

void write_detection_model(std::ostream &os, const DetectionModel &m)
{
    os.precision(10);
    os << "m_ds = " << m.distributions.m_ds << '\n'
       << "sigma_ds = " << m.distributions.sigma_ds << '\n'
       << "m_us = " << m.distributions.m_us << '\n'
       << "sigma_us = " << m.distributions.sigma_us << '\n'
       << "sigma_t = " << m.sigma_t << '\n'
       << "opt_th = " << m.threshold << '\n'
       << "Pc_ds = " << m.pc_ds << '\n'
       << "Pf_us = " << m.pf_us << '\n'
       << "Pc_us = " << m.pc_us << '\n'
       << "Pc_d = " << m.pc_d << '\n'
       << "Pwd = " << m.pwd << '\n'
       << "M = " << m.units << '\n';
}

void write_histogram(std::ostream &os, const Histogram &h)
{
    os << "# schema: vlcsim-histogram v1\n";
    os << "bin_lo,bin_hi,count\n";
    os.precision(10);
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        os << h.edges[i] << ',' << h.edges[i + 1] << ',' << h.counts[i] << '\n';
}

} // namespace vlc
