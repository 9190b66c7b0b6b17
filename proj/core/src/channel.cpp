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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <ostream>

namespace vlc
{

namespace
{

double sum(const std::vector<double> &v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

// Fraction of power emitted by a Lambertian source at `from` that lands on a patch of
// area `area` at `to`. Zero when the patch is behind the source or the incidence
// cosine is below `cos_min`.
inline double lambertian_transfer(const Vec3 &from, const Vec3 &from_normal, double order, const Vec3 &to,
                                  const Vec3 &to_normal, double area, double cos_min, double &distance)
{
    const Vec3 d = to - from;
    const double d2 = dot(d, d);
    distance = std::sqrt(d2);
    if (distance == 0.0)
        return 0.0;
    const double cos_emit = dot(from_normal, d) / distance;
    if (cos_emit <= 0.0)
        return 0.0;
    const double cos_inc = -dot(to_normal, d) / distance;
    if (cos_inc <= 0.0 || cos_inc < cos_min)
        return 0.0;
    const double pattern = order == 1.0 ? cos_emit : std::pow(cos_emit, order);
    return (order + 1.0) / (2.0 * kPi) * pattern * cos_inc * area / d2;
}

} // namespace

double ImpulseResponse::los_gain() const { return sum(los); }
double ImpulseResponse::bounce1_gain() const { return sum(bounce1); }
double ImpulseResponse::bounce2_gain() const { return sum(bounce2); }
double ImpulseResponse::total_gain() const { return los_gain() + bounce1_gain() + bounce2_gain(); }

std::vector<double> ImpulseResponse::combined() const
{
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = los[k] + bounce1[k] + bounce2[k];
    return out;
}

ImpulseResponse ImpulseResponse::from_absolute(double bin_width, std::vector<double> los, std::vector<double> bounce1,
                                               std::vector<double> bounce2)
{
    const std::size_t n = std::max({los.size(), bounce1.size(), bounce2.size()});
    los.resize(n), bounce1.resize(n), bounce2.resize(n);
    auto nonzero = [&](std::size_t k) { return los[k] != 0.0 || bounce1[k] != 0.0 || bounce2[k] != 0.0; };

    std::size_t first = 0;
    while (first < n && !nonzero(first))
        ++first;
    std::size_t last = n;
    while (last > first && !nonzero(last - 1))
        --last;

    ImpulseResponse ir;
    ir.bin_width = bin_width;
    ir.origin_bin = first == n ? 0 : first;
    ir.los.assign(los.begin() + static_cast<std::ptrdiff_t>(first), los.begin() + static_cast<std::ptrdiff_t>(last));
    ir.bounce1.assign(bounce1.begin() + static_cast<std::ptrdiff_t>(first),
                      bounce1.begin() + static_cast<std::ptrdiff_t>(last));
    ir.bounce2.assign(bounce2.begin() + static_cast<std::ptrdiff_t>(first),
                      bounce2.begin() + static_cast<std::ptrdiff_t>(last));
    return ir;
}

double los_gain(const Vec3 &tx_point, const Vec3 &tx_normal, double lambertian_order, const Photodetector &pd)
{
    double d = 0.0;
    return lambertian_transfer(tx_point, tx_normal, lambertian_order, pd.position, pd.normal, pd.area, pd.cos_fov(),
                               d);
}

// ------------------------------------------------------------------------

ChannelTracer::ChannelTracer(const Scene &scene, ChannelOptions options, const WorkerPool &pool)
    : scene_(&scene), options_(options), pool_(&pool), n_units_(scene.units().size())
{
    if (!(options_.bin_width > 0.0))
        throw ConfigError("impulse response bin width must be positive");
    if (options_.chunk_size == 0)
        throw ConfigError("chunk size must be positive");

    const Room &room = scene.room();
    const double diag = std::sqrt(room.width * room.width + room.length * room.length + room.height * room.height);
    n_bins_ = static_cast<std::size_t>(std::ceil(3.0 * diag / kSpeedOfLight / options_.bin_width)) + 4;

    const auto &elems = scene.bounce1_elements();
    unit_gain_.assign(elems.size() * n_units_, 0.0);
    unit_dist_.assign(elems.size() * n_units_, 0.0);
    element_lit_.assign(elems.size(), 0);

    const std::size_t n_chunks = (elems.size() + options_.chunk_size - 1) / options_.chunk_size;
    pool.parallel_for(n_chunks, [&](std::size_t c) {
        const std::size_t begin = c * options_.chunk_size;
        const std::size_t end = std::min(elems.size(), begin + options_.chunk_size);
        for (std::size_t e = begin; e < end; ++e)
        {
            const SurfaceElement &el = elems[e];
            for (std::size_t u = 0; u < n_units_; ++u)
            {
                const LightUnit &unit = scene.units()[u];
                double g_sum = 0.0, gd_sum = 0.0;
                for (const Vec3 &ld : unit.ld_positions)
                {
                    double d = 0.0;
                    const double g = lambertian_transfer(ld, unit.normal, unit.lambertian_order, el.center, el.normal,
                                                         el.area, 0.0, d);
                    g_sum += g;
                    gd_sum += g * d;
                }
                unit_gain_[e * n_units_ + u] = g_sum;
                unit_dist_[e * n_units_ + u] = g_sum > 0.0 ? gd_sum / g_sum : 0.0;
                if (g_sum > 0.0 && el.reflectance > 0.0)
                    element_lit_[e] = 1;
            }
        }
    });
}

std::vector<ChannelTracer::ElementView> ChannelTracer::visible_elements(const std::vector<SurfaceElement> &elems,
                                                                        const Photodetector &pd) const
{
    std::vector<ElementView> out;
    const double cos_fov = pd.cos_fov();
    for (std::size_t i = 0; i < elems.size(); ++i)
    {
        const SurfaceElement &el = elems[i];
        if (el.reflectance == 0.0)
            continue;
        double d = 0.0;
        const double g = lambertian_transfer(el.center, el.normal, SurfaceElement::lambertian_order, pd.position,
                                             pd.normal, pd.area, cos_fov, d);
        if (g > 0.0)
            out.push_back({i, el.reflectance * g, d});
    }
    return out;
}

std::vector<ImpulseResponse> ChannelTracer::trace_units(const std::vector<std::size_t> &unit_indices,
                                                        const Photodetector &pd) const
{
    const Scene &scene = *scene_;
    const auto &e1s = scene.bounce1_elements();
    const auto &e2s = scene.bounce2_elements();
    const double bw = options_.bin_width;
    const double inv_c_bw = 1.0 / (kSpeedOfLight * bw);
    const std::size_t nsel = unit_indices.size();
    const std::size_t nb = n_bins_;

    auto bin_of = [&](double path) {
        return std::min(nb - 1, static_cast<std::size_t>(path * inv_c_bw));
    };

    std::vector<std::vector<double>> los(nsel, std::vector<double>(nb, 0.0));
    for (std::size_t s = 0; s < nsel; ++s)
    {
        const LightUnit &unit = scene.units()[unit_indices[s]];
        for (const Vec3 &ld : unit.ld_positions)
        {
            double d = 0.0;
            const double g = lambertian_transfer(ld, unit.normal, unit.lambertian_order, pd.position, pd.normal,
                                                 pd.area, pd.cos_fov(), d);
            if (g > 0.0)
                los[s][bin_of(d)] += g;
        }
    }

    // Element -> detector views, indexed densely for bounce-1.
    std::vector<double> g1(e1s.size(), 0.0), d1(e1s.size(), 0.0);
    for (const auto &v : visible_elements(e1s, pd))
        g1[v.index] = v.gain, d1[v.index] = v.distance;
    const auto vis2 = visible_elements(e2s, pd);

    const std::size_t chunk = options_.chunk_size;
    const std::size_t n_chunks = (e1s.size() + chunk - 1) / chunk;
    // Partial histograms per chunk: [chunk][order][unit][bin]
    std::vector<std::vector<double>> partial(n_chunks);

    pool_->parallel_for(n_chunks, [&](std::size_t c) {
        std::vector<double> acc(2 * nsel * nb, 0.0);
        double *b1 = acc.data();
        double *b2 = acc.data() + nsel * nb;
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(e1s.size(), begin + chunk);
        for (std::size_t e = begin; e < end; ++e)
        {
            if (!element_lit_[e])
                continue;
            const SurfaceElement &el = e1s[e];

            // First order: per LD so each path lands in its own bin.
            if (g1[e] > 0.0)
            {
                for (std::size_t s = 0; s < nsel; ++s)
                {
                    const LightUnit &unit = scene.units()[unit_indices[s]];
                    if (unit_gain_[e * n_units_ + unit_indices[s]] == 0.0)
                        continue;
                    for (const Vec3 &ld : unit.ld_positions)
                    {
                        double d = 0.0;
                        const double g = lambertian_transfer(ld, unit.normal, unit.lambertian_order, el.center,
                                                             el.normal, el.area, 0.0, d);
                        if (g > 0.0)
                            b1[s * nb + bin_of(d + d1[e])] += g * g1[e];
                    }
                }
            }

            // Second order: unit -> e -> bounce-2 element -> detector.
            const double rho1 = el.reflectance / kPi;
            for (const auto &v : vis2)
            {
                const SurfaceElement &e2 = e2s[v.index];
                const Vec3 r = e2.center - el.center;
                const double r2 = dot(r, r);
                const double dist = std::sqrt(r2);
                const double cos1 = dot(el.normal, r) / dist;
                if (cos1 <= 0.0)
                    continue;
                const double cos2 = -dot(e2.normal, r) / dist;
                if (cos2 <= 0.0)
                    continue;
                const double chain = rho1 * cos1 * cos2 * e2.area / r2 * v.gain;
                const double path = dist + v.distance;
                for (std::size_t s = 0; s < nsel; ++s)
                {
                    const std::size_t k = e * n_units_ + unit_indices[s];
                    const double g = unit_gain_[k];
                    if (g == 0.0)
                        continue;
                    b2[s * nb + bin_of(unit_dist_[k] + path)] += g * chain;
                }
            }
        }
        partial[c] = std::move(acc);
    });

    std::vector<double> b1(nsel * nb, 0.0), b2(nsel * nb, 0.0);
    for (const auto &acc : partial)
    {
        for (std::size_t i = 0; i < nsel * nb; ++i)
        {
            b1[i] += acc[i];
            b2[i] += acc[nsel * nb + i];
        }
    }

    std::vector<ImpulseResponse> out;
    out.reserve(nsel);
    for (std::size_t s = 0; s < nsel; ++s)
    {
        const auto first = static_cast<std::ptrdiff_t>(s * nb);
        const auto last = static_cast<std::ptrdiff_t>((s + 1) * nb);
        out.push_back(ImpulseResponse::from_absolute(bw, std::move(los[s]),
                                                     std::vector<double>(b1.begin() + first, b1.begin() + last),
                                                     std::vector<double>(b2.begin() + first, b2.begin() + last)));
    }
    return out;
}

std::vector<ImpulseResponse> ChannelTracer::trace_all(const Photodetector &pd) const
{
    std::vector<std::size_t> idx(n_units_);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return trace_units(idx, pd);
}

ImpulseResponse ChannelTracer::trace(const LightUnit &unit, const Photodetector &pd) const
{
    const auto &units = scene_->units();
    for (std::size_t u = 0; u < units.size(); ++u)
        if (units[u].id == unit.id)
            return trace_units({u}, pd).front();
    throw ModelError("light unit is not part of the traced scene");
}

std::vector<ChannelGain> ChannelTracer::gains_all(const Photodetector &pd) const
{
    const Scene &scene = *scene_;
    const auto &e1s = scene.bounce1_elements();
    const auto &e2s = scene.bounce2_elements();

    std::vector<ChannelGain> out(n_units_);
    for (std::size_t u = 0; u < n_units_; ++u)
    {
        const LightUnit &unit = scene.units()[u];
        for (const Vec3 &ld : unit.ld_positions)
            out[u].los += los_gain(ld, unit.normal, unit.lambertian_order, pd);
    }

    std::vector<double> g1(e1s.size(), 0.0);
    for (const auto &v : visible_elements(e1s, pd))
        g1[v.index] = v.gain;
    const auto vis2 = visible_elements(e2s, pd);

    const std::size_t chunk = options_.chunk_size;
    const std::size_t n_chunks = (e1s.size() + chunk - 1) / chunk;
    std::vector<std::vector<double>> partial(n_chunks);

    pool_->parallel_for(n_chunks, [&](std::size_t c) {
        std::vector<double> acc(2 * n_units_, 0.0);
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(e1s.size(), begin + chunk);
        for (std::size_t e = begin; e < end; ++e)
        {
            if (!element_lit_[e])
                continue;
            const SurfaceElement &el = e1s[e];
            double onward = 0.0;
            for (const auto &v : vis2)
            {
                const SurfaceElement &e2 = e2s[v.index];
                const Vec3 r = e2.center - el.center;
                const double r2 = dot(r, r);
                const double dist = std::sqrt(r2);
                const double cos1 = dot(el.normal, r) / dist;
                if (cos1 <= 0.0)
                    continue;
                const double cos2 = -dot(e2.normal, r) / dist;
                if (cos2 <= 0.0)
                    continue;
                onward += cos1 * cos2 * e2.area / r2 * v.gain;
            }
            onward *= el.reflectance / kPi;
            for (std::size_t u = 0; u < n_units_; ++u)
            {
                const double g = unit_gain_[e * n_units_ + u];
                acc[u] += g * g1[e];
                acc[n_units_ + u] += g * onward;
            }
        }
        partial[c] = std::move(acc);
    });

    for (const auto &acc : partial)
    {
        for (std::size_t u = 0; u < n_units_; ++u)
        {
            out[u].bounce1 += acc[u];
            out[u].bounce2 += acc[n_units_ + u];
        }
    }
    return out;
}

std::vector<bool> ChannelTracer::los_visible(const Photodetector &pd) const
{
    std::vector<bool> out(n_units_, false);
    for (std::size_t u = 0; u < n_units_; ++u)
    {
        const LightUnit &unit = scene_->units()[u];
        for (const Vec3 &ld : unit.ld_positions)
            if (los_gain(ld, unit.normal, unit.lambertian_order, pd) > 0.0)
                out[u] = true;
    }
    return out;
}

ImpulseResponse trace_impulse_response(const Scene &scene, const LightUnit &unit, const Photodetector &pd,
                                       const ChannelOptions &options)
{
    return ChannelTracer(scene, options).trace(unit, pd);
}

std::vector<double> receive_power(const ChannelTracer &tracer, const LightUnit &unit, const Receiver &receiver,
                                  Color color)
{
    const auto &units = tracer.scene().units();
    const auto it = std::find_if(units.begin(), units.end(), [&](const LightUnit &u) { return u.id == unit.id; });
    if (it == units.end())
        throw ModelError("light unit is not part of the traced scene");
    const auto u = static_cast<std::size_t>(it - units.begin());

    std::vector<double> out;
    out.reserve(receiver.faces.size());
    for (std::size_t f = 0; f < receiver.faces.size(); ++f)
    {
        const auto gains = tracer.gains_all(receiver.detector(f, color));
        out.push_back(unit.tx_power[index_of(color)] * gains[u].total());
    }
    return out;
}

// ------------------------------------------------------------------------

double magnitude_at(const ImpulseResponse &ir, double frequency)
{
    const auto h = ir.combined();
    double dc = 0.0;
    std::complex<double> acc{0.0, 0.0};
    const double w = -2.0 * kPi * frequency * ir.bin_width;
    for (std::size_t k = 0; k < h.size(); ++k)
    {
        if (h[k] == 0.0)
            continue;
        dc += h[k];
        acc += std::polar(h[k], w * static_cast<double>(k));
    }
    if (dc <= 0.0)
        throw ModelError("impulse response carries no energy");
    return std::abs(acc) / dc;
}

namespace
{

struct SparseResponse
{
    std::vector<double> t; // bin index
    std::vector<double> h;
    double dc = 0.0;
    double bin_width = 0.0;

    explicit SparseResponse(const ImpulseResponse &ir) : bin_width(ir.bin_width)
    {
        const auto c = ir.combined();
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k] != 0.0)
                t.push_back(static_cast<double>(k)), h.push_back(c[k]), dc += c[k];
        if (!(dc > 0.0))
            throw ModelError("impulse response carries no energy");
    }

    double magnitude(double f) const
    {
        const double w = -2.0 * kPi * f * bin_width;
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k)
        {
            const double ph = w * t[k];
            re += h[k] * std::cos(ph);
            im += h[k] * std::sin(ph);
        }
        return std::hypot(re, im) / dc;
    }
};

} // namespace

FrequencyResponse frequency_response(const ImpulseResponse &ir, double step, double max_frequency)
{
    if (!(step > 0.0))
        throw ConfigError("frequency step must be positive");
    const SparseResponse sr(ir);
    const double fmax = max_frequency > 0.0 ? max_frequency : 0.5 / ir.bin_width;
    FrequencyResponse fr;
    const auto n = static_cast<std::size_t>(std::floor(fmax / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i)
    {
        const double f = static_cast<double>(i) * step;
        fr.frequencies.push_back(f);
        fr.magnitude.push_back(i == 0 ? 1.0 : sr.magnitude(f));
    }
    return fr;
}

std::optional<double> three_db_bandwidth(const ImpulseResponse &ir, ThreeDbDefinition definition, double scan_step)
{
    if (!(scan_step > 0.0))
        throw ConfigError("scan step must be positive");
    const SparseResponse sr(ir);
    const double level = definition == ThreeDbDefinition::electrical ? 1.0 / std::sqrt(2.0) : 0.5;
    const double nyquist = 0.5 / ir.bin_width;

    double lo = 0.0;
    for (double f = scan_step; f <= nyquist; f += scan_step)
    {
        if (sr.magnitude(f) <= level)
        {
            double hi = f;
            for (int it = 0; it < 60 && hi - lo > 1.0; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (sr.magnitude(mid) <= level ? hi : lo) = mid;
            }
            return hi;
        }
        lo = f;
    }
    return std::nullopt;
}

void write_impulse_response(std::ostream &os, const ImpulseResponse &ir)
{
    os << "# schema: vlcsim-impulse-response v1\n";
    os << "time_s,gain,los,bounce1,bounce2\n";
    os.precision(10);
    for (std::size_t k = 0; k < ir.size(); ++k)
    {
        const double t = static_cast<double>(ir.origin_bin + k) * ir.bin_width;
        os << t << ',' << ir.los[k] + ir.bounce1[k] + ir.bounce2[k] << ',' << ir.los[k] << ',' << ir.bounce1[k]
           << ',' << ir.bounce2[k] << '\n';
    }
}

void write_frequency_response(std::ostream &os, const FrequencyResponse &fr)
{
    os << "# schema: vlcsim-frequency-response v1\n";
    os << "frequency_hz,magnitude\n";
    os.precision(10);
    for (std::size_t i = 0; i < fr.frequencies.size(); ++i)
        os << fr.frequencies[i] << ',' << fr.magnitude[i] << '\n';
}

} // namespace vlc
