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

#ifndef VLC_RANDOM_HPP
#define VLC_RANDOM_HPP

#include <cstdint>

namespace vlc
{

// Stateless counter-based generator: every draw is a pure function of
// (seed, stream, counter), so any subset of draws can be produced in any order
// or on any worker and still agree bit for bit. The mixing function is the
// SplitMix64 finaliser applied to a Weyl-sequence position.
class CounterRng
{
  public:
    explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const
    {
        std::uint64_t z = seed_ ^ mix(stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
        z += (counter + 1) * 0x9E3779B97F4A7C15ULL;
        return mix(z);
    }

    // Uniform on [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t stream, std::uint64_t counter) const
    {
        return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
    }

    constexpr CounterRng split(std::uint64_t key) const { return CounterRng(mix(seed_ + mix(key + 1))); }

    constexpr std::uint64_t seed() const { return seed_; }

  private:
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

} // namespace vlc

#endif
