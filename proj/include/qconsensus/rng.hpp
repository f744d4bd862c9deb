// Copyright 2026 The qconsensus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qcons {

/// SplitMix64 output function; used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the independent stream number `index` derived from a master seed.
/// Rule: s = seed ^ 0x9e3779b97f4a7c15 * (index + 1), then one SplitMix64
/// step on s. Stable across releases; trajectories depend on it.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

/// xoshiro256** (Blackman & Vigna), seeded from a 64-bit value by four
/// SplitMix64 outputs. Every derived quantity (uniforms, normals) is
/// computed here rather than through <random> distributions, whose output
/// is implementation-defined.
class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal variate (Marsaglia polar method).
    double normal();

   private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qcons
