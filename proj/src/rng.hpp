// SPDX-License-Identifier: Apache-2.0
//
// forestlink - forest radio channel modelling and sounding toolkit
// Copyright 2026 The forestlink Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace forestlink {

// Named random streams. Deriving every generator from (seed, stream) keeps
// e.g. the profile draws independent of the noise draws for the same seed.
enum class Stream : std::uint64_t {
    profile = 1,
    scatter = 2,
    noise = 3,
    payload = 4,
    pilots = 5,
    shadowing = 6,
    multistart = 7,
    sv = 8,
    ensemble = 9,
};

// SplitMix64 finaliser; used for counter-based seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t counter = 0) noexcept
{
    return mix64(mix64(seed ^ (static_cast<std::uint64_t>(stream) << 56)) + counter);
}

// Portable generator: mt19937_64 is bit-exact across standard libraries; the
// distribution transforms below are written out so that the variates are too
// (std::normal_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, Stream stream, std::uint64_t counter = 0)
        : engine_(derive_seed(seed, stream, counter)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    // Standard normal via Box-Muller; the second variate is cached.
    double normal();
    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    double exponential(double rate);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace forestlink
