// Copyright 2026 The echobench Authors
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

#include <cmath>
#include <complex>
#include <cstdint>

namespace echobench {

/// Addresses one reproducible random stream. (master_seed, stream_id) -> generator state
/// is a pure function, so identical pairs reproduce identical draws regardless of thread
/// count or execution order. Each Monte Carlo work item gets its own stream_id.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    SeedSpec substream(std::uint64_t offset) const { return {master_seed, stream_id + offset}; }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace detail

/// Deterministic, portable xoshiro256++ generator with Box-Muller normals. Self-contained
/// so results do not depend on standard-library distribution implementations.
class Prng {
  public:
    explicit Prng(SeedSpec seed) {
        // Odd-constant multiply keeps (master, stream) -> state injective per master seed.
        std::uint64_t x = seed.master_seed ^ (0x9E3779B97F4A7C15ull * (seed.stream_id + 1));
        for (auto& s : state_) s = detail::splitmix64(x);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (second value cached).
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1)); // log(1-u1), u1 < 1
        const double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    /// Standard complex normal CN(0,1): E|z|^2 = 1.
    std::complex<double> complex_normal() {
        const double s = M_SQRT1_2;
        const double re = s * normal();
        const double im = s * normal();
        return {re, im};
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Count of successes in n Bernoulli(p) draws.
    long binomial(long n, double p) {
        long hits = 0;
        for (long i = 0; i < n; ++i)
            if (uniform() < p) ++hits;
        return hits;
    }

  private:
    std::uint64_t state_[4] = {};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace echobench
