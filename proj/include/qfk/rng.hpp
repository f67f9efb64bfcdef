// Copyright 2026 The qfk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace qfk {

/// Deterministic 64-bit generator used everywhere randomness is needed.
///
/// This is SplitMix64 (Steele, Lea, Flood 2014): the state is a counter
/// advanced by the golden-gamma constant and each output is a finalizer mix
/// of the counter. It is fully specified here, has no platform-dependent
/// behavior, and the same seed produces the same stream on every machine.
/// std::mt19937_64 is deliberately not used because the standard
/// distributions on top of it are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling, so the result is
    /// unbiased and identical on every platform.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t threshold = -n % n;  // = 2^64 mod n
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % n;
            }
        }
    }

    /// Standard normal via Box-Muller. Each call consumes exactly two
    /// uniforms; no spare value is cached, so the stream position stays
    /// predictable.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        // Guard against log(0).
        if (u1 <= 0.0) {
            u1 = 0x1.0p-53;
        }
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Fisher-Yates shuffle of an index vector.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

/// SplitMix64 finalizer as a standalone hash step.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic per-pair seed: hash chain over (seed, i, j). Used so that
/// shot-mode kernel entries get independent streams no matter which thread
/// evaluates them.
inline std::uint64_t derive_pair_seed(std::uint64_t seed, std::uint64_t i,
                                      std::uint64_t j) {
    return mix64(mix64(mix64(seed) ^ i) ^ j);
}

}  // namespace qfk
