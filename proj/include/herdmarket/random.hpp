// SPDX-License-Identifier: Apache-2.0
//
// Seeded random streams. Each consumer (attitude noise, coupling noise,
// fundamental noise, agent flips) gets its own engine derived from the master
// seed and a fixed stream id, so turning one noise source on or off never
// shifts the draws of another.
#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace herdmarket {

enum class StreamId : std::uint32_t {
    attitude = 0,
    coupling = 1,
    fundamental = 2,
    agents = 3,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of sweep cell (grid_index, replicate) under a master seed. Public and
/// fixed so any single cell can be rerun in isolation.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t grid_index,
                                 std::uint64_t replicate) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (grid_index + 1) * 0xd1b54a32d192ed03ULL);
    h = splitmix64(h ^ (replicate + 1) * 0x8cb92ba72f3d8dd7ULL);
    return h;
}

/// mt19937_64 seeded through std::seed_seq (both exactly specified by the
/// standard), with Boost distributions whose algorithms do not vary by
/// standard library vendor.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, StreamId stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                          static_cast<std::uint32_t>(master_seed >> 32),
                          static_cast<std::uint32_t>(stream), 0x6b617a6fU};
        engine_.seed(seq);
    }

    /// Draw from Normal(0, sd^2).
    double normal(double sd) { return sd * normal_(engine_); }

    /// Draw from Uniform[0, 1).
    double uniform() { return uniform_(engine_); }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
    boost::random::uniform_01<double> uniform_;
};

}  // namespace herdmarket
