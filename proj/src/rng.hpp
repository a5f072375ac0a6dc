#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ccva {

// Independent substreams keyed by (seed, path, stream). The engine never
// shares a generator between paths, so results do not depend on scheduling.
enum class Stream : std::uint32_t { driver = 1, bridge = 2, defaults = 3, zeta = 4, aux = 5 };

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t path, Stream s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                      static_cast<std::uint32_t>(s)};
    return std::mt19937_64(seq);
}

inline std::vector<double> normals(std::mt19937_64& g, std::size_t n) {
    std::normal_distribution<double> nd;
    std::vector<double> out(n);
    for (auto& z : out) z = nd(g);
    return out;
}

}  // namespace ccva
