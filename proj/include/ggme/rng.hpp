#pragma once

#include <cstdint>
#include <random>

namespace ggme {

// Counter-style stream family: (seed, stream_id) -> independent generator.
// Replicates (permutations, grid points, AIS runs) each get their own stream
// so results are identical no matter how the work is scheduled.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        // SplitMix64 over the pair; decorrelates nearby (seed, id) pairs.
        std::uint64_t z = seed;
        z = mix(z + 0x9e3779b97f4a7c15ULL + stream_id * 0xbf58476d1ce4e5b9ULL);
        std::seed_seq seq{(std::uint32_t)z, (std::uint32_t)(z >> 32),
                          (std::uint32_t)mix(z), (std::uint32_t)(mix(z) >> 32)};
        eng_.seed(seq);
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on (0,1); never returns 0 or 1.
    double uniform() {
        double u = (next_u64() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30; z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27; z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }
    std::mt19937_64 eng_;
};

} // namespace ggme
