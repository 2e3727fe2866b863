#pragma once

#include <cstdint>
#include <random>

namespace frechet {

// Pinned generator: mt19937_64 with 53-bit uniforms mapped strictly inside
// (0,1).  Both the algorithm and the mapping are part of the reproducibility
// contract; switching either changes every sampled byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on (0,1): (x >> 11) has 53 bits, the +0.5 offset keeps both
    // endpoints unreachable.
    double uniform() {
        return (double(eng_() >> 11) + 0.5) * 0x1p-53;
    }

  private:
    std::mt19937_64 eng_;
};

// splitmix64 finalizer; decorrelates stream seeds derived from one base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace frechet
