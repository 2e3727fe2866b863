#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frechet/rng.hpp"
#include "frechet/spectral.hpp"

namespace frechet {

// Standard 1-Frechet draw via inverse CDF: -1/log(U).
double sample_frechet(Rng& rng);

// One exact draw of (X, Y).  Atom-only models use the max-construction over
// the atoms (one Frechet draw per atom, in atom order).  Models with a
// density draw Y from its Frechet marginal and invert the conditional CDF of
// X given Y = y to relative tolerance 1e-10; a uniform landing inside a CDF
// jump maps to the jump location.  The logistic family uses a closed-form
// reduction of that inversion to a one-dimensional Newton solve.
std::pair<double, double> sample_pair(const SpectralModel& m, Rng& rng);

// n thresholded ratios max(x,u)/max(y,u); u = 0 gives raw ratios.
std::vector<double> sample_ratios(const SpectralModel& m, std::size_t n, double u, Rng& rng);

struct SampleBatch {
    std::vector<double> x;
    std::vector<double> y;
    std::string model_id;
    std::uint64_t seed = 0;
};

// Deterministic batch: pairs are generated in chunks of 1024, chunk c seeded
// with derive_seed(seed, c), so the output is identical for every thread
// count.  threads <= 1 runs inline.
SampleBatch sample_batch(const SpectralModel& m, std::size_t n, std::uint64_t seed,
                         int threads = 1);

// Test oracle: the density part quantized into m equal-width cells (cell
// weights by quadrature), atoms kept exact, then the same max-construction
// as the atom-only sampler.  For atom-only models the draw is bit-identical
// to sample_pair for the same generator state.
class QuantizedSampler {
  public:
    QuantizedSampler(const SpectralModel& m, std::size_t cells);

    std::pair<double, double> sample(Rng& rng) const;
    std::size_t size() const { return fw_.size(); }

  private:
    std::vector<double> fw_;
    std::vector<double> gw_;
};

}  // namespace frechet
