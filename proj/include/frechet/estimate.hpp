#pragma once

#include <cstdint>
#include <span>

#include "frechet/spectral.hpp"

namespace frechet {

struct HillEstimate {
    double gamma_hat = 0;  // estimate of the reciprocal tail index
    std::size_t k = 0;
    std::size_t n = 0;
    double se_approx = 0;  // gamma_hat / sqrt(k)
};

// Mean log-excess of the k largest observations over the (k+1)-th largest:
//   gamma_hat = (1/k) sum_{i=1..k} log v_(i) - log v_(k+1),
// with v_(1) >= v_(2) >= ... the descending order statistics.  Requires
// positive data and 1 <= k <= n-1.  Scale- and permutation-invariant.
HillEstimate hill(std::span<const double> data, std::size_t k);

struct HillCltSummary {
    double mean = 0;      // of sqrt(k) (gamma_hat - 1/alpha) alpha over reps
    double variance = 0;  // sample variance of the same
    std::size_t k = 0;
    std::size_t reps = 0;
};

// Simulates reps independent batches of n ratios from the model, applies
// hill with k = floor(n^(beta/2)) and standardizes against the known alpha.
// Requires alpha > 1 and beta strictly inside (0, 2/3); the beta = 2/3
// endpoint is excluded because the standardized limit is off-center there.
// Deterministic in (seed); threads only partitions the replicate loop.
HillCltSummary hill_clt_check(const SpectralModel& m, double alpha, std::size_t n, double beta,
                              std::size_t reps, std::uint64_t seed, int threads = 1);

// #{x_i > t and y_i > t} / #{y_i > t}; throws if nothing exceeds t.
double empirical_tail_dependence(std::span<const double> xs, std::span<const double> ys,
                                 double t);

}  // namespace frechet
