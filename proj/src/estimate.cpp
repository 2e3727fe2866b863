#include "frechet/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

#include "frechet/sampler.hpp"

namespace frechet {

HillEstimate hill(std::span<const double> data, std::size_t k) {
    std::size_t n = data.size();
    if (n < 2) throw std::invalid_argument("need at least 2 observations");
    if (k < 1 || k > n - 1) throw std::invalid_argument("k must be in [1, n-1]");
    for (double v : data)
        if (!(v > 0) || std::isinf(v)) throw std::invalid_argument("data must be positive and finite");

    std::vector<double> v(data.begin(), data.end());
    std::nth_element(v.begin(), v.begin() + k, v.end(), std::greater<>());
    // v[0..k-1] are the k largest (unordered), v[k] the (k+1)-th largest.
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(v[i]);
    HillEstimate e;
    e.gamma_hat = sum / double(k) - std::log(v[k]);
    e.k = k;
    e.n = n;
    e.se_approx = e.gamma_hat / std::sqrt(double(k));
    return e;
}

HillCltSummary hill_clt_check(const SpectralModel& m, double alpha, std::size_t n, double beta,
                              std::size_t reps, std::uint64_t seed, int threads) {
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must be > 1");
    if (!(beta > 0.0 && beta < 2.0 / 3.0))
        throw std::invalid_argument("beta must lie strictly inside (0, 2/3)");
    if (n < 2 || reps < 1) throw std::invalid_argument("need n >= 2 and reps >= 1");
    auto k = std::size_t(std::floor(std::pow(double(n), beta / 2.0)));
    if (k < 1) k = 1;

    std::vector<double> z(reps);
    auto run = [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            Rng rng(derive_seed(seed, r));
            auto ratios = sample_ratios(m, n, 0.0, rng);
            double gh = hill(ratios, k).gamma_hat;
            z[r] = std::sqrt(double(k)) * (gh - 1.0 / alpha) * alpha;
        }
    };
    std::size_t workers = threads > 1 ? std::min<std::size_t>(threads, reps) : 1;
    if (workers <= 1) {
        run(0, reps);
    } else {
        std::vector<std::future<void>> tasks;
        std::size_t per = (reps + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t r0 = w * per;
            std::size_t r1 = std::min(reps, r0 + per);
            if (r0 >= r1) break;
            tasks.push_back(std::async(std::launch::async, run, r0, r1));
        }
        for (auto& t : tasks) t.get();
    }

    HillCltSummary s;
    s.k = k;
    s.reps = reps;
    double mean = 0;
    for (double v : z) mean += v;
    mean /= double(reps);
    double var = 0;
    for (double v : z) var += (v - mean) * (v - mean);
    s.mean = mean;
    s.variance = reps > 1 ? var / double(reps - 1) : 0.0;
    return s;
}

double empirical_tail_dependence(std::span<const double> xs, std::span<const double> ys,
                                 double t) {
    if (xs.size() != ys.size()) throw std::invalid_argument("coordinate lengths differ");
    if (!(t > 0)) throw std::invalid_argument("t must be > 0");
    std::size_t both = 0, denom = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i] > t) {
            ++denom;
            if (xs[i] > t) ++both;
        }
    }
    if (denom == 0) throw std::runtime_error("no exceedances of t");
    return double(both) / double(denom);
}

}  // namespace frechet
