#include "frechet/sampler.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "frechet/dist.hpp"

namespace frechet {

double sample_frechet(Rng& rng) { return -1.0 / std::log(rng.uniform()); }

namespace {

std::pair<double, double> sample_atoms(const std::vector<Atom>& atoms, Rng& rng) {
    double x = 0, y = 0;
    for (const auto& a : atoms) {
        double z = sample_frechet(rng);
        x = std::max(x, a.fw() * z);
        y = std::max(y, a.gw() * z);
    }
    return {x, y};
}

// Logistic conditional inversion.  With r = (1 + t^-alpha)^(1/alpha) the
// conditional CDF of X given Y = y collapses to F = r^(1-alpha) e^((1-r)/y),
// so solving F = U means finding the root of the convex decreasing
//   phi(r) = (1-alpha) log r + (1-r)/y - log U
// on (1, 1 - y log U], which brackets the root exactly.
double logistic_conditional_draw(double alpha, double y, double lnu) {
    double lo = 1.0;
    double hi = 1.0 - y * lnu;
    double r = hi;
    for (int i = 0; i < 100; ++i) {
        double phi = (1.0 - alpha) * std::log(r) + (1.0 - r) / y - lnu;
        if (phi >= 0)
            lo = r;
        else
            hi = r;
        double dphi = (1.0 - alpha) / r - 1.0 / y;
        double rn = r - phi / dphi;
        if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
        if (std::abs(rn - r) <= 1e-13 * rn) {
            r = rn;
            break;
        }
        r = rn;
    }
    double z = alpha * std::log(r);
    double lw = z > 36.0 ? z : std::log(std::expm1(z));  // log(r^alpha - 1)
    return std::exp(-lw / alpha) * y;
}

// Generic inversion of the conditional CDF in x: smallest x with F(x) >= U.
// The predicate form converges to the jump location whenever U falls inside
// a CDF jump.
double conditional_draw(const SpectralModel& m, double y, double u) {
    auto cdf = [&](double x) { return conditional_cdf(m, x, y); };
    double lo, hi;
    if (cdf(y) >= u) {
        hi = y;
        lo = y;
        while (lo > 1e-300 && cdf(lo) >= u) lo /= 2;
    } else {
        lo = y;
        hi = y;
        while (cdf(hi) < u) {
            hi *= 2;
            if (hi > 1e300) throw std::runtime_error("conditional inversion failed to bracket");
        }
    }
    while (hi - lo > 1e-10 * hi) {
        double mid = 0.5 * (lo + hi);
        if (cdf(mid) >= u)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

std::pair<double, double> sample_pair(const SpectralModel& m, Rng& rng) {
    if (!m.density()) return sample_atoms(m.atoms(), rng);
    double y = sample_frechet(rng);
    double u = rng.uniform();
    if (m.form() == Form::logistic) return {logistic_conditional_draw(m.param(), y, std::log(u)), y};
    return {conditional_draw(m, y, u), y};
}

std::vector<double> sample_ratios(const SpectralModel& m, std::size_t n, double u, Rng& rng) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    if (!(u >= 0)) throw std::invalid_argument("u must be >= 0");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [x, y] = sample_pair(m, rng);
        out.push_back(std::max(x, u) / std::max(y, u));
    }
    return out;
}

SampleBatch sample_batch(const SpectralModel& m, std::size_t n, std::uint64_t seed, int threads) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    SampleBatch out;
    out.x.resize(n);
    out.y.resize(n);
    out.model_id = m.form() == Form::custom ? "custom" : m.id();
    out.seed = seed;

    constexpr std::size_t kChunk = 1024;
    std::size_t chunks = (n + kChunk - 1) / kChunk;
    auto run_chunks = [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            Rng rng(derive_seed(seed, c));
            std::size_t end = std::min(n, (c + 1) * kChunk);
            for (std::size_t i = c * kChunk; i < end; ++i) {
                auto [x, y] = sample_pair(m, rng);
                out.x[i] = x;
                out.y[i] = y;
            }
        }
    };

    std::size_t workers = threads > 1 ? std::min<std::size_t>(threads, chunks) : 1;
    if (workers <= 1) {
        run_chunks(0, chunks);
        return out;
    }
    std::vector<std::future<void>> tasks;
    std::size_t per = (chunks + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t c0 = w * per;
        std::size_t c1 = std::min(chunks, c0 + per);
        if (c0 >= c1) break;
        tasks.push_back(std::async(std::launch::async, run_chunks, c0, c1));
    }
    for (auto& t : tasks) t.get();
    return out;
}

QuantizedSampler::QuantizedSampler(const SpectralModel& m, std::size_t cells) {
    if (cells < 2) throw std::invalid_argument("need at least 2 cells");
    for (const auto& a : m.atoms()) {
        fw_.push_back(a.fw());
        gw_.push_back(a.gw());
    }
    if (const DensityPart* d = m.density()) {
        for (std::size_t j = 0; j < cells; ++j) {
            double lo = double(j) / cells;
            double hi = double(j + 1) / cells;
            fw_.push_back(integrate_unit(
                [&](double s, double oms) { return d->f(s, oms) * d->h(s, oms); }, lo, hi, 1e-10));
            gw_.push_back(integrate_unit(
                [&](double s, double oms) { return d->g(s, oms) * d->h(s, oms); }, lo, hi, 1e-10));
        }
    }
}

std::pair<double, double> QuantizedSampler::sample(Rng& rng) const {
    double x = 0, y = 0;
    for (std::size_t i = 0; i < fw_.size(); ++i) {
        double z = sample_frechet(rng);
        x = std::max(x, fw_[i] * z);
        y = std::max(y, gw_[i] * z);
    }
    return {x, y};
}

}  // namespace frechet
