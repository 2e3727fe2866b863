#include "frechet/gammatest.hpp"

#include <cmath>
#include <future>

#include "frechet/dist.hpp"
#include "frechet/sampler.hpp"

namespace frechet {

RatioMaxima ratio_maxima(std::span<const double> xs, std::span<const double> ys, double u) {
    if (xs.size() != ys.size()) throw std::invalid_argument("coordinate lengths differ");
    if (xs.empty()) throw std::invalid_argument("need at least one pair");
    if (!(u >= 0)) throw std::invalid_argument("u must be >= 0");
    RatioMaxima m;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0) || !(ys[i] > 0)) throw std::invalid_argument("pairs must be positive");
        double x = std::max(xs[i], u);
        double y = std::max(ys[i], u);
        m.r_plus = std::max(m.r_plus, x / y);
        m.r_minus = std::max(m.r_minus, y / x);
    }
    return m;
}

double quotient_coefficient(std::span<const double> xs, std::span<const double> ys, double u) {
    auto [rp, rm] = ratio_maxima(xs, ys, u);
    double num = rp + rm - 2.0;
    double den = rp * rm - 1.0;
    // R+ R- >= 1 always; equality makes the statistic 0/0.  The threshold
    // absorbs rounding of products of identical ratios.
    if (den <= 1e-12 * rp * rm) throw DegenerateStatistic("quotient statistic is 0/0: R+ R- = 1");
    return num / den;
}

double modified_quotient(std::span<const double> xs, std::span<const double> ys) {
    auto [rp, rm] = ratio_maxima(xs, ys, 0.0);
    return 1.0 / rp + 1.0 / rm;
}

double gamma2_cdf(double x, double theta) {
    if (std::isnan(x) || x < 0) throw std::domain_error("x must be >= 0");
    if (!(theta > 0)) throw std::domain_error("theta must be > 0");
    double z = x / theta;
    if (std::isinf(z)) return 1.0;
    return -std::expm1(-z) - z * std::exp(-z);
}

double gamma2_quantile(double p, double theta) {
    if (!(p >= 0 && p < 1)) throw std::domain_error("p must lie in [0,1)");
    if (!(theta > 0)) throw std::domain_error("theta must be > 0");
    if (p == 0) return 0.0;
    double lo = 0.0, hi = theta;
    while (gamma2_cdf(hi, theta) < p) hi *= 2;
    while (hi - lo > 1e-12 * hi) {
        double mid = 0.5 * (lo + hi);
        if (gamma2_cdf(mid, theta) >= p)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

namespace {

double null_theta_for(double u) { return u == 0 ? 1.0 : 1.0 / -std::expm1(-1.0 / u); }

double statistic_for(std::span<const double> xs, std::span<const double> ys, double u,
                     Variant variant) {
    if (variant == Variant::original) return quotient_coefficient(xs, ys, u);
    auto [rp, rm] = ratio_maxima(xs, ys, u);
    return 1.0 / rp + 1.0 / rm;
}

}  // namespace

GammaTestReport gamma_test(std::span<const double> xs, std::span<const double> ys, double level,
                           double u, Variant variant) {
    if (xs.size() < 2) throw std::invalid_argument("need n >= 2");
    if (!(level > 0 && level < 1)) throw std::invalid_argument("level must lie in (0,1)");
    GammaTestReport r;
    r.n = xs.size();
    r.variant = variant;
    r.u = u;
    r.level = level;
    r.null_theta = null_theta_for(u);
    r.statistic = double(r.n) * statistic_for(xs, ys, u, variant);
    r.p_value = 1.0 - gamma2_cdf(r.statistic, r.null_theta);
    r.reject = r.p_value < level;
    return r;
}

double limit_power(double rho, double level) {
    if (!(rho > 0 && rho <= 1)) throw std::domain_error("rho must lie in (0,1]");
    if (!(level > 0 && level < 1)) throw std::domain_error("level must lie in (0,1)");
    return 1.0 - gamma2_cdf(rho * gamma2_quantile(1.0 - level, 1.0), 1.0);
}

PowerCurve power_simulation(std::span<const double> rho_grid, std::size_t n, std::size_t reps,
                            double level, std::uint64_t seed, int threads) {
    if (rho_grid.empty()) throw std::invalid_argument("empty rho grid");
    for (double rho : rho_grid)
        if (!(rho > 0 && rho <= 1)) throw std::invalid_argument("rho must lie in (0,1]");
    if (n < 2 || reps < 1) throw std::invalid_argument("need n >= 2 and reps >= 1");
    if (!(level > 0 && level < 1)) throw std::invalid_argument("level must lie in (0,1)");

    PowerCurve curve;
    curve.n = n;
    curve.reps = reps;
    curve.level = level;
    curve.seed = seed;
    double crit = gamma2_quantile(1.0 - level, 1.0);

    for (double rho : rho_grid) {
        SpectralModel model = make_rho(rho);
        std::vector<char> reject(reps, 0);
        auto run = [&](std::size_t r0, std::size_t r1) {
            std::vector<double> xs(n), ys(n);
            for (std::size_t r = r0; r < r1; ++r) {
                Rng rng(derive_seed(seed, r));
                for (std::size_t i = 0; i < n; ++i) {
                    auto [x, y] = sample_pair(model, rng);
                    xs[i] = x;
                    ys[i] = y;
                }
                double q = modified_quotient(xs, ys);
                reject[r] = double(n) * q > crit ? 1 : 0;
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
        std::size_t hits = 0;
        for (char c : reject) hits += c;
        curve.points.push_back({rho, double(hits) / double(reps), limit_power(rho, level)});
    }
    return curve;
}

MaximaIndependenceReport joint_maxima_independence_check(const SpectralModel& m, std::size_t n,
                                                         std::size_t reps, std::uint64_t seed,
                                                         int threads) {
    if (n < 2 || reps < 1) throw std::invalid_argument("need n >= 2 and reps >= 1");
    auto ap = ratio_tail_index(m, Side::plus);
    auto am = ratio_tail_index(m, Side::minus);
    if (!ap || !am) throw std::domain_error("model has no ratio tail index");

    MaximaIndependenceReport rep;
    rep.alpha_plus = *ap;
    rep.alpha_minus = *am;
    rep.kappa_plus = norming(m, Side::plus, double(n), 0.0);
    rep.kappa_minus = norming(m, Side::minus, double(n), 0.0);
    rep.grid = {0.5, 1.0, 2.0};

    std::vector<double> sp(reps), sm(reps);
    auto run = [&](std::size_t r0, std::size_t r1) {
        std::vector<double> xs(n), ys(n);
        for (std::size_t r = r0; r < r1; ++r) {
            Rng rng(derive_seed(seed, r));
            for (std::size_t i = 0; i < n; ++i) {
                auto [x, y] = sample_pair(m, rng);
                xs[i] = x;
                ys[i] = y;
            }
            auto mx = ratio_maxima(xs, ys, 0.0);
            sp[r] = mx.r_plus / rep.kappa_plus;
            sm[r] = mx.r_minus / rep.kappa_minus;
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

    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = rep.grid[i], t = rep.grid[j];
            std::size_t count = 0;
            for (std::size_t r = 0; r < reps; ++r)
                if (sp[r] <= s && sm[r] <= t) ++count;
            rep.empirical[i][j] = double(count) / double(reps);
            rep.limit[i][j] = std::exp(-std::pow(s, -rep.alpha_plus)) *
                              std::exp(-std::pow(t, -rep.alpha_minus));
            rep.max_abs_dev =
                std::max(rep.max_abs_dev, std::abs(rep.empirical[i][j] - rep.limit[i][j]));
        }
    }
    return rep;
}

}  // namespace frechet
