#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "frechet/spectral.hpp"

namespace frechet {

// Raised when the original quotient statistic evaluates to 0/0, which happens
// with probability approaching one for strongly dependent data at u = 0.
struct DegenerateStatistic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Maxima of the thresholded ratios: R+ = max max(x_i,u)/max(y_i,u) and R-
// with the roles exchanged.
struct RatioMaxima {
    double r_plus = 0;
    double r_minus = 0;
};
RatioMaxima ratio_maxima(std::span<const double> xs, std::span<const double> ys, double u);

// Original quotient correlation coefficient
//   q = (R+ + R- - 2) / (R+ R- - 1);
// throws DegenerateStatistic when R+ R- = 1 (then the numerator is 0 too).
double quotient_coefficient(std::span<const double> xs, std::span<const double> ys, double u);

// Degeneracy-free variant q_hat = (R+ + R-) / (R+ R-) = 1/R+ + 1/R- at u = 0;
// equals 2 for perfectly dependent data instead of 0/0.
double modified_quotient(std::span<const double> xs, std::span<const double> ys);

enum class Variant { original, modified };

// Gamma law with shape 2 and scale theta: F(x) = 1 - e^(-x/theta)(1 + x/theta).
double gamma2_cdf(double x, double theta);
// Inverse of the above on p in [0,1); monotone root-find to 1e-12.
double gamma2_quantile(double p, double theta);

struct GammaTestReport {
    double statistic = 0;  // n * q
    Variant variant = Variant::modified;
    double u = 0;
    double null_theta = 1;  // scale of the Gamma(2, theta) null, (1-e^(-1/u))^-1
    double p_value = 1;
    bool reject = false;
    double level = 0.05;
    std::size_t n = 0;
};

// Independence test: statistic n*q against the Gamma(2, theta) null with
// theta = (1 - e^(-1/u))^-1 (theta = 1 at u = 0); reject when the p-value
// falls below level.
GammaTestReport gamma_test(std::span<const double> xs, std::span<const double> ys, double level,
                           double u, Variant variant);

// Limiting power of the level test against the three-atom family with
// parameter rho: 1 - F_{Gamma(2,1)}(rho * q_1(1-level)).
double limit_power(double rho, double level);

struct PowerPoint {
    double rho = 0;
    double empirical_power = 0;
    double limit = 0;
};

struct PowerCurve {
    std::vector<PowerPoint> points;
    std::size_t n = 0;
    std::size_t reps = 0;
    double level = 0.05;
    std::uint64_t seed = 0;
};

// Monte Carlo power of the modified-variant test over a rho grid, using
// common random numbers across grid points (replicate r always draws with
// seed derive_seed(seed, r)).  Deterministic for every thread count.
PowerCurve power_simulation(std::span<const double> rho_grid, std::size_t n, std::size_t reps,
                            double level, std::uint64_t seed, int threads = 1);

struct MaximaIndependenceReport {
    double alpha_plus = 0;   // ratio tail indices used for the limit law
    double alpha_minus = 0;
    double kappa_plus = 0;   // norming constants at this n
    double kappa_minus = 0;
    std::array<double, 3> grid{};
    std::array<std::array<double, 3>, 3> empirical{};  // joint CDF of scaled maxima
    std::array<std::array<double, 3>, 3> limit{};      // product of Frechet CDFs
    double max_abs_dev = 0;
};

// Checks that (R+/kappa+, R-/kappa-) over reps batches of size n matches the
// product of alpha-Frechet laws on the grid {0.5, 1, 2}^2.  Throws
// std::domain_error when the model has no ratio tail index or no norming.
MaximaIndependenceReport joint_maxima_independence_check(const SpectralModel& m, std::size_t n,
                                                         std::size_t reps, std::uint64_t seed,
                                                         int threads = 1);

}  // namespace frechet
