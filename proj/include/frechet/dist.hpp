#pragma once

#include <map>
#include <mutex>
#include <optional>

#include "frechet/spectral.hpp"

namespace frechet {

// Which ratio is analyzed: plus is X/Y, minus is Y/X.
enum class Side { plus, minus };

// fast uses the family's closed form when one exists and falls back to
// quadrature otherwise; quadrature forces the generic path (used to
// cross-check the closed forms).
enum class Method { fast, quadrature };

// Integral of f over {f/g > t} against the spectral measure.  t >= 0, with
// t = +inf meaning the set {g = 0, f > 0}.
double norm_f_et(const SpectralModel& m, double t, Method method = Method::fast);

// Integral of g over the complement {f/g <= t}.
double norm_g_dt(const SpectralModel& m, double t, Method method = Method::fast);

// Ratio tail scale gamma(t): P(X(u)/Y(u) > t) ~ gamma(t)/gamma(0+) shape
// factor aside, equal to norm_f_et(t)/t for side plus (swapped model for
// minus).  t > 0.
double gamma_fn(const SpectralModel& m, Side side, double t, Method method = Method::fast);

// log of gamma_fn evaluated in log space, usable far past double underflow
// (closed forms only; the generic path logs the direct value).
double log_gamma_fn(const SpectralModel& m, Side side, double t);

// P(X <= x, Y <= y) = exp(-(norm_f_et(x/y)/x + norm_g_dt(x/y)/y)); x, y > 0.
double joint_cdf(const SpectralModel& m, double x, double y);

// P(X <= x | Y = y); x, y > 0.
double conditional_cdf(const SpectralModel& m, double x, double y);

// P(X/Y <= t, Y > u); u = 0 gives the unconditional ratio law.  t >= 0, and
// the pair (t = 0, u arbitrary) requires norm_g_dt(0) > 0 to be meaningful.
double ratio_joint(const SpectralModel& m, double t, double u);

// P(X/Y > t | Y > u) for t >= 1 (exceedance form used by the tail tests).
double ratio_tail(const SpectralModel& m, double t, double u);

// lim_{x->inf} P(X > x | Y > x) = integral of min(f, g) against mu.
double tail_dependence(const SpectralModel& m);

// Norming constant kappa_n for the scaled ratio maxima: the solution s of
//   s / gamma_fn(s) = target,
// where target = n for u = 0, (1 - exp(-1/u)) * n for u > 0, and n/u_n when
// an explicit u_n > 0 override is given.  Throws std::domain_error when the
// ratio is bounded on the relevant side (no solution).
double norming(const SpectralModel& m, Side side, double n, double u, double u_n = 0.0);

// Exponent a with gamma_fn(t) ~ t^-a when the decay is regularly varying;
// nullopt when it is not (e.g. faster than any power).
std::optional<double> ratio_tail_index(const SpectralModel& m, Side side);

// Memoizing wrapper around gamma_fn for one (model, side); safe to share
// across threads.
class GammaFn {
  public:
    GammaFn(SpectralModel m, Side side);

    double operator()(double t) const;
    Side side() const { return side_; }
    const SpectralModel& model() const { return model_; }

  private:
    SpectralModel model_;
    Side side_;
    mutable std::map<double, double> cache_;
    mutable std::mutex mutex_;
};

}  // namespace frechet
