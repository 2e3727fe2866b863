#include "frechet/dist.hpp"

#include <cmath>
#include <stdexcept>

namespace frechet {

namespace {

constexpr double kQuadTol = 1e-10;

double softplus(double z) {
    // log(1 + e^z) without overflow at either end.
    if (z > 36.0) return z + std::exp(-z);
    if (z < -37.0) return std::exp(z);
    return std::log1p(std::exp(z));
}

double e1(double x) {
    // Exponential integral E1(x) = int_x^inf e^-v / v dv, x > 0.
    return -std::expint(-x);
}

bool atom_in_e(double ratio, double t) {
    if (std::isinf(ratio)) return true;  // g = 0, f > 0 sits in E_t for every t
    if (std::isinf(t)) return false;
    return ratio > t;
}

// Boundary of {f/g > t} inside the density support: f/g is nondecreasing in s,
// so E_t is a right interval (s_t, 1).  Bisection relies only on the
// predicate, never on evaluating f/g at the endpoints.
double threshold_s(const DensityPart& d, double t) {
    if (std::isinf(t)) return 1.0;
    auto in_e = [&](double s) {
        double oms = 1.0 - s;
        double fv = d.f(s, oms);
        double gv = d.g(s, oms);
        if (gv == 0) return fv > 0;
        return fv > t * gv;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (in_e(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

bool exchangeable(Form f) {
    return f == Form::independent || f == Form::rho || f == Form::logistic ||
           f == Form::mixed || f == Form::exp_ratio;
}

// Resolves the side: minus analyzes Y/X, which is the plus side of the
// swapped model.  Exchangeable families need no swap.
const SpectralModel& side_model(const SpectralModel& m, Side side,
                                std::optional<SpectralModel>& storage) {
    if (side == Side::plus || exchangeable(m.form())) return m;
    storage.emplace(swapped(m));
    return *storage;
}

void require_t(double t) {
    if (std::isnan(t) || t < 0) throw std::domain_error("t must be >= 0");
}

double generic_norm_f_et(const SpectralModel& m, double t) {
    double total = 0;
    for (const auto& a : m.atoms())
        if (atom_in_e(a.ratio(), t)) total += a.fw();
    if (const DensityPart* d = m.density()) {
        double st = threshold_s(*d, t);
        if (st < 1.0)
            total += integrate_unit(
                [&](double s, double oms) { return d->f(s, oms) * d->h(s, oms); }, st, 1.0,
                kQuadTol);
    }
    return total;
}

double generic_norm_g_dt(const SpectralModel& m, double t) {
    double total = 0;
    for (const auto& a : m.atoms())
        if (!atom_in_e(a.ratio(), t)) total += a.gw();
    if (const DensityPart* d = m.density()) {
        double st = threshold_s(*d, t);
        if (st > 0.0)
            total += integrate_unit(
                [&](double s, double oms) { return d->g(s, oms) * d->h(s, oms); }, 0.0, st,
                kQuadTol);
    }
    return total;
}

double logistic_norm_f(double alpha, double t) {
    if (t == 0) return 1.0;
    if (std::isinf(t)) return 0.0;
    double l1p = softplus(alpha * std::log(t));  // log(1 + t^alpha)
    return std::exp((1.0 / alpha - 1.0) * l1p);
}

double logistic_norm_g(double alpha, double t) {
    if (t == 0) return 0.0;
    if (std::isinf(t)) return 1.0;
    double lt = std::log(t);
    double l1p = softplus(alpha * lt);
    return std::exp((alpha - 1.0) * (lt - l1p / alpha));
}

double mixed_norm_f(double k, double t) {
    if (std::isinf(t)) return 1.0 - k;
    double p = 1.0 / (1.0 + t);
    double q = t * p;
    return (1.0 - k) + k * p * (1.0 + q);  // p(1+q) = 1 - q^2
}

double mixed_norm_g(double k, double t) {
    if (std::isinf(t)) return 1.0;
    double p = 1.0 / (1.0 + t);
    double q = t * p;
    return (1.0 - k) + k * q * (1.0 + p);
}

double exp_ratio_norm_f(double c, double t) {
    if (t >= 1.0) {
        double w = t > 745.0 ? 0.0 : std::exp(-t);
        return c * (t + 2.0) * w;
    }
    double it = 1.0 / t;
    return 1.0 - c * ((it > 745.0 ? 0.0 : std::exp(-it)) + e1(it));
}

double exp_ratio_norm_g(double c, double t) {
    if (t >= 1.0) return 1.0 - c * ((t > 745.0 ? 0.0 : std::exp(-t)) + e1(t));
    double it = 1.0 / t;
    double w = it > 745.0 ? 0.0 : std::exp(-it);
    return w == 0.0 ? 0.0 : c * (2.0 + it) * w;
}

}  // namespace

double norm_f_et(const SpectralModel& m, double t, Method method) {
    require_t(t);
    if (method == Method::fast) {
        switch (m.form()) {
            case Form::logistic:
                return logistic_norm_f(m.param(), t);
            case Form::mixed:
                return mixed_norm_f(m.param(), t);
            case Form::exp_ratio:
                return exp_ratio_norm_f(m.calibration(), t);
            default:
                break;  // atom families: the generic sum is already exact
        }
    }
    return generic_norm_f_et(m, t);
}

double norm_g_dt(const SpectralModel& m, double t, Method method) {
    require_t(t);
    if (method == Method::fast) {
        switch (m.form()) {
            case Form::logistic:
                return logistic_norm_g(m.param(), t);
            case Form::mixed:
                return mixed_norm_g(m.param(), t);
            case Form::exp_ratio:
                return exp_ratio_norm_g(m.calibration(), t);
            default:
                break;
        }
    }
    return generic_norm_g_dt(m, t);
}

double gamma_fn(const SpectralModel& m, Side side, double t, Method method) {
    if (!(t > 0)) throw std::domain_error("t must be > 0");
    std::optional<SpectralModel> storage;
    const SpectralModel& sm = side_model(m, side, storage);
    return norm_f_et(sm, t, method) / t;
}

double log_gamma_fn(const SpectralModel& m, Side side, double t) {
    if (!(t > 0)) throw std::domain_error("t must be > 0");
    std::optional<SpectralModel> storage;
    const SpectralModel& sm = side_model(m, side, storage);
    double lt = std::log(t);
    switch (sm.form()) {
        case Form::logistic: {
            double alpha = sm.param();
            return (1.0 / alpha - 1.0) * softplus(alpha * lt) - lt;
        }
        case Form::mixed: {
            double k = sm.param();
            if (k < 1.0) return std::log(mixed_norm_f(k, t)) - lt;
            double q = t / (1.0 + t);
            return std::log1p(q) - std::log1p(t) - lt;
        }
        case Form::exp_ratio: {
            double c = sm.calibration();
            if (t >= 1.0) return std::log(c) + std::log(t + 2.0) - t - lt;
            return std::log(exp_ratio_norm_f(c, t)) - lt;
        }
        default:
            return std::log(norm_f_et(sm, t)) - lt;
    }
}

double joint_cdf(const SpectralModel& m, double x, double y) {
    if (!(x > 0) || !(y > 0)) throw std::domain_error("x and y must be > 0");
    if (std::isinf(x) && std::isinf(y)) return 1.0;
    double t = x / y;
    return std::exp(-(norm_f_et(m, t) / x + norm_g_dt(m, t) / y));
}

double conditional_cdf(const SpectralModel& m, double x, double y) {
    if (!(x > 0) || !(y > 0) || std::isinf(y))
        throw std::domain_error("need x > 0 and finite y > 0");
    double t = x / y;
    double a = norm_f_et(m, t);
    double gd = norm_g_dt(m, t);
    double ge = std::max(0.0, 1.0 - gd);  // g-mass on E_t
    double expo = -a / x + ge / y;
    if (expo > 0) expo = 0;  // true exponent is <= 0; clip rounding residue
    return gd * std::exp(expo);
}

double ratio_joint(const SpectralModel& m, double t, double u) {
    require_t(t);
    if (!(u >= 0)) throw std::domain_error("u must be >= 0");
    if (t == 0) {
        if (norm_g_dt(m, 0.0) == 0) throw std::domain_error("P(X/Y <= 0) degenerate: no mass with f = 0");
        return 0.0;
    }
    double a = norm_f_et(m, t);
    double g = norm_g_dt(m, t);
    double pref;
    if (g == 0)
        pref = 0.0;
    else if (a == 0)
        pref = 1.0;
    else
        pref = 1.0 / (1.0 + (a / g) / t);
    double bracket = u == 0 ? 1.0 : -std::expm1(-(g + a / t) / u);
    return pref * bracket;
}

double ratio_tail(const SpectralModel& m, double t, double u) {
    if (std::isnan(t) || t < 1) throw std::domain_error("t must be >= 1");
    if (!(u >= 0)) throw std::domain_error("u must be >= 0");
    double a = norm_f_et(m, t);
    if (a == 0) return 0.0;
    double g = norm_g_dt(m, t);
    double pref = a / (a + t * g);
    double bracket = u == 0 ? 1.0 : -std::expm1(-(g + a / t) / u);
    return pref * bracket;
}

double tail_dependence(const SpectralModel& m) {
    double total = 0;
    for (const auto& a : m.atoms()) total += a.mass * std::min(a.f, a.g);
    if (const DensityPart* d = m.density()) {
        double s1 = threshold_s(*d, 1.0);
        if (s1 > 0)
            total += integrate_unit(
                [&](double s, double oms) { return d->f(s, oms) * d->h(s, oms); }, 0.0, s1,
                kQuadTol);
        if (s1 < 1)
            total += integrate_unit(
                [&](double s, double oms) { return d->g(s, oms) * d->h(s, oms); }, s1, 1.0,
                kQuadTol);
    }
    return total;
}

double norming(const SpectralModel& m, Side side, double n, double u, double u_n) {
    if (!(n >= 1)) throw std::domain_error("n must be >= 1");
    if (!(u >= 0)) throw std::domain_error("u must be >= 0");
    if (!(u_n >= 0) || std::isinf(u_n)) throw std::domain_error("u_n must be finite and >= 0");
    double target = u_n > 0 ? n / u_n : (u == 0 ? n : -std::expm1(-1.0 / u) * n);

    std::optional<SpectralModel> storage;
    const SpectralModel& sm = side_model(m, side, storage);
    if (!sm.density() && !std::isinf(sm.atoms().back().ratio()))
        throw std::domain_error("ratio is bounded; no Frechet norming exists");

    // target = 1/gamma(kappa) = kappa / norm_f_et(kappa), nondecreasing in kappa.
    auto inv_gamma = [&](double s) { return s / norm_f_et(sm, s); };

    double lo = 1.0, hi = 1.0;
    if (inv_gamma(1.0) >= target) {
        while (lo > 1e-300 && inv_gamma(lo) >= target) lo /= 2;
    } else {
        for (;;) {
            hi *= 2;
            double nf = norm_f_et(sm, hi);
            if (nf == 0) throw std::domain_error("ratio is bounded; no Frechet norming exists");
            if (hi / nf >= target) break;
            if (hi > 1e300) throw std::domain_error("norming bracket failed");
        }
        lo = hi / 2;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (inv_gamma(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;  // inf{s : 1/gamma(s) >= target}, the left-continuous inverse
}

std::optional<double> ratio_tail_index(const SpectralModel& m, Side side) {
    switch (m.form()) {
        case Form::independent:
            return 1.0;
        case Form::rho:
            return m.param() > 0 ? std::optional<double>(1.0) : std::nullopt;
        case Form::logistic:
            return m.param();
        case Form::mixed:
            return m.param() < 1.0 ? 1.0 : 2.0;
        case Form::exp_ratio:
            return std::nullopt;  // decays faster than any power
        case Form::discrete:
        case Form::custom:
            break;
    }
    if (m.density()) return std::nullopt;  // no general detection for custom densities
    // Atom models have a power tail exactly when the relevant side owns mass
    // at ratio infinity (plus: some g = 0) or zero (minus: some f = 0).
    bool heavy = side == Side::plus ? std::isinf(m.atoms().back().ratio())
                                    : m.atoms().front().ratio() == 0.0;
    if (heavy) return 1.0;
    return std::nullopt;
}

GammaFn::GammaFn(SpectralModel m, Side side) : model_(std::move(m)), side_(side) {}

double GammaFn::operator()(double t) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    double v = gamma_fn(model_, side_, t);
    cache_.emplace(t, v);
    return v;
}

}  // namespace frechet
