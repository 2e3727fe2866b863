#include "frechet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace frechet {

namespace {

bool ratio_le(double a, double b) {
    // Nondecreasing up to float slack; inf compares correctly on its own.
    if (std::isinf(a)) return std::isinf(b);
    if (std::isinf(b)) return true;
    return b >= a * (1.0 - 1e-9) - 1e-12;
}

double density_ratio(const DensityPart& d, double s) {
    double oms = 1.0 - s;
    double fv = d.f(s, oms);
    double gv = d.g(s, oms);
    if (!(fv >= 0) || !(gv >= 0)) throw std::invalid_argument("density f,g must be >= 0");
    if (gv > 0) return fv / gv;
    if (fv > 0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();  // both zero: no constraint
}

// Merged ratio monotonicity over atoms and a density grid, ordered by s.
bool ratio_order_ok(const std::vector<Atom>& atoms, const DensityPart* density, int grid_n) {
    struct Pt {
        double s;
        double r;
    };
    std::vector<Pt> pts;
    pts.reserve(atoms.size() + (density ? grid_n : 0));
    for (const auto& a : atoms) pts.push_back({a.s, a.ratio()});
    if (density) {
        for (int i = 1; i <= grid_n; ++i) {
            double s = double(i) / (grid_n + 1);
            double r = density_ratio(*density, s);
            if (!std::isnan(r)) pts.push_back({s, r});
        }
    }
    std::stable_sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.s < b.s; });
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!ratio_le(pts[i - 1].r, pts[i].r)) return false;
    return true;
}

}  // namespace

SpectralModel::SpectralModel(std::vector<Atom> atoms, std::optional<DensityPart> density,
                             Form form, double param)
    : atoms_(std::move(atoms)), density_(std::move(density)), form_(form), param_(param) {
    for (const auto& a : atoms_) {
        if (!(a.s >= 0.0 && a.s <= 1.0)) throw std::invalid_argument("atom location outside [0,1]");
        if (!std::isfinite(a.f) || !std::isfinite(a.g) || a.f < 0 || a.g < 0)
            throw std::invalid_argument("atom spectral values must be finite and >= 0");
        if (a.f == 0 && a.g == 0) throw std::invalid_argument("atom with both spectral values zero");
        if (!std::isfinite(a.mass) || a.mass <= 0) throw std::invalid_argument("atom mass must be > 0");
    }
    for (std::size_t i = 1; i < atoms_.size(); ++i) {
        if (!(atoms_[i - 1].s < atoms_[i].s))
            throw std::invalid_argument("atom locations must be strictly increasing");
    }
    if (density_ && (!density_->h || !density_->f || !density_->g))
        throw std::invalid_argument("density part must provide h, f and g");
    if (!density_ && atoms_.empty()) throw std::invalid_argument("empty spectral measure");
    if (!ratio_order_ok(atoms_, density_ ? &*density_ : nullptr, 1000))
        throw std::invalid_argument("f/g must be nondecreasing across the spectral measure");
}

SpectralModel make_independent() {
    std::vector<Atom> atoms{{0.0, 0.0, 2.0, 0.5}, {1.0, 2.0, 0.0, 0.5}};
    return SpectralModel(std::move(atoms), std::nullopt, Form::independent);
}

SpectralModel make_rho(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must be in [0,1]");
    std::vector<Atom> atoms;
    if (rho > 0) atoms.push_back({0.0, 0.0, 2.0, rho / 2});
    if (rho < 1) atoms.push_back({0.5, 1.0, 1.0, 1.0 - rho});
    if (rho > 0) atoms.push_back({1.0, 2.0, 0.0, rho / 2});
    return SpectralModel(std::move(atoms), std::nullopt, Form::rho, rho);
}

SpectralModel make_logistic(double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw std::invalid_argument("logistic alpha must be finite and > 1");
    DensityPart d;
    d.h = [](double, double) { return 1.0; };
    d.f = [alpha](double s, double oms) {
        // (1 - s^alpha) computed as -expm1(alpha*log1p(-oms)) so the s -> 1
        // singularity keeps full relative accuracy.
        double w = -std::expm1(alpha * std::log1p(-oms));
        return (alpha - 1.0) * std::pow(s, alpha - 1.0) * std::pow(w, -1.0 / alpha);
    };
    d.g = [alpha](double s, double) { return (alpha - 1.0) * std::pow(s, alpha - 2.0); };
    return SpectralModel({}, std::move(d), Form::logistic, alpha);
}

SpectralModel make_mixed(double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("mixed k must be in [0,1]");
    std::vector<Atom> atoms;
    if (k < 1) {
        atoms.push_back({0.0, 0.0, 2.0, (1.0 - k) / 2});
        atoms.push_back({1.0, 2.0, 0.0, (1.0 - k) / 2});
    }
    std::optional<DensityPart> d;
    if (k > 0) {
        d.emplace();
        d->h = [k](double, double) { return k; };
        d->f = [](double s, double) { return 2.0 * s; };
        d->g = [](double, double oms) { return 2.0 * oms; };
    }
    return SpectralModel(std::move(atoms), std::move(d), Form::mixed, k);
}

SpectralModel make_discrete(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("discrete weight vectors differ in length");
    if (a.empty()) throw std::invalid_argument("discrete model needs at least one component");
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]) || a[i] < 0 || b[i] < 0)
            throw std::invalid_argument("discrete weights must be finite and >= 0");
        if (a[i] == 0 && b[i] == 0) throw std::invalid_argument("component with both weights zero");
        sa += a[i];
        sb += b[i];
    }
    if (sa <= 0 || sb <= 0) throw std::invalid_argument("each weight vector must have positive sum");

    std::size_t m = a.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto ratio = [&](std::size_t i) {
        return b[i] > 0 ? (a[i] / sa) / (b[i] / sb) : std::numeric_limits<double>::infinity();
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return ratio(i) < ratio(j); });
    for (std::size_t i = 1; i < m; ++i)
        if (ratio(order[i - 1]) == ratio(order[i]))
            throw std::invalid_argument("tied ratios; merge equal-ratio components first");

    std::vector<Atom> atoms;
    atoms.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        double s = (m == 1) ? 0.5 : double(i) / double(m - 1);
        atoms.push_back({s, a[order[i]] / sa, b[order[i]] / sb, 1.0});
    }
    SpectralModel model(std::move(atoms), std::nullopt, Form::discrete);
    model.f_scale_ = sa;
    model.g_scale_ = sb;
    return model;
}

SpectralModel make_exp_ratio() {
    auto h1 = [](double p, double q) {
        if (q <= 0) return 0.0;
        double e = p / q;
        if (e > 745.0) return 0.0;
        return std::exp(-e) / (2.0 * p * q * q * q);
    };
    double half_mass = integrate_unit([&](double s, double oms) { return h1(s, oms); }, 0.5, 1.0, 1e-10);
    double c = 1.0 / (2.0 * half_mass);

    DensityPart d;
    d.h = [c, h1](double s, double oms) { return c * (s >= 0.5 ? h1(s, oms) : h1(oms, s)); };
    d.f = [](double s, double) { return 2.0 * s; };
    d.g = [](double, double oms) { return 2.0 * oms; };
    SpectralModel model({}, std::move(d), Form::exp_ratio);
    model.calibration_ = c;
    return model;
}

SpectralModel swapped(const SpectralModel& m) {
    std::vector<Atom> atoms;
    atoms.reserve(m.atoms().size());
    for (auto it = m.atoms().rbegin(); it != m.atoms().rend(); ++it)
        atoms.push_back({1.0 - it->s, it->g, it->f, it->mass});
    std::optional<DensityPart> d;
    if (const DensityPart* src = m.density()) {
        d.emplace();
        d->h = [h = src->h](double s, double oms) { return h(oms, s); };
        d->f = [g = src->g](double s, double oms) { return g(oms, s); };
        d->g = [f = src->f](double s, double oms) { return f(oms, s); };
    }
    SpectralModel out(std::move(atoms), std::move(d), m.form(), m.param());
    out.calibration_ = m.calibration();
    out.f_scale_ = m.g_scale();
    out.g_scale_ = m.f_scale();
    return out;
}

std::string SpectralModel::id() const { return to_json(*this).dump(); }

nlohmann::json to_json(const SpectralModel& m) {
    using nlohmann::json;
    switch (m.form()) {
        case Form::independent:
            return json{{"form", "independent"}};
        case Form::rho:
            return json{{"form", "rho"}, {"rho", m.param()}};
        case Form::logistic:
            return json{{"form", "logistic"}, {"alpha", m.param()}};
        case Form::mixed:
            return json{{"form", "mixed"}, {"k", m.param()}};
        case Form::exp_ratio:
            return json{{"form", "exp_ratio"}};
        case Form::discrete: {
            std::vector<double> a, b;
            for (const auto& at : m.atoms()) {
                a.push_back(at.f * m.f_scale());
                b.push_back(at.g * m.g_scale());
            }
            return json{{"form", "discrete"}, {"a", a}, {"b", b}};
        }
        case Form::custom:
            break;
    }
    throw std::invalid_argument("custom model has no JSON form");
}

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (!j.contains(k)) throw std::invalid_argument(std::string("missing key: ") + k);
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw std::invalid_argument("unknown key: " + it.key());
    }
}

double number_at(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw std::invalid_argument(std::string(key) + " must be a number");
    return v.get<double>();
}

std::vector<double> number_array_at(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_array()) throw std::invalid_argument(std::string(key) + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) throw std::invalid_argument(std::string(key) + " must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

SpectralModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("model must be a JSON object");
    if (!j.contains("form") || !j.at("form").is_string())
        throw std::invalid_argument("model needs a \"form\" string");
    std::string form = j.at("form").get<std::string>();
    if (form == "independent") {
        require_keys(j, {"form"});
        return make_independent();
    }
    if (form == "rho") {
        require_keys(j, {"form", "rho"});
        return make_rho(number_at(j, "rho"));
    }
    if (form == "logistic") {
        require_keys(j, {"form", "alpha"});
        return make_logistic(number_at(j, "alpha"));
    }
    if (form == "mixed") {
        require_keys(j, {"form", "k"});
        return make_mixed(number_at(j, "k"));
    }
    if (form == "exp_ratio") {
        require_keys(j, {"form"});
        return make_exp_ratio();
    }
    if (form == "discrete") {
        require_keys(j, {"form", "a", "b"});
        auto a = number_array_at(j, "a");
        auto b = number_array_at(j, "b");
        return make_discrete(a, b);
    }
    throw std::invalid_argument("unknown form: " + form);
}

SpectralModel parse_model(const std::string& text) {
    return model_from_json(nlohmann::json::parse(text));
}

CheckReport check_model(const SpectralModel& m, int grid_n) {
    CheckReport r;
    for (const auto& a : m.atoms()) {
        r.int_f += a.fw();
        r.int_g += a.gw();
    }
    if (const DensityPart* d = m.density()) {
        r.int_f += integrate_unit([&](double s, double oms) { return d->f(s, oms) * d->h(s, oms); },
                                  0.0, 1.0, 1e-10);
        r.int_g += integrate_unit([&](double s, double oms) { return d->g(s, oms) * d->h(s, oms); },
                                  0.0, 1.0, 1e-10);
    }
    r.ratio_nondecreasing = ratio_order_ok(m.atoms(), m.density(), grid_n);
    r.standardized = std::abs(r.int_f - 1.0) <= 1e-8 && std::abs(r.int_g - 1.0) <= 1e-8;
    return r;
}

}  // namespace frechet
