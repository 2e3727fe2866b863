#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/quadrature.hpp"

namespace frechet {

// Point mass of the spectral measure: mu({s}) = mass, with the two spectral
// functions taking values f and g there.  Every distributional quantity
// depends on an atom only through the integrated weights f*mass, g*mass and
// the ratio f/g, with the convention 1/0 = +inf (g = 0, f > 0).
struct Atom {
    double s = 0;
    double f = 0;
    double g = 0;
    double mass = 0;

    double fw() const { return f * mass; }
    double gw() const { return g * mass; }
    double ratio() const {
        if (g > 0) return f / g;
        return std::numeric_limits<double>::infinity();
    }
};

// Absolutely continuous part of the spectral measure on (0,1): mu has density
// h there, and the spectral functions are f and g.  All three are evaluated
// as (s, 1-s) so that endpoint singularities stay accurate; see quadrature.hpp.
struct DensityPart {
    UnitIntegrand h;
    UnitIntegrand f;
    UnitIntegrand g;
};

enum class Form { independent, rho, logistic, mixed, discrete, exp_ratio, custom };

// Bivariate 1-Frechet spectral model.  Invariants enforced here and relied on
// everywhere else:
//   - atoms sorted by location, locations strictly increasing in [0,1],
//     masses > 0, f,g >= 0 and not both zero, atom ratios nondecreasing;
//   - if a density is present, f/g is nondecreasing across its support and
//     consistent with the atom ordering (checked on a 1000-point grid);
//   - standardization: integral of f and of g against mu equals 1 (checked by
//     the constructors of the built-in families; check_model verifies it for
//     anything custom).
class SpectralModel {
  public:
    SpectralModel(std::vector<Atom> atoms, std::optional<DensityPart> density,
                  Form form = Form::custom, double param = 0.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const DensityPart* density() const { return density_ ? &*density_ : nullptr; }
    Form form() const { return form_; }
    double param() const { return param_; }

    // Calibration constant of the density (1 unless the family has one).
    double calibration() const { return calibration_; }

    // Scales divided out by make_discrete; 1 for everything else.
    double f_scale() const { return f_scale_; }
    double g_scale() const { return g_scale_; }

    // Canonical JSON identifier of the model; throws for Form::custom.
    std::string id() const;

  private:
    std::vector<Atom> atoms_;
    std::optional<DensityPart> density_;
    Form form_;
    double param_;
    double calibration_ = 1.0;
    double f_scale_ = 1.0;
    double g_scale_ = 1.0;

    friend SpectralModel make_discrete(std::span<const double>, std::span<const double>);
    friend SpectralModel make_exp_ratio();
    friend SpectralModel swapped(const SpectralModel&);
};

// Two independent unit-Frechet coordinates: atoms at s = 0 and s = 1 with
// mass 1/2 each and spectral values (0,2), (2,0).
SpectralModel make_independent();

// Three-atom family: mass rho/2 at s = 0 and s = 1 (values (0,2), (2,0)) and
// mass 1-rho at s = 1/2 (values (1,1)).  rho = 1 is independence; rho = 0 is
// full dependence X = Y.  Zero-mass atoms are dropped.  rho in [0,1].
SpectralModel make_rho(double rho);

// Lebesgue control measure on [0,1] with
//   f(s) = (alpha-1) s^(alpha-1) (1-s^alpha)^(-1/alpha),
//   g(s) = (alpha-1) s^(alpha-2),
// giving the joint law exp(-(x^-alpha + y^-alpha)^(1/alpha)).  alpha > 1.
SpectralModel make_logistic(double alpha);

// Spectral probability measure k*Lebesgue + (1-k)/2 (delta_0 + delta_1) in
// the standard form f = 2s, g = 2(1-s), giving the joint exponent
// 1/x + 1/y - k/(x+y).  k in [0,1].
SpectralModel make_mixed(double k);

// Finite max-construction X = max_i a_i Z_i, Y = max_i b_i Z_i with iid
// unit-Frechet Z_i.  Entries are standardized to sum to one (original sums
// recorded as f_scale/g_scale); pairs are sorted by ratio a_i/b_i, which must
// be strictly increasing after sorting (ties rejected, merge them upstream).
SpectralModel make_discrete(std::span<const double> a, std::span<const double> b);

// Standard-form density model whose ratio tail decays like C*exp(-t): the
// spectral probability density is h1(s) = C/(2 s (1-s)^3) exp(-s/(1-s)) on
// [1/2, 1] and its mirror image h1(1-s) on [0, 1/2].  The calibration C
// making the total mass one is computed by quadrature once per construction.
SpectralModel make_exp_ratio();

// The model of (Y, X): atoms reflected to 1-s with f and g exchanged, density
// functions reflected likewise.  Involutive on atoms; family tags survive
// because every built-in family is exchangeable except discrete, whose
// swapped form is make_discrete(b, a) up to atom relabeling.
SpectralModel swapped(const SpectralModel& m);

// JSON round-trip for the built-in families, e.g. {"form":"logistic","alpha":2}.
nlohmann::json to_json(const SpectralModel& m);
SpectralModel model_from_json(const nlohmann::json& j);
SpectralModel parse_model(const std::string& text);

struct CheckReport {
    double int_f = 0;          // integral of f against mu
    double int_g = 0;
    bool ratio_nondecreasing = true;
    bool standardized = true;  // both integrals within 1e-8 of 1
};

// Verifies standardization by quadrature (tolerance 1e-10, reported at 1e-8)
// and ratio monotonicity on a grid of grid_n density points merged with the
// atoms.
CheckReport check_model(const SpectralModel& m, int grid_n = 1000);

}  // namespace frechet
