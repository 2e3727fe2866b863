#pragma once

#include <functional>
#include <stdexcept>

namespace frechet {

// Raised when the adaptive refinement budget is exhausted with the error
// estimate still far above the requested tolerance.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrand over a subinterval of [0, 1].  Receives both s and 1-s; the
// second argument is computed without cancellation, so integrands with
// endpoint singularities at s = 1 can evaluate through log1p/expm1 on it
// instead of forming 1-s themselves.
using UnitIntegrand = std::function<double(double s, double one_minus_s)>;

// Adaptive Gauss-Kronrod 7/15 integration of F over (a, b) in [0, 1] to
// absolute tolerance abs_tol.  The interval is mapped through a cubic
// smoothstep whose derivative vanishes at both ends, which softens endpoint
// singularities of the form (s-a)^(-c) or (b-s)^(-c), c < 1, enough for the
// refinement queue to reach the tolerance.  Worst panels are bisected first;
// throws QuadratureError if the panel budget runs out while the total
// estimate is still above 50x the tolerance.
double integrate_unit(const UnitIntegrand& F, double a, double b, double abs_tol);

}
