#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>

#include "sturmspec/error.hpp"

namespace sturmspec {

using Fn = std::function<double(double)>;

/** @brief p, q, r on [0, L] for (p f')' - (q - lambda r) f = 0. */
struct CoefficientSet {
    Fn p, q, r;
    double L = 1.0;
    bool increasing_p = false;  // checked on the validation grid when set
    std::string smoothness = "C1";
};

/**
 * @brief Boundary data, weighted convention:
 *   p(0) f'(0) = (alpha1 lambda + alpha2) f(0)
 *   p(L) f'(L) = (beta1 lambda - beta2) f(L)
 */
struct BoundaryParams {
    double alpha1 = 0.0;
    double alpha2 = 1.0;
    double beta1 = 0.0;
    double beta2 = 1.0;
};

/** @brief Rows written as f'(0) = (a1 l + a2) f(0), f'(L) = (b1 l - b2) f(L), in the weighted form. */
inline BoundaryParams from_unweighted(const BoundaryParams& bc, double p0, double pL) {
    return BoundaryParams{bc.alpha1 * p0, bc.alpha2 * p0, bc.beta1 * pL, bc.beta2 * pL};
}

struct SLProblem {
    CoefficientSet coefficients;
    BoundaryParams boundary;

    double L() const { return coefficients.L; }
    double p(double x) const { return coefficients.p(x); }
    double q(double x) const { return coefficients.q(x); }
    double r(double x) const { return coefficients.r(x); }
};

struct SolverSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double root_tol = 1e-10;
    std::size_t max_steps = 200000;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0) || !(root_tol > 0))
            throw ValidationError("solver tolerances must be strictly positive");
        if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
    }
};

// Knobs for make_problem.  The constant-viscosity Hele-Shaw model has r = 0,
// which is not a Sturm-Liouville weight but is still a perfectly good IVP;
// allow_zero_weight lets the closed-form cross-checks shoot it.
struct ValidationOptions {
    std::size_t grid_points = 257;
    bool allow_zero_weight = false;
    bool check_boundary_signs = true;  // alpha2 > 0, beta2 > 0
};

namespace detail {
inline std::string fmt_sample(const char* name, double x, double v) {
    std::ostringstream os;
    os.precision(10);
    os << name << "(x=" << x << ") = " << v;
    return os.str();
}
}  // namespace detail

/** @brief Validate coefficients on a uniform grid and bundle with the boundary data. */
inline SLProblem make_problem(CoefficientSet coeffs, BoundaryParams bc, ValidationOptions opt = {}) {
    if (!(coeffs.L > 0) || !std::isfinite(coeffs.L)) throw DomainError("domain length L must be positive");
    if (!coeffs.p || !coeffs.q || !coeffs.r) throw ValidationError("coefficient function missing");
    if (opt.grid_points < 256) opt.grid_points = 256;
    if (opt.check_boundary_signs) {
        if (!(bc.alpha2 > 0)) throw ValidationError("alpha2 must be positive");
        if (!(bc.beta2 > 0)) throw ValidationError("beta2 must be positive");
    }
    if (!std::isfinite(bc.alpha1) || !std::isfinite(bc.beta1))
        throw ValidationError("alpha1/beta1 must be finite");

    std::size_t n = opt.grid_points;
    double prev_p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = coeffs.L * double(i) / double(n - 1);
        double pv = coeffs.p(x), qv = coeffs.q(x), rv = coeffs.r(x);
        if (!std::isfinite(pv) || !std::isfinite(qv) || !std::isfinite(rv))
            throw EvaluationError("non-finite coefficient at x=" + std::to_string(x));
        if (!(pv > 0)) throw ValidationError(detail::fmt_sample("p", x, pv) + " is not positive");
        if (!(qv > 0)) throw ValidationError(detail::fmt_sample("q", x, qv) + " is not positive");
        if (opt.allow_zero_weight ? !(rv >= 0) : !(rv > 0))
            throw ValidationError(detail::fmt_sample("r", x, rv) + " is not positive");
        if (coeffs.increasing_p && i > 0 && pv < prev_p)
            throw ValidationError(detail::fmt_sample("p", x, pv) + " decreases");
        prev_p = pv;
    }
    return SLProblem{std::move(coeffs), bc};
}

/** @brief Constant coefficients on [0, L]. */
inline CoefficientSet constant_coefficients(double p, double q, double r, double L) {
    return CoefficientSet{[p](double) { return p; }, [q](double) { return q; },
                          [r](double) { return r; }, L, true, "analytic"};
}

}  // namespace sturmspec
