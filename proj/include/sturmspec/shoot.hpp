#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sturmspec/error.hpp"
#include "sturmspec/ode/dormand_prince.hpp"
#include "sturmspec/problem.hpp"

namespace sturmspec {

/**
 * @brief Terminal data of the initial value problem at one lambda.
 *
 * f_end and pfprime_end are stored with the running scale divided out;
 * the true values are f_end * exp(log_scale).  Ratios and signs (all the
 * spectral code needs) are unaffected.
 */
struct ShotResult {
    double lambda = 0.0;
    double f_end = 0.0;
    double pfprime_end = 0.0;
    double log_scale = 0.0;
    int zero_count = 0;
    std::vector<double> zeros;
    double phase_end = 0.0;
    double est_error = 0.0;  // same units as f_end
    std::size_t steps = 0;
};

struct Sample {
    double x, f, pf;
};

namespace detail {

// Prufer state: (f, p f', theta) with f = rho sin(theta), p f' = rho cos(theta).
using PState = std::array<double, 3>;

// Integrate from 0 to L with the given initial pair.  When grid/out are set,
// steps land on every grid point and the samples are the step values.
inline ShotResult run_phase(const CoefficientSet& c, double lambda, double f0, double pf0,
                            const SolverSettings& s, const std::vector<double>* grid = nullptr,
                            std::vector<Sample>* out = nullptr) {
    s.validate();
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
    const double L = c.L;
    const double pi = std::numbers::pi;

    auto rhs = [&c, lambda](double x, const PState& y) {
        double p = c.p(x);
        double w = c.q(x) - lambda * c.r(x);
        double sn = std::sin(y[2]), cs = std::cos(y[2]);
        return PState{y[1] / p, w * y[0], cs * cs / p - w * sn * sn};
    };

    using DP = ode::DormandPrince<3>;
    DP::Options opt;
    opt.rel_tol = s.rel_tol;
    opt.abs_tol = s.abs_tol;
    opt.max_steps = s.max_steps;
    opt.scale = [&s](const PState& a, const PState& b) {
        double ra = std::hypot(a[0], a[1]), rb = std::hypot(b[0], b[1]);
        double sc = s.abs_tol + s.rel_tol * std::max(ra, rb);
        // the angle only has to be good enough to unwrap atan2
        double st = s.abs_tol + 1e-3 * std::sqrt(s.rel_tol) * std::max(1.0, std::fabs(b[2]));
        return PState{sc, sc, st};
    };
    opt.accept = [pi](const PState& a, const PState& b) { return std::fabs(b[2] - a[2]) <= 0.5 * pi; };

    double theta0 = std::atan2(f0, pf0);
    DP dp(rhs, 0.0, PState{f0, pf0, theta0}, opt);

    ShotResult res;
    res.lambda = lambda;
    double log_scale = 0.0;
    double rel_err = 0.0;
    std::size_t gi = 0;
    const double ln2 = std::numbers::ln2;

    if (grid) {
        double last = -1.0;
        for (double xg : *grid) {
            if (xg < 0.0 || xg > L) throw DomainError("sample point outside [0,L]");
            if (xg < last) throw DomainError("sample grid must be sorted");
            last = xg;
        }
        out->clear();
        out->reserve(grid->size());
        while (gi < grid->size() && (*grid)[gi] == 0.0) {
            out->push_back(Sample{0.0, f0, pf0});
            ++gi;
        }
    }

    for (;;) {
        // when sampling, land steps on the grid: the interpolant is only 4th order
        double stop = L;
        if (grid) {
            while (gi < grid->size() && (*grid)[gi] <= dp.x()) {
                if ((*grid)[gi] == dp.x()) {
                    double sc = std::exp(log_scale);
                    out->push_back(Sample{dp.x(), dp.y()[0] * sc, dp.y()[1] * sc});
                }
                ++gi;
            }
            if (gi < grid->size()) stop = (*grid)[gi];
        }
        auto st = dp.step_toward(stop);
        if (st == ode::StepStatus::Finished && stop < L) continue;
        if (st == ode::StepStatus::Finished) break;
        if (st != ode::StepStatus::Accepted)
            throw IntegrationError("integration stalled at x=" + std::to_string(dp.x()) +
                                       " (lambda=" + std::to_string(lambda) + ")",
                                   dp.x());
        const PState& y = dp.y();
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]))
            throw EvaluationError("non-finite state at x=" + std::to_string(dp.x()));

        // snap the integrated angle onto the atan2 representative
        double ta = std::atan2(y[0], y[1]);
        double th = ta + 2.0 * pi * std::round((y[2] - ta) / (2.0 * pi));
        dp.nudge(2, th);

        double th_prev = dp.y_prev()[2];
        if (std::floor(th / pi) > std::floor(th_prev / pi)) {
            // a sign change of f inside this step; refine on the interpolant
            double a = dp.x_prev(), b = dp.x();
            double fa = dp.y_prev()[0];
            if (fa == 0.0) {
                b = a;
            } else {
                for (int it = 0; it < 200 && b - a > s.root_tol * std::max(1.0, L) * 1e-2; ++it) {
                    double m = 0.5 * (a + b);
                    if (m == a || m == b) break;
                    double fm = dp.dense(m)[0];
                    if ((fm > 0) == (fa > 0) && fm != 0.0) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
            }
            double z = 0.5 * (a + b);
            if (z > 0.0 && z < L - s.root_tol * L) res.zeros.push_back(z);
        }

        double rho = std::hypot(y[0], y[1]);
        const auto& ev = dp.last_error_vector();
        rel_err += std::hypot(ev[0], ev[1]) / rho;

        // keep rho near 1 so relative error control stays meaningful
        if (rho > 16.0 || rho < 1.0 / 16.0) {
            int e = std::ilogb(rho);
            double fac = std::ldexp(1.0, -e);
            dp.rescale(PState{fac, fac, 1.0});
            log_scale += e * ln2;
        }
    }

    const PState& y = dp.y();
    res.f_end = y[0];
    res.pfprime_end = y[1];
    res.phase_end = y[2];
    res.log_scale = log_scale;
    res.zero_count = int(res.zeros.size());
    res.est_error = rel_err * std::hypot(y[0], y[1]);
    res.steps = dp.steps();
    return res;
}

}  // namespace detail

/** @brief Integrate f(0)=1, p(0)f'(0)=alpha1*lambda+alpha2 across [0,L]. */
inline ShotResult shoot(const SLProblem& prob, double lambda, const SolverSettings& s = {}) {
    const auto& bc = prob.boundary;
    return detail::run_phase(prob.coefficients, lambda, 1.0, bc.alpha1 * lambda + bc.alpha2, s);
}

/** @brief Same IVP with an arbitrary starting pair (f(0), p(0)f'(0)). */
inline ShotResult shoot_from(const CoefficientSet& c, double lambda, double f0, double pf0,
                             const SolverSettings& s = {}) {
    return detail::run_phase(c, lambda, f0, pf0, s);
}

/** @brief Normalized solution sampled at a sorted grid inside [0,L]. */
inline std::vector<Sample> eigenfunction_samples(const SLProblem& prob, double lambda,
                                                 const std::vector<double>& grid,
                                                 const SolverSettings& s = {}) {
    std::vector<Sample> out;
    const auto& bc = prob.boundary;
    detail::run_phase(prob.coefficients, lambda, 1.0, bc.alpha1 * lambda + bc.alpha2, s, &grid, &out);
    return out;
}

inline std::vector<Sample> samples_from(const CoefficientSet& c, double lambda, double f0, double pf0,
                                        const std::vector<double>& grid, const SolverSettings& s = {}) {
    std::vector<Sample> out;
    detail::run_phase(c, lambda, f0, pf0, s, &grid, &out);
    return out;
}

inline int count_zeros(const SLProblem& prob, double lambda, const SolverSettings& s = {}) {
    return shoot(prob, lambda, s).zero_count;
}

/** @brief Uniform grid of n points over [0, L] with exact endpoints. */
inline std::vector<double> uniform_grid(double L, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = L * double(i) / double(n - 1);
    if (n > 0) g.back() = L;
    return g;
}

}  // namespace sturmspec
