#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "sturmspec/error.hpp"
#include "sturmspec/numerics.hpp"
#include "sturmspec/problem.hpp"
#include "sturmspec/shoot.hpp"
#include "sturmspec/spectrum.hpp"

namespace sturmspec {

/**
 * @brief Ground state data: lambda0 and y0 = f(.; lambda0) > 0 on a uniform grid.
 *
 * phi = p y0'/y0 is kept as a Hermite table whose slopes come from the
 * Riccati identity phi' = q - lambda0 r - phi^2/p, so no sample is ever
 * differenced.
 */
struct TransformContext {
    double lambda0 = 0.0;
    std::vector<double> x;
    std::vector<double> y0;   // f(x; lambda0), f(0) = 1
    std::vector<double> py0;  // p y0'
    std::shared_ptr<const num::Hermite> phi_table;
    std::shared_ptr<const SLProblem> problem;

    double h() const { return x[1] - x[0]; }
    double phi(double s) const { return (*phi_table)(s); }
    double dphi(double s) const {
        double v = phi(s);
        return problem->q(s) - lambda0 * problem->r(s) - v * v / problem->p(s);
    }
    double u(double s) const { return phi(s) / problem->p(s); }  // y0'/y0
};

/** @brief Sample the ground state; y0 must stay positive. */
inline TransformContext make_context(const SLProblem& prob, double lambda0, const SolverSettings& s = {},
                                     std::size_t n = 4097) {
    TransformContext ctx;
    ctx.lambda0 = lambda0;
    ctx.problem = std::make_shared<const SLProblem>(prob);
    ctx.x = uniform_grid(prob.L(), n);
    auto smp = eigenfunction_samples(prob, lambda0, ctx.x, s);
    std::vector<double> phi(n), dphi(n);
    ctx.y0.resize(n);
    ctx.py0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(smp[i].f > 0))
            throw TransformError("ground function vanishes or changes sign at x=" + std::to_string(smp[i].x));
        ctx.y0[i] = smp[i].f;
        ctx.py0[i] = smp[i].pf;
        phi[i] = smp[i].pf / smp[i].f;
        double xi = ctx.x[i];
        dphi[i] = prob.q(xi) - lambda0 * prob.r(xi) - phi[i] * phi[i] / prob.p(xi);
    }
    ctx.phi_table = std::make_shared<const num::Hermite>(ctx.x, phi, dphi);
    return ctx;
}

struct CrumDarbouxResult {
    std::vector<double> x, g, dg;
};

/** @brief g = p f' - f p y0'/y0, with dg/dx = (lambda0 - lambda) r f - (y0'/y0) g. */
inline CrumDarbouxResult crum_darboux(const TransformContext& ctx, const SLProblem& prob, double lambda,
                                      const std::vector<Sample>& f) {
    CrumDarbouxResult out;
    for (const auto& v : f) {
        double ph = ctx.phi(v.x);
        if (!std::isfinite(ph)) throw TransformError("ground function vanishes near x=" + std::to_string(v.x));
        double g = v.pf - v.f * ph;
        double dg = (ctx.lambda0 - lambda) * prob.r(v.x) * v.f - (ph / prob.p(v.x)) * g;
        out.x.push_back(v.x);
        out.g.push_back(g);
        out.dg.push_back(dg);
    }
    return out;
}

/** @brief (p~ g')' - (q~ - lambda r~) g = 0, g' = -alpha~ g at 0, g' = -beta~ g at L. */
struct RegularSLP {
    CoefficientSet c;  // p~, q~, r~
    double alpha = 0.0, beta = 0.0;
};

/**
 * @brief Regular problem satisfied by the transformed functions:
 * p~ = 1/r, r~ = 1/p, q~ = lambda0/p - (u/r)' + u^2/r with u = y0'/y0,
 * alpha~ = r(0)/alpha1 + u(0), beta~ = r(L)/beta1 + u(L).
 */
inline RegularSLP build_regular_slp(const TransformContext& ctx, const SLProblem& prob) {
    const auto& bc = prob.boundary;
    if (bc.alpha1 == 0.0 || bc.beta1 == 0.0) throw RegimeError("the transform needs alpha1 != 0 and beta1 != 0");
    auto cx = std::make_shared<const TransformContext>(ctx);
    const double L = prob.L();
    const double hd = 1e-3 * L;
    Fn pr = [cx](double s) { return cx->problem->p(s) * cx->problem->r(s); };
    RegularSLP reg;
    reg.c.L = L;
    reg.c.smoothness = "derived";
    reg.c.p = [cx](double s) { return 1.0 / cx->problem->r(s); };
    reg.c.r = [cx](double s) { return 1.0 / cx->problem->p(s); };
    reg.c.q = [cx, pr, hd, L](double s) {
        const auto& P = *cx->problem;
        double p = P.p(s), r = P.r(s);
        double ph = cx->phi(s), dph = cx->dphi(s);
        double prv = p * r;
        double dpr = num::derivative(pr, s, hd, 0.0, L);
        double u = ph / p;
        double d_ur = dph / prv - ph * dpr / (prv * prv);
        return cx->lambda0 / p - d_ur + u * u / r;
    };
    reg.alpha = prob.r(0.0) / bc.alpha1 + ctx.u(0.0);
    reg.beta = prob.r(L) / bc.beta1 + ctx.u(L);
    return reg;
}

namespace detail {
inline double regular_target(const RegularSLP& reg, int m) {
    return std::atan2(1.0, -reg.beta * reg.c.p(reg.c.L)) + m * std::numbers::pi;
}
inline double regular_phase(const RegularSLP& reg, double lam, const SolverSettings& s) {
    return shoot_from(reg.c, lam, 1.0, -reg.alpha * reg.c.p(0.0), s).phase_end;
}
}  // namespace detail

/** @brief The first m_max+1 eigenvalues of a regular Robin problem (index m has m zeros). */
inline std::vector<double> regular_spectrum(const RegularSLP& reg, int m_max, const SolverSettings& s = {}) {
    auto phase = [&](double lam) { return detail::regular_phase(reg, lam, s); };
    double lo = -1.0;
    for (int k = 0; phase(lo) >= detail::regular_target(reg, 0); ++k) {
        lo *= 2.0;
        if (k > 60) throw SearchError("regular spectrum not bounded below");
    }
    std::vector<double> out;
    double step = 1.0;
    for (int m = 0; m <= m_max; ++m) {
        double ev = detail::phase_root_up(phase, detail::regular_target(reg, m), lo, step, s);
        if (!out.empty()) step = std::max(0.5 * (ev - out.back()), 1e-3);
        out.push_back(ev);
        lo = ev;
    }
    return out;
}

inline std::vector<Sample> regular_eigenfunction(const RegularSLP& reg, double lambda, const std::vector<double>& grid,
                                                 const SolverSettings& s = {}) {
    return samples_from(reg.c, lambda, 1.0, -reg.alpha * reg.c.p(0.0), grid, s);
}

/** @brief How well transformed samples satisfy the regular problem. */
struct RegularResidual {
    double ode = 0.0;         // max |(p~g')' - (q~ - lambda r~) g| / scale
    double derivative = 0.0;  // finite-difference g' vs the first-derivative identity
    double robin_left = 0.0, robin_right = 0.0;
    double worst() const { return std::max({ode, derivative, robin_left, robin_right}); }
};

/** @brief Residual of g (on a uniform grid, with its identity derivative) against reg at lambda. */
inline RegularResidual regular_residual(const RegularSLP& reg, const CrumDarbouxResult& cd, double lambda) {
    const std::size_t n = cd.x.size();
    const double h = cd.x[1] - cd.x[0];
    std::vector<double> flux(n);
    for (std::size_t i = 0; i < n; ++i) flux[i] = reg.c.p(cd.x[i]) * cd.dg[i];
    auto dflux = num::derivative_samples(flux, h);
    auto dg_fd = num::derivative_samples(cd.g, h);
    RegularResidual rr;
    double scale = 0.0, gscale = 0.0, res = 0.0, dres = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = cd.x[i];
        double qg = reg.c.q(x) * cd.g[i], lg = lambda * reg.c.r(x) * cd.g[i];
        scale = std::max({scale, std::fabs(dflux[i]), std::fabs(qg), std::fabs(lg)});
        gscale = std::max(gscale, std::fabs(cd.dg[i]));
        res = std::max(res, std::fabs(dflux[i] - (qg - lg)));
        dres = std::max(dres, std::fabs(dg_fd[i] - cd.dg[i]));
    }
    rr.ode = res / scale;
    rr.derivative = dres / gscale;
    auto robin = [](double dg, double a, double g) {
        double den = std::fabs(dg) + std::fabs(a * g);
        return den == 0.0 ? 0.0 : std::fabs(dg + a * g) / den;
    };
    rr.robin_left = robin(cd.dg.front(), reg.alpha, cd.g.front());
    rr.robin_right = robin(cd.dg.back(), reg.beta, cd.g.back());
    return rr;
}

/**
 * @brief Back from the regular problem: w = y0 (C + int_0^x g/(y0 p)),
 * p w' = phi w + g, with C chosen so the left eigenparameter row holds.
 * g must be sampled on ctx.x.
 */
inline std::vector<Sample> inverse_map(double lambda_t, const std::vector<double>& g, const TransformContext& ctx,
                                       const SLProblem& prob) {
    if (lambda_t == ctx.lambda0) throw RegimeError("inverse map undefined at lambda = lambda0");
    if (prob.boundary.alpha1 == 0.0) throw RegimeError("inverse map needs alpha1 != 0");
    const std::size_t n = ctx.x.size();
    if (g.size() != n) throw DomainError("g must be sampled on the context grid");
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) integrand[i] = g[i] / (ctx.y0[i] * prob.p(ctx.x[i]));
    auto I = num::cumulative_simpson(integrand, ctx.h());
    // w(0) = g(0) / (alpha1 (lambda~ - lambda0))
    double C = g[0] / (prob.boundary.alpha1 * (lambda_t - ctx.lambda0) * ctx.y0[0]);
    std::vector<Sample> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double wi = ctx.y0[i] * (C + I[i]);
        w[i] = Sample{ctx.x[i], wi, ctx.phi(ctx.x[i]) * wi + g[i]};
    }
    return w;
}

/** @brief Original-problem residuals of w: ODE (finite differences) and both boundary rows. */
struct OriginalResidual {
    double ode = 0.0, left = 0.0, right = 0.0;
    double worst() const { return std::max({ode, left, right}); }
};

inline OriginalResidual original_residual(const SLProblem& prob, double lambda, const std::vector<Sample>& w) {
    const std::size_t n = w.size();
    const double h = w[1].x - w[0].x;
    std::vector<double> flux(n);
    for (std::size_t i = 0; i < n; ++i) flux[i] = w[i].pf;
    auto d = num::derivative_samples(flux, h);
    OriginalResidual r;
    double scale = 0.0, res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = w[i].x;
        double rhs = (prob.q(x) - lambda * prob.r(x)) * w[i].f;
        scale = std::max({scale, std::fabs(d[i]), std::fabs(prob.q(x) * w[i].f), std::fabs(lambda * prob.r(x) * w[i].f)});
        res = std::max(res, std::fabs(d[i] - rhs));
    }
    r.ode = res / scale;
    const auto& bc = prob.boundary;
    auto row = [](double pf, double c, double f) {
        double den = std::fabs(pf) + std::fabs(c * f);
        return den == 0.0 ? 0.0 : std::fabs(pf - c * f) / den;
    };
    r.left = row(w.front().pf, bc.alpha1 * lambda + bc.alpha2, w.front().f);
    r.right = row(w.back().pf, bc.beta1 * lambda - bc.beta2, w.back().f);
    return r;
}

/**
 * @brief Liouville normal form z'' + (lambda - Q(t)) z = 0 on [0, t1] with
 * t = int sqrt(r~/p~), g = (p~ r~)^{-1/4} z.  Robin rows z' = -a z, z' = -b z.
 */
struct LiouvilleForm {
    double t1 = 0.0;
    std::vector<double> t, Q;
    double alpha = 0.0, beta = 0.0;
    CoefficientSet normal;  // p = 1, r = 1, q = Q(t) on [0, t1]
    bool well_conditioned = true;
};

inline LiouvilleForm liouville_normalize(const RegularSLP& reg, std::size_t n = 4097) {
    const double L = reg.c.L;
    const double hd = 1e-3 * L;
    auto pc = std::make_shared<CoefficientSet>(reg.c);
    Fn P = [pc](double x) { return std::sqrt(pc->r(x) / pc->p(x)); };
    Fn m = [pc](double x) { return std::pow(pc->p(x) * pc->r(x), 0.25); };
    Fn mt = [m, P, hd, L](double x) { return num::derivative(m, x, hd, 0.0, L) / P(x); };

    auto xs = uniform_grid(L, n);
    const double h = xs[1] - xs[0];
    LiouvilleForm lf;
    lf.t.assign(n, 0.0);
    lf.Q.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        lf.t[i + 1] = lf.t[i] + h / 6.0 * (P(xs[i]) + 4.0 * P(xs[i] + 0.5 * h) + P(xs[i + 1]));
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = xs[i];
        double mtt = num::derivative(mt, x, hd, 0.0, L) / P(x);
        lf.Q[i] = pc->q(x) / pc->r(x) + mtt / m(x);
        if (!std::isfinite(lf.Q[i])) lf.well_conditioned = false;
        worst_ratio = std::max(worst_ratio, std::fabs(mtt / m(x)));
    }
    lf.t1 = lf.t.back();
    // derivative ratios far above 1/h^2 mean the coefficients are too rough to trust
    if (worst_ratio > 1.0 / (h * h)) lf.well_conditioned = false;

    auto gl = [&](double x) { return -num::derivative(m, x, hd, 0.0, L) / m(x); };  // G'/G with G = 1/m
    lf.alpha = (reg.alpha + gl(0.0)) / P(0.0);
    lf.beta = (reg.beta + gl(L)) / P(L);

    auto table = std::make_shared<const num::Hermite>(lf.t, lf.Q, num::three_point_slopes(lf.t, lf.Q));
    lf.normal = CoefficientSet{[](double) { return 1.0; }, [table](double t) { return (*table)(t); },
                               [](double) { return 1.0; }, lf.t1, false, "tabulated"};
    return lf;
}

inline RegularSLP as_regular(const LiouvilleForm& lf) { return RegularSLP{lf.normal, lf.alpha, lf.beta}; }

// ---- verifiers ----

struct AsymptoticReport {
    std::vector<int> n;
    std::vector<double> rho;  // n |sqrt(lambda_n) - (n + offset) pi / L|
    double max_rho = 0.0;
    double slope = 0.0;
    bool ordered = true;  // lambda_n increasing in n
    bool bounded = false; // slope below threshold, max finite, ordered
};

/** @brief Residuals n |sqrt(lambda_n) - (n+offset) pi / L| over n in [n_lo, n_hi]. */
inline AsymptoticReport asymptotic_check(const std::vector<EigenvalueRecord>& spec, double L, int n_lo, int n_hi,
                                         int offset = 0, double slope_limit = 0.02) {
    AsymptoticReport rep;
    double prev = -std::numeric_limits<double>::infinity();
    for (int n = n_lo; n <= n_hi; ++n) {
        const auto* r = find_index(spec, BranchIndex::nonneg(n));
        if (!r) throw DomainError("spectrum lacks index " + std::to_string(n));
        if (!(r->lambda > 0)) throw DomainError("asymptotic check needs positive eigenvalues");
        if (!(r->lambda > prev)) rep.ordered = false;
        prev = r->lambda;
        rep.n.push_back(n);
        rep.rho.push_back(n * std::fabs(std::sqrt(r->lambda) - (n + offset) * std::numbers::pi / L));
    }
    for (double v : rep.rho) rep.max_rho = std::max(rep.max_rho, v);
    std::vector<double> nx(rep.n.begin(), rep.n.end());
    rep.slope = rep.n.size() > 1 ? num::ls_slope(nx, rep.rho) : 0.0;
    rep.bounded = rep.ordered && std::isfinite(rep.max_rho) && rep.slope < slope_limit;
    return rep;
}

struct SeparationReport {
    bool at_least_one = true;   // each gap of zeros_a holds >= 1 of zeros_b
    bool exactly_one = true;    // each gap of zeros_b holds exactly 1 of zeros_a
    bool clear_margins = true;  // no zero of one list within tol of the other
    std::vector<int> gap_counts_a, gap_counts_b;
    bool ok() const { return at_least_one && exactly_one && clear_margins; }
};

/** @brief Sturm separation between zeros of f_n (a) and f_{n+1} (b). */
inline SeparationReport separation_check(const std::vector<double>& zeros_a, const std::vector<double>& zeros_b,
                                         double tol = 1e-8) {
    SeparationReport rep;
    auto count_in = [](const std::vector<double>& z, double lo, double hi) {
        int c = 0;
        for (double v : z)
            if (v > lo && v < hi) ++c;
        return c;
    };
    for (std::size_t i = 1; i < zeros_a.size(); ++i) {
        int c = count_in(zeros_b, zeros_a[i - 1], zeros_a[i]);
        rep.gap_counts_a.push_back(c);
        if (c < 1) rep.at_least_one = false;
    }
    for (std::size_t i = 1; i < zeros_b.size(); ++i) {
        int c = count_in(zeros_a, zeros_b[i - 1], zeros_b[i]);
        rep.gap_counts_b.push_back(c);
        if (c != 1) rep.exactly_one = false;
    }
    for (double a : zeros_a)
        for (double b : zeros_b)
            if (std::fabs(a - b) <= tol) rep.clear_margins = false;
    return rep;
}

struct MonotonicityReport {
    std::vector<double> lambdas, values;
    int violations = 0;
    bool ok() const { return violations == 0 && !values.empty(); }
};

/** @brief h1 at n_probe interior points of a bounded branch; must strictly decrease. */
inline MonotonicityReport monotonicity_probe(const SLProblem& prob, const Branch& b, int n_probe,
                                             const SolverSettings& s = {}) {
    if (!b.bounded()) throw DomainError("monotonicity probe needs a bounded branch");
    MonotonicityReport rep;
    for (int j = 1; j <= n_probe; ++j) {
        double lam = b.lo + (b.hi - b.lo) * double(j) / double(n_probe + 1);
        rep.lambdas.push_back(lam);
        rep.values.push_back(h1(prob, lam, s));
    }
    for (std::size_t i = 1; i < rep.values.size(); ++i)
        if (!(rep.values[i] < rep.values[i - 1])) ++rep.violations;
    return rep;
}

}  // namespace sturmspec
