#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sturmspec/error.hpp"
#include "sturmspec/problem.hpp"
#include "sturmspec/shoot.hpp"

namespace sturmspec {

enum class BranchKind { NegBeyond, NegZero, NonNeg };

/** @brief Eigenvalue / branch label: -1, -0 or a nonnegative n. */
struct BranchIndex {
    BranchKind kind = BranchKind::NonNeg;
    int n = 0;

    static BranchIndex neg_beyond() { return {BranchKind::NegBeyond, 1}; }
    static BranchIndex neg_zero() { return {BranchKind::NegZero, 0}; }
    static BranchIndex nonneg(int n) { return {BranchKind::NonNeg, n}; }

    // the number of interior zeros an eigenfunction with this label has
    int magnitude() const { return kind == BranchKind::NonNeg ? n : (kind == BranchKind::NegBeyond ? 1 : 0); }
    std::string label() const {
        switch (kind) {
            case BranchKind::NegBeyond: return "-1";
            case BranchKind::NegZero: return "-0";
            default: return std::to_string(n);
        }
    }
    // position in the natural ordering -1 < -0 < 0 < 1 < ...
    int order() const { return kind == BranchKind::NegBeyond ? -2 : (kind == BranchKind::NegZero ? -1 : n); }
    bool operator==(const BranchIndex& o) const { return kind == o.kind && n == o.n; }
};

struct Branch {
    BranchIndex index;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = 0.0;

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains(double x) const { return x > lo && x < hi; }
};

struct AuxSpectrum {
    std::optional<double> eta_neg0;
    std::vector<double> etas;      // eta_0 < eta_1 < ...
    std::vector<int> zero_counts;  // one per eta
    std::vector<double> residuals; // |f(L)| / |(f, pf')| at each eta
};

struct EigenvalueRecord {
    double lambda = 0.0;
    BranchIndex index;
    int zero_count = 0;
    Branch branch;
    double char_residual = 0.0;
    std::vector<double> zeros;
};

enum class RegimeCase { I, II, III };

inline const char* to_string(RegimeCase c) {
    switch (c) {
        case RegimeCase::I: return "I";
        case RegimeCase::II: return "II";
        default: return "III";
    }
}

/** @brief I: alpha1<0<beta1, III: beta1<0<alpha1, II otherwise. */
inline RegimeCase classify_case(const BoundaryParams& bc) {
    if (bc.alpha1 < 0 && bc.beta1 > 0) return RegimeCase::I;
    if (bc.alpha1 > 0 && bc.beta1 < 0) return RegimeCase::III;
    return RegimeCase::II;
}

namespace detail {

inline bool bisection_done(double a, double b, double tol) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) return true;  // no representable midpoint left
    return (b - a) <= tol * std::max(std::fabs(a), std::fabs(b));
}

// Smallest lambda above `lo` where phase(lambda) reaches target, given
// phase(lo) < target.  The phase at L only meets a multiple of pi at a
// terminal zero, and each target has a single such lambda, so any bracket
// with a sign change isolates it.
inline double phase_root_up(const std::function<double(double)>& phase, double target, double lo,
                            double step, const SolverSettings& s) {
    double hi = lo + step;
    int budget = 0;
    while (phase(hi) < target) {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if (++budget > 80 || !std::isfinite(hi))
            throw SearchError("no upper bracket for phase target " + std::to_string(target) +
                              " (reached lambda=" + std::to_string(lo) + ")");
    }
    while (!bisection_done(lo, hi, s.root_tol)) {
        double m = 0.5 * (lo + hi);
        if (phase(m) < target)
            lo = m;
        else
            hi = m;
    }
    return 0.5 * (lo + hi);
}

inline double terminal_residual(const ShotResult& r) {
    return std::fabs(r.f_end) / std::hypot(r.f_end, r.pfprime_end);
}

}  // namespace detail

/**
 * @brief Auxiliary eigenvalues: f(L; eta) = 0 with the left condition kept.
 *
 * eta_n carries n interior zeros, so it is the lambda where the phase at L
 * reaches (n+1) pi.  eta_-0 < 0 exists only when alpha1 > 0.
 */
inline AuxSpectrum aux_spectrum(const SLProblem& prob, int n_max, const SolverSettings& s = {}) {
    if (n_max < 0) throw DomainError("n_max must be nonnegative");
    const double pi = std::numbers::pi;
    auto phase = [&](double lam) { return shoot(prob, lam, s).phase_end; };
    AuxSpectrum aux;

    if (prob.boundary.alpha1 > 0) {
        // phase(L) > pi below eta_-0 (one zero), < pi on ]eta_-0, 0]
        double hi = 0.0, lo = -1.0;
        int budget = 0;
        while (phase(lo) <= pi) {
            hi = lo;
            lo *= 2.0;
            if (++budget > 60) throw SearchError("eta_-0 not bracketed above lambda=-1e18");
        }
        while (!detail::bisection_done(lo, hi, s.root_tol)) {
            double m = 0.5 * (lo + hi);
            if (phase(m) > pi)
                lo = m;
            else
                hi = m;
        }
        aux.eta_neg0 = 0.5 * (lo + hi);
    }

    double lo = 0.0, step = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        double target = (n + 1) * pi;
        double eta = detail::phase_root_up(phase, target, lo, step, s);
        if (!aux.etas.empty()) step = std::max(0.5 * (eta - aux.etas.back()), 1e-3);
        aux.etas.push_back(eta);
        lo = eta;
    }
    for (double eta : aux.etas) {
        auto r = shoot(prob, eta, s);
        aux.zero_counts.push_back(int(std::lround(r.phase_end / pi)) - 1);
        aux.residuals.push_back(detail::terminal_residual(r));
    }
    return aux;
}

/** @brief Dirichlet-Dirichlet eigenvalues of the same ODE (f(0)=f(L)=0). */
inline std::vector<double> dirichlet_spectrum(const CoefficientSet& c, int n_max, const SolverSettings& s = {}) {
    const double pi = std::numbers::pi;
    auto phase = [&](double lam) { return shoot_from(c, lam, 0.0, 1.0, s).phase_end; };
    // start below the spectrum: phase(L) < pi means no eigenvalue below lo
    double lo = -1.0;
    for (int k = 0; phase(lo) >= pi; ++k) {
        lo *= 2.0;
        if (k > 60) throw SearchError("Dirichlet spectrum not bounded below");
    }
    std::vector<double> out;
    double step = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        double ev = detail::phase_root_up(phase, (n + 1) * pi, lo, step, s);
        out.push_back(ev);
        lo = ev;
    }
    return out;
}

/** @brief B_-1, B_-0, B_0, ..., B_n_max from the auxiliary values. */
inline std::vector<Branch> branches(const AuxSpectrum& aux, int n_max) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Branch> out;
    if (aux.eta_neg0) {
        out.push_back({BranchIndex::neg_beyond(), -inf, *aux.eta_neg0});
        out.push_back({BranchIndex::neg_zero(), *aux.eta_neg0, 0.0});
    } else {
        out.push_back({BranchIndex::neg_zero(), -inf, 0.0});
    }
    int top = std::min<int>(n_max, int(aux.etas.size()) - 1);
    for (int n = 0; n <= top; ++n) {
        double lo = n == 0 ? 0.0 : aux.etas[n - 1];
        out.push_back({BranchIndex::nonneg(n), lo, aux.etas[n]});
    }
    return out;
}

/** @brief p(L) f'(L) / (lambda f(L)). */
inline double h1(const SLProblem& prob, double lambda, const SolverSettings& s = {}) {
    if (lambda == 0.0) throw PoleError("h1 has a pole at lambda = 0");
    auto r = shoot(prob, lambda, s);
    if (detail::terminal_residual(r) < 1e-14)
        throw PoleError("h1 has a pole: f(L) vanishes (auxiliary eigenvalue) at lambda=" + std::to_string(lambda));
    return r.pfprime_end / (lambda * r.f_end);
}

inline double h2(const BoundaryParams& bc, double lambda) {
    if (lambda == 0.0) throw PoleError("h2 has a pole at lambda = 0");
    return bc.beta1 - bc.beta2 / lambda;
}

// G in the shot's scaled units (sign and zeros are scale free)
inline double characteristic_scaled(const ShotResult& r, const BoundaryParams& bc) {
    return r.pfprime_end - (bc.beta1 * r.lambda - bc.beta2) * r.f_end;
}

inline double characteristic_residual(const ShotResult& r, const BoundaryParams& bc) {
    double den = std::fabs(r.pfprime_end) + std::fabs(bc.beta1 * r.lambda * r.f_end) + std::fabs(bc.beta2 * r.f_end);
    return std::fabs(characteristic_scaled(r, bc)) / den;
}

/** @brief G(lambda) = p(L) f'(L) - (beta1 lambda - beta2) f(L); smooth through every pole of h1. */
inline double characteristic(const SLProblem& prob, double lambda, const SolverSettings& s = {}) {
    auto r = shoot(prob, lambda, s);
    double g = characteristic_scaled(r, prob.boundary);
    return r.log_scale == 0.0 ? g : g * std::exp(r.log_scale);
}

namespace detail {

inline EigenvalueRecord make_record(const SLProblem& prob, const Branch& b, double lambda, const SolverSettings& s) {
    auto r = shoot(prob, lambda, s);
    EigenvalueRecord rec;
    rec.lambda = lambda;
    rec.index = b.index;
    rec.zero_count = r.zero_count;
    rec.branch = b;
    rec.char_residual = characteristic_residual(r, prob.boundary);
    rec.zeros = r.zeros;
    if (rec.zero_count != b.index.magnitude())
        throw SearchError("eigenvalue " + std::to_string(lambda) + " in branch " + b.index.label() + " has " +
                          std::to_string(rec.zero_count) + " interior zeros");
    return rec;
}

inline double bisect_sign(const std::function<int(double)>& sgn, double a, double b, int sa, const SolverSettings& s) {
    while (!bisection_done(a, b, s.root_tol)) {
        double m = 0.5 * (a + b);
        int sm = sgn(m);
        if (sm == 0) return m;
        if (sm == sa)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

inline int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace detail

/**
 * @brief The eigenvalue inside one branch, if any.
 *
 * Bounded branches hold exactly one root of G.  The unbounded negative
 * branch holds one iff beta1 < 0, found by doubling the search window.
 */
inline std::optional<EigenvalueRecord> find_in_branch(const SLProblem& prob, const Branch& b,
                                                      const SolverSettings& s = {}) {
    const auto& bc = prob.boundary;
    auto sgn = [&](double lam) { return detail::sign_of(characteristic_scaled(shoot(prob, lam, s), bc)); };

    if (b.bounded()) {
        double w = b.hi - b.lo;
        double d = 1e-6 * w;
        for (int k = 0; k <= 60; ++k, d *= 0.5) {
            double a = b.lo + d, c = b.hi - d;
            int sa = sgn(a), sc = sgn(c);
            if (sa == 0) return detail::make_record(prob, b, a, s);
            if (sc == 0) return detail::make_record(prob, b, c, s);
            if (sa != sc) {
                double lam = detail::bisect_sign(sgn, a, c, sa, s);
                return detail::make_record(prob, b, lam, s);
            }
        }
        throw SearchError("no sign change of the characteristic function in branch " + b.index.label() + " ]" +
                          std::to_string(b.lo) + ", " + std::to_string(b.hi) + "[");
    }

    if (bc.beta1 >= 0) return std::nullopt;
    int ref = sgn(b.hi);
    if (ref == 0) throw SearchError("characteristic vanishes at the branch end");
    double inner = b.hi, step = 1.0;
    for (;;) {
        double a = b.hi - step;
        if (a < -1e12)
            throw SearchError("lower bracket for branch " + b.index.label() + " not found above -1e12");
        int sa = sgn(a);
        if (sa == 0) return detail::make_record(prob, b, a, s);
        if (sa != ref) {
            double lam = detail::bisect_sign(sgn, a, inner, sa, s);
            return detail::make_record(prob, b, lam, s);
        }
        inner = a;
        step *= 2.0;
    }
}

/** @brief Every eigenvalue with index in {-1, -0, 0..n_max} that exists for the regime. */
inline std::vector<EigenvalueRecord> full_spectrum(const SLProblem& prob, int n_max, const SolverSettings& s = {},
                                                   AuxSpectrum* aux_out = nullptr) {
    auto aux = aux_spectrum(prob, n_max, s);
    std::vector<EigenvalueRecord> out;
    for (const auto& b : branches(aux, n_max)) {
        auto rec = find_in_branch(prob, b, s);
        if (rec) out.push_back(std::move(*rec));
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i].lambda > out[i - 1].lambda)) throw SearchError("eigenvalues out of order");
    if (aux_out) *aux_out = std::move(aux);
    return out;
}

inline const EigenvalueRecord* find_index(const std::vector<EigenvalueRecord>& spec, BranchIndex idx) {
    for (const auto& r : spec)
        if (r.index == idx) return &r;
    return nullptr;
}

struct InterlacingLink {
    std::string left, right;
    double a, b;
    bool ok;
    double margin;  // b - a
};

struct InterlacingReport {
    std::vector<InterlacingLink> links;
    bool all_ok = true;
};

/** @brief Check lambda_-1 < eta_-0 < lambda_-0 < 0 < lambda_0 < eta_0 < lambda_1 < ... */
inline InterlacingReport verify_interlacing(const std::vector<EigenvalueRecord>& spec, const AuxSpectrum& aux) {
    std::vector<std::pair<std::string, double>> chain;
    if (auto r = find_index(spec, BranchIndex::neg_beyond())) chain.push_back({"lambda_-1", r->lambda});
    if (aux.eta_neg0) chain.push_back({"eta_-0", *aux.eta_neg0});
    if (auto r = find_index(spec, BranchIndex::neg_zero())) chain.push_back({"lambda_-0", r->lambda});
    chain.push_back({"0", 0.0});
    int top = -1;
    for (const auto& r : spec)
        if (r.index.kind == BranchKind::NonNeg) top = std::max(top, r.index.n);
    for (int n = 0; n <= top; ++n) {
        if (auto r = find_index(spec, BranchIndex::nonneg(n))) chain.push_back({"lambda_" + std::to_string(n), r->lambda});
        if (n < top && n < int(aux.etas.size())) chain.push_back({"eta_" + std::to_string(n), aux.etas[n]});
    }
    InterlacingReport rep;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        InterlacingLink l{chain[i - 1].first, chain[i].first, chain[i - 1].second, chain[i].second,
                          chain[i - 1].second < chain[i].second, chain[i].second - chain[i - 1].second};
        rep.all_ok = rep.all_ok && l.ok;
        rep.links.push_back(l);
    }
    return rep;
}

}  // namespace sturmspec
