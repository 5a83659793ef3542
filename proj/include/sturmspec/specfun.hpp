#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sturmspec/error.hpp"
#include "sturmspec/problem.hpp"
#include "sturmspec/spectrum.hpp"

namespace sturmspec {

struct SeriesSettings {
    double tol = 1e-17;
    int max_terms = 4000;
};

/** @brief mu0(x) = a x + b with a, b > 0. */
struct LinearProfile {
    double a = 1.0;
    double b = 1.0;

    void validate() const {
        if (!(a > 0) || !(b > 0)) throw ValidationError("linear profile needs a > 0 and b > 0");
    }
};

namespace detail {

// Neumaier-compensated running sum in long double
struct KahanSum {
    long double s = 0.0L, c = 0.0L;
    void add(long double v) {
        long double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    long double value() const { return s + c; }
};

inline bool nonpositive_integer(long double x) { return x <= 0 && x == std::floor(x); }

inline long double digamma_ld(long double x) {
    constexpr long double pi = 3.141592653589793238462643383279502884L;
    if (nonpositive_integer(x)) throw DomainError("digamma pole at x=" + std::to_string(double(x)));
    long double acc = 0.0L;
    if (x < 0.5L) {
        // reflection: psi(x) = psi(1-x) - pi cot(pi x)
        return digamma_ld(1.0L - x) - pi / std::tan(pi * x);
    }
    while (x < 12.0L) {
        acc -= 1.0L / x;
        x += 1.0L;
    }
    long double x2 = 1.0L / (x * x);
    // Bernoulli tail: B2k / (2k x^2k)
    long double tail = x2 * (1.0L / 12 - x2 * (1.0L / 120 - x2 * (1.0L / 252 - x2 * (1.0L / 240 -
                        x2 * (1.0L / 132 - x2 * (691.0L / 32760 - x2 * (1.0L / 12)))))));
    return acc + std::log(x) - 0.5L / x - tail;
}

// Terms of sum_l (alpha)_l z^l / (l!)^2 and its z-derivative.
inline std::pair<long double, long double> phi_series(double alpha, double z, const SeriesSettings& s) {
    KahanSum v, dv;
    long double t = 1.0L;  // (alpha)_l z^l / (l!)^2
    long double td = 0.0L; // (alpha)_l l z^(l-1) / (l!)^2
    v.add(t);
    for (int l = 0; l < s.max_terms; ++l) {
        long double ratio = (alpha + (long double)l) / ((l + 1.0L) * (l + 1.0L));
        td = t * ratio * (l + 1.0L);  // derivative term for index l+1
        t *= ratio * (long double)z;
        v.add(t);
        dv.add(td);
        if (t == 0.0L) return {v.value(), dv.value()};
        bool past_peak = std::fabs(ratio * z) < 0.5L;
        if (past_peak && std::fabs(t) <= s.tol * std::fabs(v.value()) &&
            std::fabs(td) <= s.tol * std::max(std::fabs(dv.value()), 1e-300L))
            return {v.value(), dv.value()};
    }
    throw SeriesError("Kummer series did not converge in " + std::to_string(s.max_terms) + " terms");
}

// -1/Gamma(a) sum_k (a)_k/(k!)^2 z^k [ln z + psi(a+k) - 2 psi(k+1)] and derivative
inline std::pair<long double, long double> tricomi_series(double alpha, double z, const SeriesSettings& s) {
    if (!(z > 0)) throw DomainError("Tricomi function needs z > 0");
    if (nonpositive_integer(alpha)) throw DomainError("Gamma pole at alpha=" + std::to_string(alpha));
    const long double a = alpha;
    const long double lz = std::log((long double)z);
    long double c = 1.0L;  // (a)_k/(k!)^2
    long double zk = 1.0L; // z^k
    long double psi_a = digamma_ld(a);
    constexpr long double euler = 0.577215664901532860606512090082402431L;
    long double psi_k1 = -euler;  // psi(k+1)
    KahanSum v, dv;
    v.add(c * (lz + psi_a - 2.0L * psi_k1));
    dv.add(c / (long double)z);  // k = 0 contributes 1/z
    for (int k = 0; k < s.max_terms; ++k) {
        c *= (a + k) / ((k + 1.0L) * (k + 1.0L));
        psi_a += 1.0L / (a + k);
        psi_k1 += 1.0L / (k + 1.0L);
        long double zkm1 = zk;  // z^k, becomes z^(k'-1) for k' = k+1
        zk *= z;
        long double d = lz + psi_a - 2.0L * psi_k1;
        long double term = c * zk * d;
        long double dterm = c * zkm1 * ((k + 1.0L) * d + 1.0L);
        v.add(term);
        dv.add(dterm);
        bool past_peak = std::fabs((a + k) * (long double)z / ((k + 1.0L) * (k + 1.0L))) < 0.5L;
        if ((c == 0.0L) || (past_peak && std::fabs(term) <= s.tol * std::fabs(v.value()) &&
                            std::fabs(dterm) <= s.tol * std::fabs(dv.value()))) {
            long double g = std::tgamma(a);
            return {-v.value() / g, -dv.value() / g};
        }
    }
    throw SeriesError("Tricomi series did not converge in " + std::to_string(s.max_terms) + " terms");
}

}  // namespace detail

/** @brief psi(x) = Gamma'(x)/Gamma(x). */
inline double digamma(double x) { return double(detail::digamma_ld(x)); }

/** @brief Phi(alpha, 1; z) = sum_{l>=0} (alpha)_l z^l / (l!)^2. */
inline double kummer_phi(double alpha, double z, const SeriesSettings& s = {}) {
    return double(detail::phi_series(alpha, z, s).first);
}
inline double kummer_phi_dz(double alpha, double z, const SeriesSettings& s = {}) {
    return double(detail::phi_series(alpha, z, s).second);
}

/**
 * @brief Tricomi U(alpha, 1, z) from the logarithmic series, z > 0.
 *
 * Includes the -2 psi(k+1) harmonic terms and the overall minus sign; without
 * them the series is not a solution of z g'' + (1-z) g' - alpha g = 0
 * (see tricomi_psi_displayed).
 */
inline double tricomi_psi(double alpha, double z, const SeriesSettings& s = {}) {
    return double(detail::tricomi_series(alpha, z, s).first);
}
inline double tricomi_psi_dz(double alpha, double z, const SeriesSettings& s = {}) {
    return double(detail::tricomi_series(alpha, z, s).second);
}

// The shortened log-series (Phi ln z + sum (alpha)_l psi(alpha+l) z^l/(l!)^2)/Gamma(alpha),
// kept only so the tests can show it fails the Kummer equation.
inline double tricomi_psi_displayed(double alpha, double z, const SeriesSettings& s = {}) {
    if (!(z > 0)) throw DomainError("Tricomi function needs z > 0");
    if (detail::nonpositive_integer(alpha)) throw DomainError("Gamma pole at alpha=" + std::to_string(alpha));
    long double c = 1.0L, zk = 1.0L, psi = detail::digamma_ld(alpha);
    detail::KahanSum v;
    v.add(psi);
    for (int l = 0; l < s.max_terms; ++l) {
        c *= (alpha + l) / ((l + 1.0L) * (l + 1.0L));
        psi += 1.0L / (alpha + l);
        zk *= z;
        long double t = c * zk * psi;
        v.add(t);
        if (std::fabs((alpha + l) * (long double)z / ((l + 1.0L) * (l + 1.0L))) < 0.5L &&
            std::fabs(t) <= s.tol * std::fabs(v.value()))
            break;
    }
    long double phi = detail::phi_series(alpha, z, s).first;
    return double((phi * std::log((long double)z) + v.value()) / std::tgamma((long double)alpha));
}

/**
 * @brief Solution of (mu0 f')' - k^2 mu0 f + lambda k^2 a f = 0 for mu0 = a x + b
 * through z = 2k(ax+b)/a, f = exp(-z/2) g(z), g a Kummer function with
 * parameter (1 - lambda k)/2.  Constants fixed by f(0)=1, b f'(0)=alpha1 lambda + alpha2.
 */
class LinearProfileSolution {
public:
    LinearProfileSolution(LinearProfile prof, double k, double lambda, const BoundaryParams& bc,
                          SeriesSettings s = {})
        : prof_(prof), k_(k), lambda_(lambda), s_(s) {
        prof_.validate();
        if (!(k > 0)) throw DomainError("wave number k must be positive");
        kappa_ = 0.5 * (1.0 - lambda * k);
        double z0 = zeta(0.0);
        auto [m, mp] = detail::phi_series(kappa_, z0, s_);
        auto [u, up] = detail::tricomi_series(kappa_, z0, s_);
        // f(0) = e^{-z/2}(c1 M + c2 U),  f'(0) = 2k e^{-z/2}(c1 (M' - M/2) + c2 (U' - U/2))
        long double e = std::exp(-0.5L * z0);
        long double a11 = e * m, a12 = e * u;
        long double a21 = 2.0L * k * e * (mp - 0.5L * m), a22 = 2.0L * k * e * (up - 0.5L * u);
        long double r1 = 1.0L, r2 = (bc.alpha1 * lambda + bc.alpha2) / prof_.b;
        long double det = a11 * a22 - a12 * a21;
        if (det == 0.0L) throw SeriesError("Kummer/Tricomi pair degenerate at x=0");
        c1_ = (r1 * a22 - a12 * r2) / det;
        c2_ = (a11 * r2 - a21 * r1) / det;
    }

    double kummer_parameter() const { return kappa_; }
    double c1() const { return double(c1_); }
    double c2() const { return double(c2_); }

    /** @brief (f, f') at x. */
    std::pair<double, double> operator()(double x) const {
        double z = zeta(x);
        auto [m, mp] = detail::phi_series(kappa_, z, s_);
        auto [u, up] = detail::tricomi_series(kappa_, z, s_);
        long double e = std::exp(-0.5L * z);
        long double g = c1_ * m + c2_ * u, gp = c1_ * mp + c2_ * up;
        return {double(e * g), double(2.0L * k_ * e * (gp - 0.5L * g))};
    }

private:
    double zeta(double x) const { return 2.0 * k_ * (prof_.a * x + prof_.b) / prof_.a; }

    LinearProfile prof_;
    double k_, lambda_, kappa_;
    SeriesSettings s_;
    long double c1_ = 0, c2_ = 0;
};

inline std::pair<double, double> linear_profile_solution(LinearProfile prof, double k, double lambda,
                                                         const BoundaryParams& bc, double x,
                                                         const SeriesSettings& s = {}) {
    return LinearProfileSolution(prof, k, lambda, bc, s)(x);
}

/**
 * @brief Max relative finite-difference residual of the linear-profile ODE
 * along n points of [0, L], using the hypergeometric solution.
 */
inline double linear_profile_residual(LinearProfile prof, double k, double lambda, const BoundaryParams& bc,
                                      double L, int n = 401, const SeriesSettings& s = {}) {
    LinearProfileSolution sol(prof, k, lambda, bc, s);
    double h = L / (n - 1);
    std::vector<double> flux(n + 4), f(n + 4);
    for (int i = 0; i < n + 4; ++i) {
        double x = (i - 2) * h;  // two ghost points each side; the solution extends smoothly
        auto [fv, fp] = sol(x);
        f[i] = fv;
        flux[i] = (prof.a * x + prof.b) * fp;
    }
    double worst = 0.0, scale = 0.0;
    std::vector<double> res(n);
    for (int i = 2; i < n + 2; ++i) {
        double x = (i - 2) * h;
        double mu = prof.a * x + prof.b;
        double dflux = (flux[i - 2] - 8 * flux[i - 1] + 8 * flux[i + 1] - flux[i + 2]) / (12 * h);
        double other = (k * k * mu - lambda * k * k * prof.a) * f[i];
        res[i - 2] = dflux - other;
        scale = std::max({scale, std::fabs(dflux), std::fabs(k * k * mu * f[i]), std::fabs(lambda * k * k * prof.a * f[i])});
    }
    for (double r : res) worst = std::max(worst, std::fabs(r));
    return worst / scale;
}

// ---- constant viscosity profile: p = mu, q = k^2 mu, r = 0 ----

/** @brief Closed-form h1 for the constant profile, exactly as the dispersion formula is usually written. */
inline double constant_profile_h1(double mu, double k, double L, const BoundaryParams& bc, double lambda) {
    if (lambda == 0.0) throw PoleError("h1 has a pole at lambda = 0");
    double A = bc.alpha1 * lambda + bc.alpha2;
    double sh = std::sinh(k * L), ch = std::cosh(k * L);
    double den = k * mu * ch + A * sh;
    if (std::fabs(den) <= 1e-14 * (std::fabs(k * mu * ch) + std::fabs(A * sh)))
        throw PoleError("h1 has a pole at the auxiliary eigenvalue");
    return (k / lambda) * (k * mu * sh + A * ch) / den;
}

/** @brief The single auxiliary eigenvalue, -(mu k / tanh(kL) + alpha2)/alpha1. */
inline double constant_profile_eta(double mu, double k, double L, double alpha1, double alpha2) {
    if (alpha1 == 0.0) throw RegimeError("no auxiliary eigenvalue when alpha1 = 0");
    return -(mu * k / std::tanh(k * L) + alpha2) / alpha1;
}

struct LabeledValue {
    BranchIndex index;
    double lambda;
};

/**
 * @brief All eigenvalues of the constant-profile problem (weighted boundary
 * rows).  Clearing denominators leaves a polynomial of degree <= 2 in lambda.
 */
inline std::vector<LabeledValue> constant_profile_spectrum(double mu, double k, double L, const BoundaryParams& bc) {
    const double sh = std::sinh(k * L), ch = std::cosh(k * L), km = k * mu;
    const double a1 = bc.alpha1, a2 = bc.alpha2, b1 = bc.beta1, b2 = bc.beta2;
    // k mu G(lambda) = c2 l^2 + c1 l + c0
    const double c2 = -b1 * a1 * sh;
    const double c1 = km * a1 * ch - b1 * (km * ch + a2 * sh) + b2 * a1 * sh;
    const double c0 = km * km * sh + km * a2 * ch + b2 * (km * ch + a2 * sh);
    std::vector<double> roots;
    if (c2 == 0.0) {
        if (c1 != 0.0) roots.push_back(-c0 / c1);
    } else {
        double disc = c1 * c1 - 4 * c2 * c0;
        if (disc >= 0) {
            double sq = std::sqrt(disc);
            double qq = -0.5 * (c1 + std::copysign(sq, c1));
            roots.push_back(qq / c2);
            if (qq != 0.0) roots.push_back(c0 / qq);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<LabeledValue> out;
    std::optional<double> eta;
    if (a1 != 0.0) eta = constant_profile_eta(mu, k, L, a1, a2);
    for (double r : roots) {
        BranchIndex idx;
        if (a1 > 0)
            idx = r < *eta ? BranchIndex::neg_beyond() : (r < 0 ? BranchIndex::neg_zero() : BranchIndex::nonneg(0));
        else if (a1 < 0)
            idx = r < 0 ? BranchIndex::neg_zero() : (r < *eta ? BranchIndex::nonneg(0) : BranchIndex::nonneg(1));
        else
            idx = r < 0 ? BranchIndex::neg_zero() : BranchIndex::nonneg(0);
        out.push_back({idx, r});
    }
    return out;
}

struct ExistenceFlags {
    bool lambda_m1 = false, lambda_m0 = false, lambda_0 = false, lambda_1 = false;
    bool operator==(const ExistenceFlags&) const = default;
};

/** @brief Which of lambda_-1, lambda_-0, lambda_0, lambda_1 the constant profile admits. */
inline ExistenceFlags constant_profile_existence(const BoundaryParams& bc, double mu = 1.0, double k = 1.0,
                                                 double L = 1.0) {
    ExistenceFlags e;
    for (const auto& v : constant_profile_spectrum(mu, k, L, bc)) {
        if (v.index == BranchIndex::neg_beyond()) e.lambda_m1 = true;
        if (v.index == BranchIndex::neg_zero()) e.lambda_m0 = true;
        if (v.index == BranchIndex::nonneg(0)) e.lambda_0 = true;
        if (v.index == BranchIndex::nonneg(1)) e.lambda_1 = true;
    }
    return e;
}

}  // namespace sturmspec
