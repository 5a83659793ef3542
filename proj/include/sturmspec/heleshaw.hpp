#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sturmspec/error.hpp"
#include "sturmspec/problem.hpp"
#include "sturmspec/specfun.hpp"
#include "sturmspec/spectrum.hpp"

namespace sturmspec {

enum class ViscosityProfile { Linear, Constant };

/**
 * @brief Three-layer Hele-Shaw cell: water (mu1) | polymer (mu0(x)) | oil (mu2).
 *
 * Linear profile: mu0 jumps by J1 above mu1 at the rear interface and sits J2
 * below mu2 at the front one, linear in between.  Constant profile: mu0 = mu.
 */
struct HeleShawParams {
    double mu1 = 1.0, mu2 = 2.0;
    double S = 1.0, T = 1.0, U = 1.0;
    double L = 1.0;
    ViscosityProfile profile = ViscosityProfile::Linear;
    double J1 = 0.1, J2 = 0.1;  // linear profile
    double mu = 1.5;            // constant profile

    double mu0_left() const { return profile == ViscosityProfile::Linear ? mu1 + J1 : mu; }
    double mu0_right() const { return profile == ViscosityProfile::Linear ? mu2 - J2 : mu; }
    double slope() const { return (mu0_right() - mu0_left()) / L; }
    // mu0(0+) - mu1 and mu2 - mu0(L-); taken from J1/J2 directly so that
    // balanced data cancel to an exact zero
    double jump_left() const { return profile == ViscosityProfile::Linear ? J1 : mu - mu1; }
    double jump_right() const { return profile == ViscosityProfile::Linear ? J2 : mu2 - mu; }

    void validate() const {
        for (double v : {mu1, mu2, S, T, U, L})
            if (!(v > 0)) throw ValidationError("Hele-Shaw parameters mu1, mu2, S, T, U, L must be positive");
        if (profile == ViscosityProfile::Linear) {
            if (!(mu0_left() > 0)) throw ValidationError("mu0(0+) = mu1 + J1 must be positive");
            if (!(mu0_right() > mu0_left())) throw ValidationError("mu0(L-) = mu2 - J2 must exceed mu0(0+)");
        } else if (!(mu > 0)) {
            throw ValidationError("constant viscosity must be positive");
        }
    }
};

/** @brief Boundary data of the stability problem at wave number k. */
inline BoundaryParams physics_coefficients(const HeleShawParams& hp, double k) {
    if (!(k > 0)) throw DomainError("wave number k must be positive");
    double k2 = k * k;
    return BoundaryParams{k2 * (hp.S * k2 / hp.U - hp.jump_left()), hp.mu1 * k,
                          k2 * (hp.jump_right() - hp.T * k2 / hp.U), hp.mu2 * k};
}

/** @brief p = mu0, q = k^2 mu0, r = k^2 mu0' for the linear profile. */
inline SLProblem build_slp(const HeleShawParams& hp, double k) {
    hp.validate();
    if (hp.profile != ViscosityProfile::Linear)
        throw RegimeError("constant viscosity has zero weight; use the constant_profile_* closed forms");
    double a = hp.slope(), b = hp.mu0_left(), k2 = k * k;
    CoefficientSet c{[a, b](double x) { return a * x + b; }, [a, b, k2](double x) { return k2 * (a * x + b); },
                     [a, k2](double) { return k2 * a; }, hp.L, true, "linear"};
    return make_problem(std::move(c), physics_coefficients(hp, k));
}

struct RegimeBounds {
    double k_lo = 0.0, k_hi = 0.0;

    RegimeCase classify(double k) const {
        if (k < k_lo) return RegimeCase::I;
        if (k > k_hi) return RegimeCase::III;
        return RegimeCase::II;
    }
};

/** @brief Wave numbers separating the three sign regimes of (alpha1, beta1). */
inline RegimeBounds regime_bounds(const HeleShawParams& hp) {
    double a = hp.U / hp.S * hp.jump_left();
    double b = hp.U / hp.T * hp.jump_right();
    if (!(a > 0) || !(b > 0)) throw DomainError("regime bounds need positive viscosity jumps");
    return RegimeBounds{std::sqrt(std::min(a, b)), std::sqrt(std::max(a, b))};
}

struct ScanRow {
    double k = 0.0;
    double alpha1 = 0.0, beta1 = 0.0;
    RegimeCase regime = RegimeCase::II;
    std::vector<EigenvalueRecord> spectrum;  // linear profile
    std::vector<LabeledValue> closed_form;   // constant profile
    std::optional<ExistenceFlags> existence; // constant profile
    std::vector<double> sigmas;              // U / lambda, same order as values()
    std::optional<double> sigma0;
    std::string error;

    /** @brief Eigenvalue with the given label, if present. */
    std::optional<double> value(BranchIndex idx) const {
        for (const auto& r : spectrum)
            if (r.index == idx) return r.lambda;
        for (const auto& v : closed_form)
            if (v.index == idx) return v.lambda;
        return std::nullopt;
    }
    std::vector<std::pair<BranchIndex, double>> values() const {
        std::vector<std::pair<BranchIndex, double>> out;
        for (const auto& r : spectrum) out.push_back({r.index, r.lambda});
        for (const auto& v : closed_form) out.push_back({v.index, v.lambda});
        return out;
    }
};

/** @brief Attach sigma = U / lambda to every eigenvalue; sigma0 from lambda_0. */
inline void growth_rates(std::vector<ScanRow>& rows, double U) {
    for (auto& row : rows) {
        row.sigmas.clear();
        row.sigma0.reset();
        for (const auto& [idx, lam] : row.values()) {
            if (lam == 0.0) continue;  // never an eigenvalue
            row.sigmas.push_back(U / lam);
            if (idx == BranchIndex::nonneg(0)) row.sigma0 = U / lam;
        }
    }
}

/** @brief One row per k, in input order; solver failures are stored on the row. */
inline std::vector<ScanRow> scan(const HeleShawParams& hp, const std::vector<double>& k_values, int n_max,
                                 const SolverSettings& s = {}) {
    hp.validate();
    std::vector<ScanRow> rows;
    rows.reserve(k_values.size());
    for (double k : k_values) {
        ScanRow row;
        row.k = k;
        try {
            auto bc = physics_coefficients(hp, k);
            row.alpha1 = bc.alpha1;
            row.beta1 = bc.beta1;
            row.regime = classify_case(bc);
            if (hp.profile == ViscosityProfile::Linear) {
                row.spectrum = full_spectrum(build_slp(hp, k), n_max, s);
            } else {
                row.closed_form = constant_profile_spectrum(hp.mu, k, hp.L, bc);
                row.existence = constant_profile_existence(bc, hp.mu, k, hp.L);
            }
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    growth_rates(rows, hp.U);
    return rows;
}

}  // namespace sturmspec
