// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "sturmspec/sturmspec.hpp"

using namespace sturmspec;

namespace {

// pinned tolerances
constexpr double kTableRel = 1e-2;      // criteria 1-2 pass/fail
constexpr double kTableTarget = 1e-3;   // reported alongside
constexpr double kTableSeconds = 60.0;
constexpr double kCoeffDigits = 5e-7;   // 6 significant digits
constexpr double kSeparationTol = 1e-8;
constexpr double kSlopeLimit = 0.02;
constexpr double kAsymSeconds = 30.0;
constexpr double kCDResidual = 1e-6;
constexpr double kInverseRel = 1e-5;
constexpr double kOracleRel = 1e-8;
constexpr double kHyperGate = 1e-7;
constexpr int kProbes = 50;

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!ok) ++failures;
    std::fflush(stdout);
}

template <class... A>
void note(const char* fmt, A... a) {
    std::printf("    ");
    if constexpr (sizeof...(A) == 0)
        std::fputs(fmt, stdout);
    else
        std::printf(fmt, a...);
    std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

struct PrintedRow {
    double k;
    double v[5];  // lambda_-1, lambda_-0, lambda_0, lambda_1, lambda_2; NaN = dash
};

const BranchIndex kCols[5] = {BranchIndex::neg_beyond(), BranchIndex::neg_zero(), BranchIndex::nonneg(0),
                              BranchIndex::nonneg(1), BranchIndex::nonneg(2)};

HeleShawParams table_params(double U, double L) {
    HeleShawParams hp;
    hp.U = U;
    hp.L = L;
    return hp;
}

// Compare one scanned row with the printed one; returns worst relative error, or +inf on a shape mismatch.
double row_error(const ScanRow& row, const PrintedRow& pr) {
    double worst = 0.0;
    for (int c = 0; c < 5; ++c) {
        auto v = row.value(kCols[c]);
        if (std::isnan(pr.v[c])) {
            if (v) return INFINITY;
            continue;
        }
        if (!v) return INFINITY;
        worst = std::max(worst, rel(*v, pr.v[c]));
    }
    return worst;
}

bool check_rows(const std::vector<ScanRow>& rows, const std::vector<PrintedRow>& printed, double& worst_out) {
    bool ok = true;
    worst_out = 0.0;
    for (const auto& pr : printed) {
        const ScanRow* row = nullptr;
        for (const auto& r : rows)
            if (r.k == pr.k) row = &r;
        if (!row || !row->error.empty()) {
            note("k=%g: %s", pr.k, row ? row->error.c_str() : "missing");
            ok = false;
            continue;
        }
        double e = row_error(*row, pr);
        worst_out = std::max(worst_out, e);
        std::string line = cli::table_line(*row);
        note("k=%g  %s  worst rel %.2e%s", pr.k, line.c_str(), e, e <= kTableTarget ? "" : "  (above 1e-3 target)");
        ok = ok && e <= kTableRel;
    }
    return ok;
}

// Table 1 with the coefficient data but L = 0.1, in both boundary conventions.
void report_short_domain() {
    note("run report: same data on L = 0.1, k = 1");
    auto hp = table_params(1.0, 0.1);
    auto weighted = build_slp(hp, 1.0);
    auto spec_w = full_spectrum(weighted, 2);
    auto unweighted = make_problem(weighted.coefficients,
                                   from_unweighted(weighted.boundary, weighted.p(0.0), weighted.p(0.1)));
    auto spec_u = full_spectrum(unweighted, 2);
    auto show = [](const char* name, const std::vector<EigenvalueRecord>& s) {
        std::string t;
        for (const auto& r : s) t += " " + r.index.label() + ":" + cli::fmt6(r.lambda);
        note("  %-10s%s", name, t.c_str());
    };
    show("weighted", spec_w);
    show("unweighted", spec_u);
    note("  printed lambda_0 = 14.4968; neither convention reproduces it on L = 0.1, both are far outside 1e-2");
}

}  // namespace

int main() {
    const double nan = std::nan("");
    const std::vector<double> ks = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    // ---- 1: Table 1
    auto t0 = std::chrono::steady_clock::now();
    auto rows1 = scan(table_params(1.0, 1.0), ks, 2);
    double t_table1 = seconds_since(t0);
    {
        std::vector<PrintedRow> printed = {
            {1, {-6.46019, -3.27535, 14.4968, 68.1856, 158.906}},
            {2, {-0.51684, -0.29893, 6.11938, 19.6737, 42.3671}},
            {5, {-0.0307741, -0.0175412, 2.55349, 4.75521, 8.38692}},
            {9, {-0.0052976, -0.00294567, 2.0233, 2.75939, 3.87815}},
        };
        double worst;
        bool ok = check_rows(rows1, printed, worst);
        note("weighted boundary convention on L = 1; worst rel %.2e; 9-row table in %.2f s (limit %.0f s)", worst,
             t_table1, kTableSeconds);
        report_short_domain();
        verdict(1, ok && t_table1 < kTableSeconds, "Table 1 rows k=1,2,5,9 within 1e-2 relative and runtime");
    }

    // ---- 2: Table 2
    auto rows2 = scan(table_params(10.0, 1.0), ks, 2);
    {
        std::vector<PrintedRow> printed = {
            {1, {nan, nan, 4.96968, 26.7236, 81.7087}},
            {2, {-10.5131, -6.14168, 4.38068, 16.2001, 38.3316}},
            {6, {-0.186085, -0.104951, 2.31824, 3.85155, 6.36463}},
        };
        double worst;
        bool ok = check_rows(rows2, printed, worst);
        std::string first = cli::table_line(rows2.front());
        bool dashes = first.find(",-,-,") != std::string::npos;
        note("k=1 CSV line: %s", first.c_str());
        verdict(2, ok && dashes, "Table 2 rows k=1,2,6 within 1e-2 relative, dashes at k=1");
    }

    // ---- 3: coefficient columns
    {
        const double a1[] = {0.9, 15.6, 80.1, 254.4, 622.5, 1292.4, 2396.1, 4089.6, 6552.9};
        const double a2[] = {0, 1.2, 7.2, 24, 60, 126, 235.2, 403.2, 648};
        bool ok = true;
        for (int i = 0; i < 9; ++i) {
            const auto& r1 = rows1[i];
            const auto& r2 = rows2[i];
            auto same6 = [](double got, double want) {
                return want == 0.0 ? got == 0.0 : std::fabs(got - want) <= kCoeffDigits * std::fabs(want);
            };
            bool row_ok = same6(r1.alpha1, a1[i]) && same6(r1.beta1, -a1[i]) && same6(r2.alpha1, a2[i]) &&
                          same6(r2.beta1, -a2[i]);
            if (!row_ok) note("k=%d: got (%g, %g) and (%g, %g)", i + 1, r1.alpha1, r1.beta1, r2.alpha1, r2.beta1);
            ok = ok && row_ok;
        }
        verdict(3, ok, "alpha1, beta1 equal the printed columns to 6 significant digits, k=1..9, both tables");
    }

    // ---- 4: zero counts, recounted with a tighter integrator
    {
        SolverSettings tight;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-14;
        int checked = 0, bad = 0;
        auto recount = [&](const HeleShawParams& hp, const std::vector<ScanRow>& rows, std::vector<double> which) {
            for (const auto& row : rows) {
                if (std::find(which.begin(), which.end(), row.k) == which.end()) continue;
                auto prob = build_slp(hp, row.k);
                for (const auto& rec : row.spectrum) {
                    int z = count_zeros(prob, rec.lambda, tight);
                    ++checked;
                    if (z != rec.index.magnitude() || rec.zero_count != rec.index.magnitude()) {
                        ++bad;
                        note("k=%g %s: %d zeros", row.k, rec.index.label().c_str(), z);
                    }
                }
            }
        };
        recount(table_params(1.0, 1.0), rows1, {1, 2, 5, 9});
        recount(table_params(10.0, 1.0), rows2, {1, 2, 6});
        note("%d eigenfunctions recounted, %d mismatches", checked, bad);
        verdict(4, bad == 0 && checked == 33, "interior zero count equals |index| for every eigenvalue of criteria 1-2");
    }

    // ---- 5: interlacing on every case-III row of Table 1
    {
        bool ok = true;
        int rows = 0;
        for (double k : ks) {
            auto prob = build_slp(table_params(1.0, 1.0), k);
            if (classify_case(prob.boundary) != RegimeCase::III) continue;
            ++rows;
            AuxSpectrum aux;
            auto spec = full_spectrum(prob, 2, {}, &aux);
            auto rep = verify_interlacing(spec, aux);
            // lambda_-1 < eta_-0 < lambda_-0 < 0 < lambda_0 < eta_0 < lambda_1 < eta_1 < lambda_2: 8 links
            bool row_ok = rep.all_ok && rep.links.size() == 8;
            if (!row_ok)
                for (const auto& l : rep.links)
                    if (!l.ok) note("k=%g: %s !< %s", k, l.left.c_str(), l.right.c_str());
            ok = ok && row_ok;
        }
        note("%d case-III rows checked", rows);
        verdict(5, ok && rows == 9, "interlacing chain through lambda_2 on every case-III row of Table 1");
    }

    // ---- 6: separation
    {
        auto prob = build_slp(table_params(1.0, 1.0), 1.0);
        auto spec = full_spectrum(prob, 2);
        const auto* e1 = find_index(spec, BranchIndex::nonneg(1));
        const auto* e2 = find_index(spec, BranchIndex::nonneg(2));
        auto rep = separation_check(e1->zeros, e2->zeros, kSeparationTol);
        std::string z1, z2;
        for (double z : e1->zeros) z1 += " " + cli::fmt6(z);
        for (double z : e2->zeros) z2 += " " + cli::fmt6(z);
        note("zeros f(.;lambda_1):%s   f(.;lambda_2):%s", z1.c_str(), z2.c_str());
        verdict(6, rep.ok() && e1->zeros.size() == 1 && e2->zeros.size() == 2,
                "zeros of f(.;lambda_1) and f(.;lambda_2) strictly interlace, tolerance 1e-8");
    }

    // ---- 7: asymptotics, literal statement
    {
        auto t7 = std::chrono::steady_clock::now();
        auto prob = make_problem(constant_coefficients(1, 1, 1, 1), {1, 1, -1, 1});
        auto spec = full_spectrum(prob, 40);
        double secs = seconds_since(t7);
        auto lit = asymptotic_check(spec, 1.0, 5, 40, 0, kSlopeLimit);
        auto sh = asymptotic_check(spec, 1.0, 5, 40, 1, kSlopeLimit);
        note("n|sqrt(lambda_n) - n pi|, n=5..40: slope %.4g, max %.4g, %.2f s", lit.slope, lit.max_rho, secs);
        note("diagnostic, index shifted by one, n|sqrt(lambda_n) - (n+1) pi|: slope %.4g, max %.4g", sh.slope,
             sh.max_rho);
        note("the eigenvalue with n zeros behaves like ((n+1) pi)^2 here, so the literal residual grows like n pi");
        verdict(7, lit.bounded && secs < kAsymSeconds,
                "n|sqrt(lambda_n) - n pi| for n=5..40 has slope < 0.02 and finite max, under 30 s");
    }

    // ---- 8: Crum-Darboux and inverse map
    {
        auto prob = build_slp(table_params(1.0, 1.0), 1.0);
        auto spec = full_spectrum(prob, 2);
        double l0 = find_index(spec, BranchIndex::nonneg(0))->lambda;
        auto ctx = make_context(prob, l0);
        auto reg = build_regular_slp(ctx, prob);
        auto rs = regular_spectrum(reg, 3);
        auto grid = uniform_grid(1.0, 1001);
        bool ok = true;
        for (int n = 1; n <= 2; ++n) {
            double lam = find_index(spec, BranchIndex::nonneg(n))->lambda;
            auto rr = regular_residual(reg, crum_darboux(ctx, prob, lam, eigenfunction_samples(prob, lam, grid)), lam);

            // back again from the regular eigenfunction
            double lt = rs[n + 1];
            auto g = regular_eigenfunction(reg, lt, ctx.x);
            std::vector<double> gv;
            for (const auto& s : g) gv.push_back(s.f);
            auto w = inverse_map(lt, gv, ctx, prob);
            auto orig = eigenfunction_samples(prob, lam, ctx.x);
            std::size_t mid = w.size() / 2;
            double dev = 0.0, mx = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                double a = w[i].f / w[mid].f, b = orig[i].f / orig[mid].f;
                dev = std::max(dev, std::fabs(a - b));
                mx = std::max(mx, std::fabs(b));
            }
            dev /= mx;
            note("lambda_%d: regular residual %.2e (ode %.2e, robin %.2e/%.2e), regular eigenvalue %.9g vs %.9g, "
                 "inverse deviation %.2e",
                 n, rr.worst(), rr.ode, rr.robin_left, rr.robin_right, lt, lam, dev);
            ok = ok && rr.worst() < kCDResidual && dev < kInverseRel;
        }
        verdict(8, ok, "transformed eigenfunctions solve the regular problem (< 1e-6), inverse map recovers f (< 1e-5)");
    }

    // ---- 9: existence matrix
    {
        using F = ExistenceFlags;
        struct Case {
            double a1, b1;
            F want;
        };
        const Case cases[] = {
            {-1, 1, {false, false, true, true}},  {-1, 0, {false, false, true, false}},
            {-1, -1, {false, true, true, false}}, {1, 1, {false, true, true, false}},
            {1, 0, {false, true, false, false}},  {1, -1, {true, true, false, false}},
            {0, 1, {false, false, true, false}},  {0, 0, {false, false, false, false}},
            {0, -1, {false, true, false, false}},
        };
        bool ok = true;
        for (const auto& c : cases) {
            auto got = constant_profile_existence({c.a1, 1.0, c.b1, 1.0});
            bool m = got == c.want;
            if (!m)
                note("signs (%g, %g): got %d%d%d%d", c.a1, c.b1, got.lambda_m1, got.lambda_m0, got.lambda_0,
                     got.lambda_1);
            ok = ok && m;
        }
        // no row ever has an eigenvalue at 0, i.e. no neutral wave
        note("9 sign patterns; lambda = 0 is a pole of h1, never an eigenvalue");
        verdict(9, ok, "constant-profile existence matrix, six sign rows and three alpha1=0 rows");
    }

    // ---- 10: oracles
    {
        const double mu = 1.0, k = 1.0, L = 0.1;
        BoundaryParams bc{0.9, 1.0, -0.9, 2.0};
        ValidationOptions vo;
        vo.allow_zero_weight = true;
        auto prob = make_problem(CoefficientSet{[mu](double) { return mu; }, [mu, k](double) { return k * k * mu; },
                                                [](double) { return 0.0; }, L},
                                 bc, vo);
        double worst_h = 0.0;
        for (int j = 0; j < 100; ++j) {
            double lam = -49.5 + j;  // stays clear of the poles at 0 and eta = -12.259
            auto r = shoot(prob, lam);
            double h = r.pfprime_end / (lam * r.f_end);
            worst_h = std::max(worst_h, rel(h, constant_profile_h1(mu, k, L, bc, lam)));
        }
        double worst_f = 0.0;
        auto grid = uniform_grid(L, 101);
        for (double lam : {-30.0, -5.0, 2.0, 20.0}) {
            auto smp = eigenfunction_samples(prob, lam, grid);
            double A = bc.alpha1 * lam + bc.alpha2, mx = 0.0, dev = 0.0;
            for (const auto& s : smp) {
                double f = mu * std::cosh(k * s.x) + A / k * std::sinh(k * s.x);  // f(0) = mu
                dev = std::max(dev, std::fabs(mu * s.f - f));
                mx = std::max(mx, std::fabs(f));
            }
            worst_f = std::max(worst_f, dev / mx);
        }
        note("h1 vs closed form on 100 lambdas: worst rel %.2e; f vs closed form: worst rel %.2e", worst_h, worst_f);

        // hypergeometric path, gated by its own ODE residual
        LinearProfile lp{0.8, 1.1};
        BoundaryParams bc1 = physics_coefficients(table_params(1.0, 1.0), 1.0);
        double res = linear_profile_residual(lp, 1.0, 14.4968, bc1, 1.0);
        auto shot = eigenfunction_samples(build_slp(table_params(1.0, 1.0), 1.0), 14.4968, uniform_grid(1.0, 11));
        LinearProfileSolution sol(lp, 1.0, 14.4968, bc1);
        double hdev = 0.0;
        for (const auto& s : shot) hdev = std::max(hdev, std::fabs(sol(s.x).first - s.f));
        bool gate = res < kHyperGate;
        note("hypergeometric path at k=1, lambda=14.4968: ODE residual %.2e (gate 1e-7) %s; max |f - shot| %.2e", res,
             gate ? "passed" : "failed, reported only", hdev);
        verdict(10, worst_h < kOracleRel && worst_f < kOracleRel,
                "shooting h1 and f agree with the constant-profile closed forms to 1e-8");
    }

    // ---- 11: monotonicity
    {
        auto prob = build_slp(table_params(1.0, 1.0), 1.0);
        auto aux = aux_spectrum(prob, 1);
        bool ok = true;
        int probed = 0;
        for (const auto& b : branches(aux, 1)) {
            if (!(b.index == BranchIndex::neg_zero() || b.index == BranchIndex::nonneg(0) ||
                  b.index == BranchIndex::nonneg(1)))
                continue;
            auto rep = monotonicity_probe(prob, b, kProbes);
            note("B_%s = ]%.6g, %.6g[: %d violations in %d probes", b.index.label().c_str(), b.lo, b.hi,
                 rep.violations, int(rep.values.size()));
            ok = ok && rep.ok() && int(rep.values.size()) == kProbes;
            ++probed;
        }
        verdict(11, ok && probed == 3, "h1 strictly decreasing on 50-point probes of B_-0, B_0, B_1");
    }

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
