#include <catch_amalgamated.hpp>

#include <cmath>

#include "sturmspec/heleshaw.hpp"

using namespace sturmspec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
HeleShawParams table1() { return HeleShawParams{}; }
HeleShawParams table2() {
    HeleShawParams hp;
    hp.U = 10.0;
    return hp;
}
// printed tables carry 6 significant digits
constexpr double kSix = 5e-6;
}  // namespace

TEST_CASE("alpha1 and beta1 follow the printed columns", "[heleshaw]") {
    const double a1[] = {0.9, 15.6, 80.1, 254.4, 622.5, 1292.4, 2396.1, 4089.6, 6552.9};
    const double a2[] = {0, 1.2, 7.2, 24, 60, 126, 235.2, 403.2, 648};
    for (int k = 1; k <= 9; ++k) {
        auto b1 = physics_coefficients(table1(), k), b2 = physics_coefficients(table2(), k);
        CHECK_THAT(b1.alpha1, WithinRel(a1[k - 1], 1e-12));
        CHECK_THAT(b1.beta1, WithinRel(-a1[k - 1], 1e-12));
        CHECK_THAT(b2.alpha1, WithinAbs(a2[k - 1], 1e-12 * a2[k - 1]));
        CHECK(b2.beta1 == -b2.alpha1);
        CHECK(b1.alpha2 == k);
        CHECK(b1.beta2 == 2.0 * k);
    }
    // balanced jumps cancel exactly, not to rounding
    auto z = physics_coefficients(table2(), 1.0);
    CHECK(z.alpha1 == 0.0);
    CHECK(z.beta1 == 0.0);
}

TEST_CASE("linear profile coefficients", "[heleshaw]") {
    auto prob = build_slp(table1(), 2.0);
    CHECK_THAT(prob.p(0.0), WithinRel(1.1, 1e-15));
    CHECK_THAT(prob.p(1.0), WithinRel(1.9, 1e-15));
    CHECK_THAT(prob.q(0.5), WithinRel(4.0 * 1.5, 1e-15));
    CHECK_THAT(prob.r(0.3), WithinRel(4.0 * 0.8, 1e-15));
}

TEST_CASE("regime bounds split k into the three cases", "[heleshaw]") {
    HeleShawParams hp;
    hp.S = 2.0;
    hp.T = 0.5;
    auto rb = regime_bounds(hp);
    CHECK_THAT(rb.k_lo, WithinRel(std::sqrt(0.05), 1e-14));
    CHECK_THAT(rb.k_hi, WithinRel(std::sqrt(0.2), 1e-14));
    for (double k : {0.1, 0.3, 0.5, 2.0}) {
        INFO("k=" << k);
        CHECK(rb.classify(k) == classify_case(physics_coefficients(hp, k)));
    }
    HeleShawParams bad;
    bad.J1 = 0.0;
    CHECK_THROWS_AS(regime_bounds(bad), DomainError);
}

TEST_CASE("table 1 rows to printed precision", "[heleshaw]") {
    struct Row {
        double k, m1, m0, l0, l1, l2;
    };
    const Row rows[] = {{1, -6.46019, -3.27535, 14.4968, 68.1856, 158.906},
                        {5, -0.0307741, -0.0175412, 2.55349, 4.75521, 8.38692}};
    for (const auto& r : rows) {
        auto sr = scan(table1(), {r.k}, 2).front();
        REQUIRE(sr.error.empty());
        CHECK_THAT(*sr.value(BranchIndex::neg_beyond()), WithinRel(r.m1, kSix));
        CHECK_THAT(*sr.value(BranchIndex::neg_zero()), WithinRel(r.m0, kSix));
        CHECK_THAT(*sr.value(BranchIndex::nonneg(0)), WithinRel(r.l0, kSix));
        CHECK_THAT(*sr.value(BranchIndex::nonneg(1)), WithinRel(r.l1, kSix));
        CHECK_THAT(*sr.value(BranchIndex::nonneg(2)), WithinRel(r.l2, kSix));
        CHECK(sr.regime == RegimeCase::III);
    }
}

TEST_CASE("table 2 first row has no negative eigenvalues", "[heleshaw]") {
    auto sr = scan(table2(), {1.0}, 2).front();
    REQUIRE(sr.error.empty());
    CHECK(!sr.value(BranchIndex::neg_beyond()));
    CHECK(!sr.value(BranchIndex::neg_zero()));
    CHECK_THAT(*sr.value(BranchIndex::nonneg(0)), WithinRel(4.96968, kSix));
    CHECK_THAT(*sr.value(BranchIndex::nonneg(1)), WithinRel(26.7236, kSix));
    CHECK_THAT(*sr.value(BranchIndex::nonneg(2)), WithinRel(81.7087, kSix));
}

TEST_CASE("growth rates are U over lambda", "[heleshaw]") {
    auto rows = scan(table2(), {2.0}, 1);
    const auto& r = rows.front();
    auto vals = r.values();
    REQUIRE(vals.size() == r.sigmas.size());
    for (std::size_t i = 0; i < vals.size(); ++i) CHECK_THAT(r.sigmas[i], WithinRel(10.0 / vals[i].second, 1e-15));
    REQUIRE(r.sigma0);
    CHECK_THAT(*r.sigma0, WithinRel(10.0 / *r.value(BranchIndex::nonneg(0)), 1e-15));
}

TEST_CASE("constant profile goes through the closed form", "[heleshaw]") {
    HeleShawParams hp;
    hp.profile = ViscosityProfile::Constant;
    hp.mu = 1.5;
    hp.L = 0.1;
    CHECK_THROWS_AS(build_slp(hp, 1.0), RegimeError);
    auto rows = scan(hp, {1.0, 3.0}, 2);
    for (const auto& r : rows) {
        CHECK(r.error.empty());
        CHECK(r.spectrum.empty());
        REQUIRE(r.existence);
        auto cf = constant_profile_spectrum(1.5, r.k, 0.1, physics_coefficients(hp, r.k));
        CHECK(r.closed_form.size() == cf.size());
    }
}

TEST_CASE("parameter validation", "[heleshaw]") {
    HeleShawParams hp;
    hp.S = 0.0;
    CHECK_THROWS_AS(hp.validate(), ValidationError);
    HeleShawParams inv;
    inv.J1 = 0.6;
    inv.J2 = 0.6;  // mu0(L-) below mu0(0+)
    CHECK_THROWS_AS(inv.validate(), ValidationError);
    CHECK_THROWS_AS(physics_coefficients(HeleShawParams{}, 0.0), DomainError);
}

TEST_CASE("scan keeps input order and per-row errors", "[heleshaw]") {
    auto rows = scan(table1(), {3.0, 1.0, 2.0}, 0);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].k == 3.0);
    CHECK(rows[1].k == 1.0);
    CHECK(rows[2].k == 2.0);
    SolverSettings starved;
    starved.max_steps = 2;
    auto bad = scan(table1(), {1.0}, 1, starved);
    CHECK(!bad.front().error.empty());
}
