#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "sturmspec/ode/dormand_prince.hpp"

using sturmspec::ode::DormandPrince;
using sturmspec::ode::StepStatus;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
template <std::size_t N>
typename DormandPrince<N>::State run_to(DormandPrince<N>& dp, double xe) {
    while (dp.step_toward(xe) == StepStatus::Accepted) {
    }
    return dp.y();
}
}  // namespace

TEST_CASE("exponential decay reaches the closed form", "[integrator]") {
    DormandPrince<1>::Options o;
    o.rel_tol = 1e-12;
    o.abs_tol = 1e-14;
    DormandPrince<1> dp([](double, const std::array<double, 1>& y) { return std::array<double, 1>{-y[0]}; },
                        0.0, {1.0}, o);
    auto y = run_to(dp, 3.0);
    CHECK(dp.x() == 3.0);
    CHECK_THAT(y[0], WithinRel(std::exp(-3.0), 1e-10));
}

TEST_CASE("dense output tracks the oscillator inside steps", "[integrator]") {
    using S = std::array<double, 2>;
    DormandPrince<2>::Options o;
    o.rel_tol = 1e-10;
    DormandPrince<2> dp([](double, const S& y) { return S{y[1], -y[0]}; }, 0.0, {0.0, 1.0}, o);
    double worst = 0.0;
    while (dp.step_toward(2 * std::numbers::pi) == StepStatus::Accepted) {
        for (int k = 1; k < 8; ++k) {
            double x = dp.x_prev() + (dp.x() - dp.x_prev()) * k / 8.0;
            auto v = dp.dense(x);
            worst = std::max(worst, std::fabs(v[0] - std::sin(x)));
        }
    }
    CHECK(worst < 1e-8);
    CHECK_THAT(dp.y()[1], WithinAbs(1.0, 1e-9));
}

TEST_CASE("rescale multiplies linear components and keeps the trajectory", "[integrator]") {
    using S = std::array<double, 1>;
    DormandPrince<1> dp([](double, const S& y) { return S{2.0 * y[0]}; }, 0.0, {1.0}, {});
    dp.step_toward(1.0);
    dp.rescale({0.25});
    auto y = run_to(dp, 1.0);
    CHECK_THAT(y[0] * 4.0, WithinRel(std::exp(2.0), 1e-9));
}

TEST_CASE("filter rejection shrinks the step", "[integrator]") {
    using S = std::array<double, 1>;
    DormandPrince<1>::Options o;
    o.accept = [](const S& a, const S& b) { return std::fabs(b[0] - a[0]) <= 0.01; };
    DormandPrince<1> dp([](double, const S&) { return S{1.0}; }, 0.0, {0.0}, o);
    while (dp.step_toward(1.0) == StepStatus::Accepted) {
        CHECK(dp.y()[0] - dp.y_prev()[0] <= 0.01 + 1e-15);
    }
    CHECK_THAT(dp.y()[0], WithinAbs(1.0, 1e-12));
}

TEST_CASE("step limit is reported", "[integrator]") {
    using S = std::array<double, 1>;
    DormandPrince<1>::Options o;
    o.max_steps = 3;
    o.h_init = 1e-4;
    DormandPrince<1> dp([](double, const S& y) { return S{y[0]}; }, 0.0, {1.0}, o);
    StepStatus st;
    while ((st = dp.step_toward(1.0)) == StepStatus::Accepted) {
    }
    CHECK(st == StepStatus::StepLimit);
}
