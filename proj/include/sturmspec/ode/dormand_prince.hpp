#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace sturmspec::ode {

enum class StepStatus {
    Accepted,   // one step taken, x() advanced
    Finished,   // already at x_end, nothing done
    StepLimit,  // max_steps exhausted
    Underflow   // step size collapsed below spacing of doubles
};

/**
 * @brief Adaptive Dormand-Prince 5(4) with the 4th-order continuous extension.
 *
 * Driven one step at a time so the caller can inspect each accepted step
 * (zero crossings, rescaling) before asking for the next one.
 */
template <std::size_t N>
class DormandPrince {
public:
    using State = std::array<double, N>;
    using Rhs = std::function<State(double, const State&)>;
    // error weight per component given the states at both ends of a step
    using ScaleFn = std::function<State(const State&, const State&)>;
    // return false to reject a trial step (it is retried with h/2)
    using Filter = std::function<bool(const State&, const State&)>;

    struct Options {
        double rel_tol = 1e-10;
        double abs_tol = 1e-12;
        double h_init = 0.0;  // 0 = pick automatically
        double h_max = 0.0;   // 0 = unbounded
        std::size_t max_steps = 200000;
        ScaleFn scale;   // optional
        Filter accept;   // optional
    };

    DormandPrince(Rhs rhs, double x0, const State& y0, Options opt)
        : f_(std::move(rhs)), opt_(std::move(opt)), x_(x0), xp_(x0), y_(y0), yp_(y0) {
        k1_ = f_(x_, y_);
        ++evals_;
    }

    double x() const { return x_; }
    const State& y() const { return y_; }
    double x_prev() const { return xp_; }
    const State& y_prev() const { return yp_; }
    std::size_t steps() const { return steps_; }
    std::size_t rejected() const { return rejected_; }
    std::size_t evaluations() const { return evals_; }
    double last_error() const { return last_err_; }
    const State& last_error_vector() const { return err_vec_; }

    /** @brief Take one accepted step toward x_end without passing it. */
    StepStatus step_toward(double x_end) {
        double span = x_end - x_;
        if (span <= 0.0) return StepStatus::Finished;
        if (steps_ >= opt_.max_steps) return StepStatus::StepLimit;
        if (h_ <= 0.0) h_ = initial_step(span);
        for (;;) {
            double h = std::min(h_, span);
            if (opt_.h_max > 0.0) h = std::min(h, opt_.h_max);
            if (x_ + h == x_) return StepStatus::Underflow;
            bool last = (h >= span);

            State k2, k3, k4, k5, k6, k7, y1, ys;
            for (std::size_t i = 0; i < N; ++i) ys[i] = y_[i] + h * a21 * k1_[i];
            k2 = f_(x_ + c2 * h, ys);
            for (std::size_t i = 0; i < N; ++i) ys[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
            k3 = f_(x_ + c3 * h, ys);
            for (std::size_t i = 0; i < N; ++i)
                ys[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = f_(x_ + c4 * h, ys);
            for (std::size_t i = 0; i < N; ++i)
                ys[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = f_(x_ + c5 * h, ys);
            for (std::size_t i = 0; i < N; ++i)
                ys[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                     a65 * k5[i]);
            double xn = last ? x_end : x_ + h;
            k6 = f_(x_ + h, ys);
            for (std::size_t i = 0; i < N; ++i)
                y1[i] = y_[i] + h * (b1 * k1_[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            k7 = f_(xn, y1);
            evals_ += 6;

            State err;
            for (std::size_t i = 0; i < N; ++i)
                err[i] = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
            State sc = weights(y_, y1);
            double en = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                double t = err[i] / sc[i];
                en += t * t;
            }
            en = std::sqrt(en / double(N));
            if (!std::isfinite(en)) en = 1e10;

            bool filter_ok = !opt_.accept || opt_.accept(y_, y1);
            if (en <= 1.0 && filter_ok) {
                // continuous extension coefficients for dense()
                for (std::size_t i = 0; i < N; ++i) {
                    double dy = y1[i] - y_[i];
                    double bspl = h * k1_[i] - dy;
                    r1_[i] = y_[i];
                    r2_[i] = dy;
                    r3_[i] = bspl;
                    r4_[i] = dy - h * k7[i] - bspl;
                    r5_[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                  d7 * k7[i]);
                }
                xp_ = x_;
                yp_ = y_;
                x_ = xn;
                y_ = y1;
                k1_ = k7;
                hlast_ = h;
                last_err_ = en;
                err_vec_ = err;
                ++steps_;
                double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 10.0;
                h_ = h * std::clamp(fac, 0.2, 10.0);
                return StepStatus::Accepted;
            }
            ++rejected_;
            if (!filter_ok)
                h_ = 0.5 * h;
            else
                h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
            if (++steps_ >= opt_.max_steps) return StepStatus::StepLimit;
        }
    }

    /** @brief Interpolate inside the last accepted step, x in [x_prev(), x()]. */
    State dense(double x) const {
        if (x_ == xp_) return y_;
        double t = (x - xp_) / (x_ - xp_);
        double s = 1.0 - t;
        State out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = r1_[i] + t * (r2_[i] + s * (r3_[i] + t * (r4_[i] + s * r5_[i])));
        return out;
    }

    // Multiply component i of the state by factors[i].  Only valid for
    // components on which the right-hand side is linear and homogeneous,
    // because the cached derivative is scaled along with the state.
    void rescale(const State& factors) {
        for (std::size_t i = 0; i < N; ++i) {
            y_[i] *= factors[i];
            k1_[i] *= factors[i];
        }
    }

    // Overwrite a component without touching the cached derivative; for
    // tiny representational snaps (e.g. phase unwrapping) only.
    void nudge(std::size_t i, double v) { y_[i] = v; }

private:
    State weights(const State& a, const State& b) const {
        if (opt_.scale) return opt_.scale(a, b);
        State s;
        for (std::size_t i = 0; i < N; ++i)
            s[i] = opt_.abs_tol + opt_.rel_tol * std::max(std::fabs(a[i]), std::fabs(b[i]));
        return s;
    }

    double initial_step(double span) const {
        if (opt_.h_init > 0.0) return std::min(opt_.h_init, span);
        State sc = weights(y_, y_);
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            d0 += (y_[i] / sc[i]) * (y_[i] / sc[i]);
            d1 += (k1_[i] / sc[i]) * (k1_[i] / sc[i]);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
        return std::min(h, 0.05 * span);
    }

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    Rhs f_;
    Options opt_;
    double x_, xp_;
    State y_, yp_, k1_{};
    State r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
    State err_vec_{};
    double h_ = 0.0, hlast_ = 0.0, last_err_ = 0.0;
    std::size_t steps_ = 0, rejected_ = 0, evals_ = 0;
};

}  // namespace sturmspec::ode
