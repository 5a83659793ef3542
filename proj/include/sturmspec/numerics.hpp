#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sturmspec/error.hpp"
#include "sturmspec/problem.hpp"

namespace sturmspec::num {

/** @brief Fornberg weights for the m-th derivative at x0 from nodes x. */
inline std::vector<double> fd_weights(const std::vector<double>& x, double x0, int m) {
    const int n = int(x.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

/**
 * @brief 5-point derivative of a callable, stencil shifted so every node
 * stays inside [lo, hi].
 */
inline double derivative(const Fn& f, double x, double h, double lo, double hi, int order = 1) {
    double start = x - 2 * h;
    if (start < lo) start = lo;
    if (start + 4 * h > hi) start = hi - 4 * h;
    std::vector<double> nodes(5);
    for (int i = 0; i < 5; ++i) nodes[i] = start + i * h;
    auto w = fd_weights(nodes, x, order);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(nodes[i]);
    return s;
}

/** @brief First derivative of uniform samples with a `points`-wide stencil, shifted near the ends. */
inline std::vector<double> derivative_samples(const std::vector<double>& y, double h, std::size_t points = 7) {
    const std::size_t n = y.size();
    if (n < points) throw DomainError("too few samples for the difference stencil");
    const std::size_t half = points / 2;
    std::vector<double> d(n);
    std::vector<double> nodes(points);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t s = i < half ? 0 : std::min(i - half, n - points);
        for (std::size_t k = 0; k < points; ++k) nodes[k] = (double(s + k) - double(i)) * h;
        auto w = fd_weights(nodes, 0.0, 1);
        double v = 0.0;
        for (std::size_t k = 0; k < points; ++k) v += w[k] * y[s + k];
        d[i] = v;
    }
    return d;
}

/** @brief Piecewise cubic Hermite through (x_i, y_i) with slopes dy_i. */
class Hermite {
public:
    Hermite() = default;
    Hermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
        : x_(std::move(x)), y_(std::move(y)), d_(std::move(dy)) {
        if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
            throw DomainError("Hermite table needs matching arrays of length >= 2");
    }

    double operator()(double x) const {
        std::size_t i = segment(x);
        double h = x_[i + 1] - x_[i], t = (x - x_[i]) / h;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
               (t3 - t2) * h * d_[i + 1];
    }
    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }
    const std::vector<double>& nodes() const { return x_; }

private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : std::size_t(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }
    std::vector<double> x_, y_, d_;
};

/** @brief Slopes for a Hermite table from 3-point nonuniform differences. */
inline std::vector<double> three_point_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t s = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
        auto w = fd_weights({x[s], x[s + 1], x[s + 2]}, x[i], 1);
        d[i] = w[0] * y[s] + w[1] * y[s + 1] + w[2] * y[s + 2];
    }
    return d;
}

/**
 * @brief Running integral on a uniform grid with an odd number of points:
 * Simpson on each pair of intervals, a 3-point rule for the half steps.
 */
inline std::vector<double> cumulative_simpson(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 3 || n % 2 == 0) throw DomainError("cumulative Simpson needs an odd number (>= 3) of samples");
    std::vector<double> I(n, 0.0);
    for (std::size_t j = 0; j + 2 < n; j += 2) {
        I[j + 1] = I[j] + h / 12.0 * (5 * y[j] + 8 * y[j + 1] - y[j + 2]);
        I[j + 2] = I[j] + h / 3.0 * (y[j] + 4 * y[j + 1] + y[j + 2]);
    }
    return I;
}

/** @brief Ordinary least-squares slope of y against x. */
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace sturmspec::num
