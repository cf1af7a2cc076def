#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "avgcyc/errors.hpp"

namespace avgcyc {

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-13;
    std::size_t max_steps = 1000000;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = f(t, y) from t0 to t1
/// (t1 > t0). f has signature void(double t, const double* y, double* dy).
/// Throws StiffnessFailure when the step size underflows or the step budget
/// is exhausted.
template <class F>
std::vector<double> integrate_dopri5(F&& f, double t0, double t1, std::vector<double> y,
                                     const OdeOptions& opt = {}) {
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
    // embedded 4th-order weights
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n);

    double t = t0;
    double h = (t1 - t0) / 100.0;
    const double hmin = (t1 - t0) * 1e-14;
    std::size_t steps = 0;
    bool fsal_valid = false;

    while (t < t1) {
        if (++steps > opt.max_steps) throw StiffnessFailure("step budget exhausted");
        h = std::min(h, t1 - t);

        if (!fsal_valid) f(t, y.data(), k1.data());
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, yt.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, yt.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, yt.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, yt.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, yt.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5.data(), k7.data());

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            double d = (y5[i] - y4) / scale;
            err += d * d;
        }
        err = std::sqrt(err / static_cast<double>(n ? n : 1));

        if (err <= 1.0) {
            t += h;
            y.swap(y5);
            k1.swap(k7);  // first-same-as-last
            fsal_valid = true;
        } else {
            fsal_valid = false;
        }
        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < hmin && t < t1) throw StiffnessFailure("step size underflow");
    }
    return y;
}

}  // namespace avgcyc
