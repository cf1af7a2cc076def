#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "avgcyc/errors.hpp"

namespace avgcyc {

/// One certified zero of an averaged function.
struct ZeroRecord {
    double location = 0.0;
    double derivative = 0.0;  // central-difference estimate of f'
    bool simple = false;      // |f'| clears the simplicity threshold
};

/// Result of scanning an averaged function for simple zeros on D.
struct ZeroReport {
    int order = 0;  // index j of the first non-vanishing averaged function
    std::vector<ZeroRecord> zeros;
    std::vector<double> tangency_candidates;  // |f| dips below tol without a sign change
    bool identically_zero = false;

    int simple_count() const {
        int n = 0;
        for (const auto& zr : zeros)
            if (zr.simple) ++n;
        return n;
    }
};

/// Sign-scan + bisection + Newton polish over a uniform grid on
/// [lo + delta, hi - delta] with delta = 1e-3 (hi - lo). Brackets are refined
/// to width 1e-12; simplicity requires |f'(z*)| > 1e3 * tol. If two adjacent
/// cells both bracket a sign change the grid is doubled once.
inline ZeroReport numeric_zero_scan(const std::function<double(double)>& f, double lo, double hi,
                                    int grid_size = 2048, double tol = 1e-10) {
    ZeroReport report;
    if (!(hi > lo)) throw Error("numeric_zero_scan: empty interval");

    auto run = [&](int n, ZeroReport& rep) -> bool {
        rep.zeros.clear();
        rep.tangency_candidates.clear();
        double delta = 1e-3 * (hi - lo);
        double a = lo + delta, b = hi - delta;
        std::vector<double> xs(static_cast<std::size_t>(n) + 1), fs(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            xs[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / n;
            fs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
        }
        double fmax = 0.0;
        for (double v : fs) fmax = std::max(fmax, std::abs(v));
        if (fmax <= tol) {
            rep.identically_zero = true;
            return true;
        }
        bool prev_bracket = false;
        for (int i = 0; i <= n; ++i) {
            // a zero sitting exactly on a grid node never produces a strict
            // sign change; classify it by the derivative: without clearance
            // there is no sign-change certificate, only a tangency candidate
            if (i > 0 && i < n && fs[static_cast<std::size_t>(i)] == 0.0) {
                double zv = xs[static_cast<std::size_t>(i)];
                double h = 1e-7 * std::max(1.0, std::abs(zv));
                double deriv = (f(zv + h) - f(zv - h)) / (2 * h);
                if (std::abs(deriv) > 1e3 * tol) {
                    rep.zeros.push_back({zv, deriv, true});
                } else {
                    rep.tangency_candidates.push_back(zv);
                }
            }
            if (i == n) break;
            double f0 = fs[static_cast<std::size_t>(i)], f1 = fs[static_cast<std::size_t>(i) + 1];
            bool bracket = (f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0);
            if (bracket && prev_bracket) return false;  // adjacent brackets: refine the grid
            if (bracket) {
                double x0 = xs[static_cast<std::size_t>(i)], x1 = xs[static_cast<std::size_t>(i) + 1];
                double g0 = f0;
                while (x1 - x0 > 1e-12) {
                    double mid = 0.5 * (x0 + x1);
                    double gm = f(mid);
                    if (gm == 0.0) {
                        x0 = x1 = mid;
                        break;
                    }
                    if ((g0 < 0) == (gm < 0)) {
                        x0 = mid;
                        g0 = gm;
                    } else {
                        x1 = mid;
                    }
                }
                double z = 0.5 * (x0 + x1);
                // Newton polish with central-difference derivative
                double h = 1e-7 * std::max(1.0, std::abs(z));
                for (int it = 0; it < 3; ++it) {
                    double d = (f(z + h) - f(z - h)) / (2 * h);
                    if (d == 0.0) break;
                    double step = f(z) / d;
                    double znew = z - step;
                    if (znew <= lo || znew >= hi) break;
                    z = znew;
                    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) break;
                }
                ZeroRecord zr;
                zr.location = z;
                zr.derivative = (f(z + h) - f(z - h)) / (2 * h);
                zr.simple = std::abs(zr.derivative) > 1e3 * tol;
                rep.zeros.push_back(zr);
            } else if (i > 0 && i < n - 1) {
                // near-tangency: local minimum of |f| below tol, no sign change
                double m0 = std::abs(fs[static_cast<std::size_t>(i) - 1]),
                       m1 = std::abs(fs[static_cast<std::size_t>(i)]),
                       m2 = std::abs(fs[static_cast<std::size_t>(i) + 1]);
                if (m1 <= tol && m1 <= m0 && m1 <= m2)
                    rep.tangency_candidates.push_back(xs[static_cast<std::size_t>(i)]);
            }
            prev_bracket = bracket;
        }
        return true;
    };

    if (!run(grid_size, report)) {
        ZeroReport doubled;
        run(2 * grid_size, doubled);  // second pass is final either way
        return doubled;
    }
    return report;
}

}  // namespace avgcyc
