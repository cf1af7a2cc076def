#pragma once

#include "avgcyc/series.hpp"
#include "avgcyc/system.hpp"

namespace avgcyc {

/// The two polar parts of dr/dtheta = d1/d2, as series in the perturbation
/// parameter:
///   d1 = [x(P+p) + y(Q+q)] / r,   d2 = [x(Q+q) - y(P+p)] / r^2
/// under x = r C, y = r S. A monomial x^i y^j maps to r^(i+j) C^i S^j, so d1
/// is polynomial in r while d2 picks up r^-1 terms exactly when a
/// perturbation has a constant term; both are carried as Laurent
/// coefficients in z (standing for r).
struct PolarParts {
    PolySeries d1, d2;
};

namespace detail {

inline TrigPoly to_polar(const PolyXY& f, std::int32_t r_shift) {
    TrigPoly out;
    for (const auto& [k, c] : f.terms()) {
        std::int32_t deg = k.first + k.second + r_shift;
        out.add_raw(k.first, k.second, c.times_monomial(Monomial::var(kVarZ, deg)));
    }
    return out;
}

}  // namespace detail

inline PolarParts polar_substitute(const SystemSpec& spec) {
    spec.validate();
    PolarParts parts;
    // eps^0: the center itself
    parts.d1.c.push_back(detail::to_polar(spec.P.shifted(1, 0) + spec.Q.shifted(0, 1), -1));
    parts.d2.c.push_back(detail::to_polar(spec.Q.shifted(1, 0) - spec.P.shifted(0, 1), -2));
    for (int i = 0; i < spec.order; ++i) {
        const PolyXY& pi = spec.p[static_cast<std::size_t>(i)];
        const PolyXY& qi = spec.q[static_cast<std::size_t>(i)];
        parts.d1.c.push_back(detail::to_polar(pi.shifted(1, 0) + qi.shifted(0, 1), -1));
        parts.d2.c.push_back(detail::to_polar(qi.shifted(1, 0) - pi.shifted(0, 1), -2));
    }
    return parts;
}

/// Truncated normal form of averaging: F_i is the i-th coefficient of the
/// series expansion of d1/d2 around eps = 0, each reduced to sin-degree <= 1
/// in numerator and denominator. Parameters stay symbolic.
inline EpsSeries normal_form(const SystemSpec& spec) {
    PolarParts parts = polar_substitute(spec);
    return series_quotient(parts.d1, parts.d2, spec.order);
}

}  // namespace avgcyc
