#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "avgcyc/mixedtrig.hpp"
#include "avgcyc/series.hpp"

namespace avgcyc {

/// Separable unperturbed term F_0(theta, r) = g(theta) * r^m, together with
/// the antiderivative G of g normalized by G(0) = 0.
struct SeparableUnperturbed {
    int m = 0;
    TrigPoly g;
    MixedTrigPoly G;
};

/// Splits F_0 into g(theta) * r^m. Fails when F_0 has a nontrivial
/// denominator or mixes powers of r.
inline SeparableUnperturbed classify_separable(const TrigRational& F0) {
    if (!F0.is_polynomial()) throw NotSeparable("nontrivial denominator");
    SeparableUnperturbed sep;
    if (F0.is_zero()) {
        sep.m = 0;
        sep.g = TrigPoly::zero();
        sep.G = MixedTrigPoly();
        return sep;
    }
    std::optional<std::int32_t> power;
    TrigPoly g;
    for (const auto& [k, p] : F0.num().terms()) {
        auto dr = p.degree_range(kVarZ);
        if (dr->first != dr->second)
            throw NotSeparable("coefficient of C^" + std::to_string(k.c) + " S^" +
                               std::to_string(k.s) + " mixes r-powers");
        if (power && *power != dr->first) throw NotSeparable("terms carry different r-powers");
        power = dr->first;
        g.add_reduced(k, p.coeff_of(kVarZ, dr->first));
    }
    if (*power < 0) throw NotSeparable("negative r-power");
    sep.m = *power;
    sep.g = g;
    sep.G = trig_antiderivative(MixedTrigPoly::from_trig(g));
    return sep;
}

enum class SolutionForm { Additive, Exponential, Radical };

/// Exact power of a rational: radicand^(1/root).
struct RationalPower {
    Rational radicand;
    unsigned root = 1;
    double value() const { return std::pow(radicand.to_double(), 1.0 / static_cast<double>(root)); }
    std::string str() const {
        return "(" + radicand.str() + ")^(1/" + std::to_string(root) + ")";
    }
};

/// Admissibility interval (z_lo, z_hi), open at both ends; z_hi may be
/// infinite. When the maximizer of G sits on a quarter angle the upper end is
/// also known exactly as a rational power.
struct DomainInterval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::optional<RationalPower> hi_exact;
    bool hi_finite() const { return std::isfinite(hi); }
    bool contains(double zv) const { return zv > lo && zv < hi; }
};

/// Closed-form 2pi-periodic solution family of dr/dtheta = g(theta) r^m with
/// r(0, z) = z, plus the fundamental solution of the variational equation:
///   m = 0:  r = z + G(theta),                        Y = 1
///   m = 1:  r = z e^G(theta),                        Y = e^G(theta)
///   m >= 2: r = z (1 - (m-1) z^(m-1) G(theta))^(-1/(m-1)),
///           Y =   (1 - (m-1) z^(m-1) G(theta))^(-m/(m-1))
struct PeriodicSolution {
    SolutionForm form = SolutionForm::Additive;
    int m = 0;
    MixedTrigPoly G;  // symbolic; may carry parameters

    /// Radicand template for the m >= 2 branch: 1 - (m-1) z^(m-1) G(theta).
    MixedTrigPoly radical_base() const {
        if (form != SolutionForm::Radical) throw Error("radical_base: not a radical solution");
        MixedTrigPoly base = MixedTrigPoly::constant(ParamPoly::constant(Rational(1)));
        ParamPoly zfac = ParamPoly::term(Monomial::var(kVarZ, m - 1), Rational(-(m - 1)));
        base += G * zfac;
        return base;
    }

    /// Exponents of the radical branch as rationals: r carries
    /// -1/(m-1), Y carries -m/(m-1).
    Rational r_exponent() const { return Rational(-1, m - 1); }
    Rational Y_exponent() const { return Rational(-m, m - 1); }
};

inline PeriodicSolution solve_unperturbed(const SeparableUnperturbed& sep) {
    PeriodicSolution sol;
    sol.m = sep.m;
    sol.G = sep.G;
    // dG/dtheta = g must hold exactly by construction of G; re-check since G
    // may have been supplied by the caller.
    if (sep.G.derivative_theta() != MixedTrigPoly::from_trig(sep.g))
        throw Error("solve_unperturbed: G is not an antiderivative of g");
    ParamPoly at2pi = sep.G.value_at_two_pi();
    if (!sep.g.is_zero() && !at2pi.is_zero())
        throw NotPeriodic("G(2pi) = " + at2pi.to_string() + " != 0");
    if (sep.m == 0)
        sol.form = SolutionForm::Additive;
    else if (sep.m == 1)
        sol.form = SolutionForm::Exponential;
    else
        sol.form = SolutionForm::Radical;
    return sol;
}

/// Numerically bound periodic solution: fast r/Y evaluators for concrete
/// parameter values, plus the admissibility interval.
class BoundSolution {
public:
    BoundSolution(const PeriodicSolution& sol, const std::map<VarId, Rational>& bindings)
        : form_(sol.form), m_(sol.m) {
        MixedTrigPoly G = sol.G.bind(bindings);
        for (VarId v : G.free_vars())
            if (v != kVarPi) throw UnboundParameter(var_name(v));
        for (const auto& [k, p] : G.terms())
            gterms_.push_back({k.t, k.c, k.s, p.eval({})});
        Gexact_ = G;
    }

    double G_at(double theta) const {
        double c = std::cos(theta), s = std::sin(theta);
        double acc = 0.0;
        for (const auto& t : gterms_)
            acc += t.coef * std::pow(theta, t.t) * std::pow(c, t.c) * (t.s ? s : 1.0);
        return acc;
    }

    double r(double theta, double zv) const {
        switch (form_) {
            case SolutionForm::Additive: return zv + G_at(theta);
            case SolutionForm::Exponential: return zv * std::exp(G_at(theta));
            case SolutionForm::Radical: {
                double base = 1.0 - (m_ - 1) * std::pow(zv, m_ - 1) * G_at(theta);
                return zv * std::pow(base, -1.0 / (m_ - 1));
            }
        }
        return 0.0;
    }

    double Y(double theta, double zv) const {
        switch (form_) {
            case SolutionForm::Additive: return 1.0;
            case SolutionForm::Exponential: return std::exp(G_at(theta));
            case SolutionForm::Radical: {
                double base = 1.0 - (m_ - 1) * std::pow(zv, m_ - 1) * G_at(theta);
                return std::pow(base, -static_cast<double>(m_) / (m_ - 1));
            }
        }
        return 0.0;
    }

    int m() const { return m_; }
    SolutionForm form() const { return form_; }
    const MixedTrigPoly& G_exact() const { return Gexact_; }

private:
    struct GTerm {
        std::int32_t t, c, s;
        double coef;
    };
    SolutionForm form_;
    int m_;
    std::vector<GTerm> gterms_;
    MixedTrigPoly Gexact_;
};

namespace detail {

/// Extrema of G over [0, 2pi]: sample g = G' on a uniform grid, bracket sign
/// changes, refine by bisection, and evaluate G at the refined critical
/// points plus the endpoints.
struct GExtrema {
    double min_value, max_value;
    double argmax;
};

inline GExtrema find_g_extrema(const BoundSolution& bound, const TrigPoly& g_bound_free,
                               const std::map<VarId, double>& values, int grid = 4096) {
    auto gval = [&](double th) { return g_bound_free.eval(th, values); };
    constexpr double two_pi = 6.283185307179586476925286766559;
    GExtrema ex{bound.G_at(0.0), bound.G_at(0.0), 0.0};
    auto consider = [&](double th) {
        double v = bound.G_at(th);
        if (v > ex.max_value) {
            ex.max_value = v;
            ex.argmax = th;
        }
        if (v < ex.min_value) ex.min_value = v;
    };
    consider(two_pi);
    double prev = gval(0.0);
    double prev_th = 0.0;
    for (int i = 1; i <= grid; ++i) {
        double th = two_pi * static_cast<double>(i) / grid;
        double cur = gval(th);
        if (prev == 0.0) consider(prev_th);
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
            double a = prev_th, b = th, fa = prev;
            // bisect to ~1e-14 absolute width
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (a + b);
                double fm = gval(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if (b - a < 1e-14) break;
            }
            consider(0.5 * (a + b));
        }
        prev = cur;
        prev_th = th;
    }
    return ex;
}

}  // namespace detail

/// Admissibility interval for the solved family with parameters bound:
///   m >= 2: z_hi = ((m-1) G_max)^(-1/(m-1)) when G_max > 0, else infinity
///   m = 1:  (0, infinity)
///   m = 0:  (max(0, -G_min), infinity)
inline DomainInterval domain_interval(const SeparableUnperturbed& sep,
                                      const std::map<VarId, Rational>& bindings) {
    PeriodicSolution sol;
    sol.m = sep.m;
    sol.G = sep.G;
    sol.form = sep.m == 0   ? SolutionForm::Additive
               : sep.m == 1 ? SolutionForm::Exponential
                            : SolutionForm::Radical;
    BoundSolution bound(sol, bindings);

    TrigPoly g_bound = sep.g.bind(bindings);
    for (VarId v : g_bound.free_vars())
        if (v != kVarPi) throw UnboundParameter(var_name(v));

    DomainInterval D;
    if (sep.m <= 1) {
        if (sep.m == 0) {
            auto ex = detail::find_g_extrema(bound, g_bound, {});
            D.lo = std::max(0.0, -ex.min_value);
        }
        return D;
    }

    auto ex = detail::find_g_extrema(bound, g_bound, {});
    if (ex.max_value <= 0.0) return D;  // radicand >= 1 for every z > 0

    D.hi = std::pow((sep.m - 1) * ex.max_value, -1.0 / (sep.m - 1));

    // exact recognition: maximizer on a quarter angle, where G is rational
    MixedTrigPoly Gb = sep.G.bind(bindings);
    constexpr double quarter = 1.5707963267948966192313216916398;
    for (int qi = 0; qi < 4; ++qi) {
        if (std::abs(ex.argmax - qi * quarter) > 1e-9) continue;
        // exact G at the quarter angle: C,S in {0, +-1}; theta powers vanish
        // only at qi = 0, so require a theta-free G for qi > 0
        bool theta_free = true;
        Rational exact(0);
        int cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        for (const auto& [k, p] : Gb.terms()) {
            if (k.t > 0) {
                theta_free = false;
                break;
            }
            int cv = cs[qi][0], sv = cs[qi][1];
            Rational factor(1);
            if (k.c > 0) {
                if (cv == 0) continue;
                factor = Rational(cv).pow(k.c);
            }
            if (k.s > 0) {
                if (sv == 0) continue;
                factor = factor * Rational(sv);
            }
            exact += p.constant_value() * factor;
        }
        if (!theta_free) break;
        if (std::abs(exact.to_double() - ex.max_value) <= 1e-12 * std::max(1.0, std::abs(ex.max_value))) {
            Rational rad = (Rational(sep.m - 1) * exact).inv();
            D.hi_exact = RationalPower{rad, static_cast<unsigned>(sep.m - 1)};
            D.hi = D.hi_exact->value();
        }
        break;
    }
    return D;
}

}  // namespace avgcyc
