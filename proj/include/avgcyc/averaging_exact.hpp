#pragma once

#include <string>
#include <vector>

#include "avgcyc/integrand.hpp"
#include "avgcyc/mixedtrig.hpp"
#include "avgcyc/series.hpp"

namespace avgcyc {

/// Exact averaged functions for a vanishing unperturbed term (F_0 = 0, hence
/// r(theta,z) = z and Y = 1): y_i as mixed trig polynomials and
/// f_i = y_i(2pi, z) / i! as polynomials in z, parameters and pi.
struct ExactAveraged {
    std::vector<MixedTrigPoly> y;  // y[0] unused; y[i] for i = 1..k
    std::vector<ParamPoly> f;      // f[0] unused; f[i] for i = 1..k
};

inline ExactAveraged averaged_exact(const EpsSeries& series, int k) {
    if (k < 1 || k > series.order()) throw Error("averaged_exact: order out of range");
    if (!series.F[0].is_zero()) throw NonzeroUnperturbed();
    for (int i = 1; i <= k; ++i)
        if (!series.F[static_cast<std::size_t>(i)].is_polynomial())
            throw Error("averaged_exact: F_" + std::to_string(i) + " has a nontrivial denominator");

    // d^m F_j as mixed trig polynomials with r = z (identical variables here)
    std::vector<std::vector<MixedTrigPoly>> dF(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
        TrigPoly base = series.F[static_cast<std::size_t>(j)].num();
        dF[static_cast<std::size_t>(j)].push_back(MixedTrigPoly::from_trig(base));
        for (int m = 1; m <= k; ++m) {
            base = base.derivative_z();
            dF[static_cast<std::size_t>(j)].push_back(MixedTrigPoly::from_trig(base));
        }
    }

    ExactAveraged out;
    out.y.resize(static_cast<std::size_t>(k) + 1);
    out.f.resize(static_cast<std::size_t>(k) + 1);
    for (int i = 1; i <= k; ++i) {
        IntegrandTemplate tmpl = integrand_formula(i);
        MixedTrigPoly integrand;
        for (const auto& term : tmpl.terms) {
            if (term.f_index == 0) continue;  // F_0 = 0 kills its Bell block
            MixedTrigPoly prod = dF[static_cast<std::size_t>(term.f_index)]
                                   [static_cast<std::size_t>(term.deriv_order)];
            for (std::size_t yi = 0; yi < term.y_exps.size(); ++yi)
                for (std::int32_t e = 0; e < term.y_exps[yi]; ++e)
                    prod = prod * out.y[yi + 1];
            integrand += prod * Rational(term.coeff);
        }
        out.y[static_cast<std::size_t>(i)] = trig_antiderivative(integrand);
        Rational inv_fac = Rational(1) / Rational::factorial(static_cast<unsigned>(i));
        out.f[static_cast<std::size_t>(i)] =
            out.y[static_cast<std::size_t>(i)].value_at_two_pi() * inv_fac;
    }
    return out;
}

/// One ordered parameter assignment of a substitution script. The replacement
/// is one-shot and simultaneous per assignment, so the right-hand side may
/// mention the substituted parameter itself.
struct Substitution {
    VarId param;
    ParamPoly rhs;
};

inline EpsSeries apply_substitutions(const EpsSeries& series,
                                     const std::vector<Substitution>& subs) {
    EpsSeries out = series;
    for (const auto& s : subs) {
        if (s.param == kVarZ || s.param == kVarPi)
            throw UnknownParameter(var_name(s.param) + " (not a system parameter)");
        bool occurs = false;
        for (const auto& F : out.F) {
            if (F.num().free_vars().count(s.param) || F.den().free_vars().count(s.param)) {
                occurs = true;
                break;
            }
        }
        if (!occurs) throw UnknownParameter(var_name(s.param));
        for (auto& F : out.F) F = F.substitute(s.param, s.rhs);
    }
    return out;
}

}  // namespace avgcyc
