#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "avgcyc/averaging_exact.hpp"
#include "avgcyc/integrand.hpp"
#include "avgcyc/ode.hpp"
#include "avgcyc/series.hpp"
#include "avgcyc/unperturbed.hpp"

namespace avgcyc {

namespace detail {

/// z-Laurent polynomial with double coefficients.
struct CompiledPoly {
    std::vector<std::pair<std::int32_t, double>> terms;
    double eval(double r) const {
        double acc = 0.0;
        for (const auto& [e, c] : terms) acc += c * std::pow(r, e);
        return acc;
    }
};

/// Trig polynomial with numeric z-Laurent coefficients.
struct CompiledTrig {
    struct Term {
        std::int32_t c, s;
        CompiledPoly poly;
    };
    std::vector<Term> terms;
    bool one = false;  // fast path for the constant denominator 1

    double eval(double theta, double r) const {
        if (one) return 1.0;
        double cv = std::cos(theta), sv = std::sin(theta);
        double acc = 0.0;
        for (const auto& t : terms)
            acc += t.poly.eval(r) * std::pow(cv, t.c) * (t.s ? sv : 1.0);
        return acc;
    }
};

inline CompiledTrig compile_trig(const TrigPoly& tp, const std::map<VarId, Rational>& bindings) {
    TrigPoly bound = tp.bind(bindings);
    for (VarId v : bound.free_vars())
        if (v != kVarZ && v != kVarPi) throw UnboundParameter(var_name(v));
    CompiledTrig out;
    for (const auto& [k, p] : bound.terms()) {
        CompiledPoly cp;
        for (const auto& [m, c] : p.terms()) {
            double coef = c.to_double();
            std::int32_t pi_e = m.exponent_of(kVarPi);
            if (pi_e != 0) coef *= std::pow(3.14159265358979323846, pi_e);
            cp.terms.push_back({m.exponent_of(kVarZ), coef});
        }
        out.terms.push_back({k.c, k.s, std::move(cp)});
    }
    if (out.terms.size() == 1 && out.terms[0].c == 0 && out.terms[0].s == 0 &&
        out.terms[0].poly.terms.size() == 1 && out.terms[0].poly.terms[0].first == 0 &&
        out.terms[0].poly.terms[0].second == 1.0)
        out.one = true;
    return out;
}

/// d^m F as N_m / D^(m+1) with N_{m+1} = N_m' D - (m+1) D' N_m.
struct CompiledDerivative {
    CompiledTrig num;
    CompiledTrig den;
    int den_power = 1;
    bool den_one = false;

    double eval(double theta, double r) const {
        double n = num.eval(theta, r);
        if (den_one) return n;
        double d = den.eval(theta, r);
        return n / std::pow(d, den_power);
    }
};

}  // namespace detail

/// Averaged functions evaluated along the closed-form periodic solution by
/// integrating the coupled variational system
///   y_i' = dF_0(theta, r(theta,z)) y_i + [order-i integrand terms],
/// y_i(0) = 0, f_i = y_i(2pi)/i!. Symbolic r-derivatives of the F_j are
/// prepared once; evaluation per z integrates twice (the second time with a
/// 100x tighter tolerance) to attach an error estimate.
class NumericAveraging {
public:
    NumericAveraging(const EpsSeries& series, const PeriodicSolution& sol, int k,
                     const std::map<VarId, Rational>& bindings, const DomainInterval& D,
                     OdeOptions opts = {1e-12, 1e-13, 1000000})
        : k_(k), D_(D), bound_(sol, bindings), opts_(opts) {
        if (k < 1 || k > series.order()) throw Error("NumericAveraging: order out of range");
        dF_.resize(static_cast<std::size_t>(k) + 1);
        for (int j = 0; j <= k; ++j) {
            TrigPoly N = series.F[static_cast<std::size_t>(j)].num();
            TrigPoly Dden = series.F[static_cast<std::size_t>(j)].den();
            bool den_one = series.F[static_cast<std::size_t>(j)].is_polynomial();
            detail::CompiledTrig den_c = detail::compile_trig(Dden, bindings);
            for (int m = 0; m <= k; ++m) {
                detail::CompiledDerivative cd;
                cd.num = detail::compile_trig(N, bindings);
                cd.den = den_c;
                cd.den_power = m + 1;
                cd.den_one = den_one;
                dF_[static_cast<std::size_t>(j)].push_back(std::move(cd));
                // N_{m+1} = N' D - (m+1) D' N
                N = N.derivative_z() * Dden - N * Dden.derivative_z() * Rational(m + 1);
            }
        }
        for (int i = 1; i <= k; ++i) templates_.push_back(integrand_formula(i));
    }

    struct Result {
        std::vector<double> f;  // f[0] unused
        double error_estimate = 0.0;
    };

    Result eval(double z) const {
        if (!D_.contains(z)) throw OutsideDomain("z = " + std::to_string(z));
        std::vector<double> a = integrate(z, opts_);
        OdeOptions tight = opts_;
        tight.rtol *= 0.01;
        tight.atol *= 0.01;
        std::vector<double> b = integrate(z, tight);

        Result res;
        res.f.assign(static_cast<std::size_t>(k_) + 1, 0.0);
        double fac = 1.0;
        for (int i = 1; i <= k_; ++i) {
            fac *= i;
            res.f[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i - 1)] / fac;
            double delta = std::abs(a[static_cast<std::size_t>(i - 1)] - b[static_cast<std::size_t>(i - 1)]) / fac;
            double scale = std::max(std::abs(res.f[static_cast<std::size_t>(i)]), 1.0);
            res.error_estimate = std::max(res.error_estimate, delta / scale);
        }
        if (res.error_estimate > 1e-10)
            throw StiffnessFailure("error estimate " + std::to_string(res.error_estimate) +
                                   " exceeds 1e-10 at z = " + std::to_string(z));
        return res;
    }

    const DomainInterval& domain() const { return D_; }
    const BoundSolution& solution() const { return bound_; }

private:
    std::vector<double> integrate(double z, const OdeOptions& opts) const {
        auto rhs = [&](double theta, const double* y, double* dy) {
            double r = bound_.r(theta, z);
            double dF0 = dF_[0][1].eval(theta, r);
            for (int i = 1; i <= k_; ++i) {
                double acc = dF0 * y[i - 1];
                for (const auto& term : templates_[static_cast<std::size_t>(i - 1)].terms) {
                    double v = static_cast<double>(term.coeff) *
                               dF_[static_cast<std::size_t>(term.f_index)]
                                  [static_cast<std::size_t>(term.deriv_order)].eval(theta, r);
                    for (std::size_t yi = 0; yi < term.y_exps.size(); ++yi)
                        for (std::int32_t e = 0; e < term.y_exps[yi]; ++e) v *= y[yi];
                    acc += v;
                }
                dy[i - 1] = acc;
            }
        };
        constexpr double two_pi = 6.283185307179586476925286766559;
        return integrate_dopri5(rhs, 0.0, two_pi,
                                std::vector<double>(static_cast<std::size_t>(k_), 0.0), opts);
    }

    int k_;
    DomainInterval D_;
    BoundSolution bound_;
    OdeOptions opts_;
    std::vector<std::vector<detail::CompiledDerivative>> dF_;
    std::vector<IntegrandTemplate> templates_;
};

/// One-shot convenience wrapper.
inline NumericAveraging::Result averaged_numeric(const EpsSeries& series,
                                                 const PeriodicSolution& sol, int k, double z,
                                                 const std::map<VarId, Rational>& bindings,
                                                 const DomainInterval& D) {
    return NumericAveraging(series, sol, k, bindings, D).eval(z);
}

}  // namespace avgcyc
