#pragma once

#include <string>
#include <vector>

#include "avgcyc/trigpoly.hpp"

namespace avgcyc {

/// Ratio of two trig polynomials. Simplification absorbs single-term
/// denominators that are free of C and S (e.g. r^2) into the Laurent
/// numerator, and cancels common rational/z-power content otherwise.
class TrigRational {
public:
    TrigRational()
        : num_(TrigPoly::zero()), den_(TrigPoly::constant(ParamPoly::constant(Rational(1)))) {}

    TrigRational(TrigPoly num, TrigPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error("TrigRational: zero denominator");
        simplify();
    }

    static TrigRational from_poly(TrigPoly p) {
        return TrigRational(std::move(p), TrigPoly::constant(ParamPoly::constant(Rational(1))));
    }

    const TrigPoly& num() const { return num_; }
    const TrigPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    bool is_polynomial() const {
        if (den_.terms().size() != 1) return false;
        const auto& [k, p] = *den_.terms().begin();
        return k.c == 0 && k.s == 0 && p == ParamPoly::constant(Rational(1));
    }

    TrigRational substitute(VarId v, const ParamPoly& rhs) const {
        return TrigRational(num_.substitute(v, rhs), den_.substitute(v, rhs));
    }

    TrigRational bind(const std::map<VarId, Rational>& values) const {
        return TrigRational(num_.bind(values), den_.bind(values));
    }

    double eval(double theta, const std::map<VarId, double>& values) const {
        return num_.eval(theta, values) / den_.eval(theta, values);
    }

    friend bool operator==(const TrigRational& a, const TrigRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string to_string() const {
        if (is_polynomial()) return num_.to_string();
        return "[" + num_.to_string() + "] / [" + den_.to_string() + "]";
    }

private:
    void simplify() {
        if (num_.is_zero()) {
            den_ = TrigPoly::constant(ParamPoly::constant(Rational(1)));
            return;
        }
        // single-term denominator without trig factors: absorb into numerator
        if (den_.terms().size() == 1) {
            const auto& [k, p] = *den_.terms().begin();
            if (k.c == 0 && k.s == 0 && p.is_single_term()) {
                num_ = multiply_coeffs(num_, inverse_of(p));
                den_ = TrigPoly::constant(ParamPoly::constant(Rational(1)));
                return;
            }
        }
        // otherwise cancel common z-power and rational content
        auto [nz, nc] = content(num_);
        auto [dz, dc] = content(den_);
        std::int32_t zshift = std::min(nz, dz);
        Rational scale = dc;  // normalize so the denominator has content 1
        if (zshift != 0 || !scale.is_one()) {
            ParamPoly factor =
                ParamPoly::term(Monomial::var(kVarZ, -zshift), scale.inv());
            num_ = multiply_coeffs(num_, factor);
            den_ = multiply_coeffs(den_, factor);
        }
    }

    static ParamPoly inverse_of(const ParamPoly& single) {
        const auto& [m, c] = *single.terms().begin();
        return ParamPoly::term(m.inverse(), c.inv());
    }

    static TrigPoly multiply_coeffs(const TrigPoly& t, const ParamPoly& f) { return t * f; }

    /// (common z-power, positive rational content) over all coefficients.
    static std::pair<std::int32_t, Rational> content(const TrigPoly& t) {
        bool first = true;
        std::int32_t zmin = 0;
        mpz_class gnum = 0, gden = 1;
        for (const auto& [k, p] : t.terms()) {
            for (const auto& [m, c] : p.terms()) {
                std::int32_t ze = m.exponent_of(kVarZ);
                if (first) {
                    zmin = ze;
                    first = false;
                } else {
                    zmin = std::min(zmin, ze);
                }
                mpz_class n = c.num() < 0 ? mpz_class(-c.num()) : c.num();
                mpz_gcd(gnum.get_mpz_t(), gnum.get_mpz_t(), n.get_mpz_t());
                mpz_lcm(gden.get_mpz_t(), gden.get_mpz_t(), c.den().get_mpz_t());
            }
        }
        if (gnum == 0) gnum = 1;
        return {zmin, Rational(mpq_class(gnum, gden))};
    }

    TrigPoly num_, den_;
};

/// Truncated power series in the perturbation parameter with TrigPoly
/// coefficients (used for the two polar parts before the quotient).
struct PolySeries {
    std::vector<TrigPoly> c;  // c[i] multiplies eps^i
    int order() const { return static_cast<int>(c.size()) - 1; }
};

/// Truncated normal form: dr/dtheta = sum eps^i F[i] + O(eps^(k+1)).
struct EpsSeries {
    std::vector<TrigRational> F;  // F[0..k]
    int order() const { return static_cast<int>(F.size()) - 1; }
};

/// Coefficientwise series quotient through order k. Denominators of the
/// result are powers of the leading denominator coefficient:
///   F_i = (numer_i - sum_{j<i} F_j * denom_{i-j}) / denom_0.
inline EpsSeries series_quotient(const PolySeries& numer, const PolySeries& denom, int k) {
    if (denom.c.empty() || denom.c[0].is_zero()) throw ZeroLeadingDenominator();
    const TrigPoly& d0 = denom.c[0];

    auto num_at = [&](int i) -> TrigPoly {
        return i < static_cast<int>(numer.c.size()) ? numer.c[i] : TrigPoly::zero();
    };
    auto den_at = [&](int i) -> TrigPoly {
        return i < static_cast<int>(denom.c.size()) ? denom.c[i] : TrigPoly::zero();
    };

    std::vector<TrigPoly> d0pow(static_cast<std::size_t>(k) + 2);
    d0pow[0] = TrigPoly::constant(ParamPoly::constant(Rational(1)));
    for (int i = 1; i <= k + 1; ++i) d0pow[i] = d0pow[i - 1] * d0;

    // N_i over d0^(i+1): N_i = numer_i d0^i - sum_{j<i} N_j denom_{i-j} d0^(i-1-j)
    std::vector<TrigPoly> N(static_cast<std::size_t>(k) + 1);
    EpsSeries out;
    for (int i = 0; i <= k; ++i) {
        TrigPoly acc = num_at(i) * d0pow[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j)
            acc -= N[static_cast<std::size_t>(j)] * den_at(i - j) *
                   d0pow[static_cast<std::size_t>(i - 1 - j)];
        N[static_cast<std::size_t>(i)] = acc;
        out.F.emplace_back(acc, d0pow[static_cast<std::size_t>(i) + 1]);
    }
    return out;
}

}  // namespace avgcyc
