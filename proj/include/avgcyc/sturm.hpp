#pragma once

#include <optional>
#include <vector>

#include "avgcyc/parampoly.hpp"

namespace avgcyc {

/// Dense univariate polynomial with rational coefficients.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static RatPoly from_univariate(const ParamPoly& p, VarId v = kVarZ) {
        std::vector<Rational> c;
        for (const auto& [m, coef] : p.terms()) {
            auto [rest, e] = m.split(v);
            if (!rest.is_constant())
                throw Error("RatPoly: polynomial is not univariate in " + var_name(v));
            if (e < 0) throw Error("RatPoly: negative exponent");
            if (static_cast<std::size_t>(e) >= c.size()) c.resize(static_cast<std::size_t>(e) + 1);
            c[static_cast<std::size_t>(e)] += coef;
        }
        return RatPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& leading() const { return c_.back(); }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double eval(double x) const {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_double();
        return acc;
    }

    RatPoly derivative() const {
        if (c_.size() <= 1) return RatPoly();
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
        return RatPoly(std::move(d));
    }

    friend RatPoly operator-(const RatPoly& a) {
        std::vector<Rational> c = a.c_;
        for (auto& x : c) x = -x;
        return RatPoly(std::move(c));
    }

    friend RatPoly operator*(const RatPoly& a, const Rational& s) {
        std::vector<Rational> c = a.c_;
        for (auto& x : c) x *= s;
        return RatPoly(std::move(c));
    }

    /// Euclidean remainder of *this by b.
    RatPoly rem(const RatPoly& b) const {
        if (b.is_zero()) throw ZeroPolynomial();
        std::vector<Rational> r = c_;
        while (static_cast<int>(r.size()) - 1 >= b.degree()) {
            while (!r.empty() && r.back().is_zero()) r.pop_back();
            if (static_cast<int>(r.size()) - 1 < b.degree()) break;
            Rational q = r.back() / b.leading();
            std::size_t shift = r.size() - b.c_.size();
            for (std::size_t i = 0; i < b.c_.size(); ++i) r[shift + i] -= q * b.c_[i];
            r.pop_back();
        }
        return RatPoly(std::move(r));
    }

    /// Exact quotient; throws when the division leaves a remainder.
    RatPoly div_exact(const RatPoly& b) const {
        if (b.is_zero()) throw ZeroPolynomial();
        std::vector<Rational> r = c_;
        std::vector<Rational> q(std::max<std::size_t>(1, r.size() >= b.c_.size() ? r.size() - b.c_.size() + 1 : 1),
                                Rational(0));
        while (static_cast<int>(r.size()) - 1 >= b.degree()) {
            while (!r.empty() && r.back().is_zero()) r.pop_back();
            if (static_cast<int>(r.size()) - 1 < b.degree()) break;
            Rational qc = r.back() / b.leading();
            std::size_t shift = r.size() - b.c_.size();
            q[shift] = qc;
            for (std::size_t i = 0; i < b.c_.size(); ++i) r[shift + i] -= qc * b.c_[i];
            r.pop_back();
        }
        for (const auto& x : r)
            if (!x.is_zero()) throw Error("RatPoly: division is not exact");
        return RatPoly(std::move(q));
    }

    /// Monic gcd via the Euclidean algorithm.
    static RatPoly gcd(RatPoly a, RatPoly b) {
        while (!b.is_zero()) {
            RatPoly r = a.rem(b);
            a = std::move(b);
            b = std::move(r);
        }
        if (a.is_zero()) return a;
        return a * a.leading().inv();
    }

    RatPoly squarefree_part() const {
        if (is_zero()) throw ZeroPolynomial();
        RatPoly g = gcd(*this, derivative());
        if (g.degree() <= 0) return *this;
        return div_exact(g);
    }

    /// Cauchy root bound: every real root has |x| < 1 + max |a_i / a_n|.
    Rational cauchy_bound() const {
        if (is_zero()) throw ZeroPolynomial();
        Rational mx(0);
        for (std::size_t i = 0; i + 1 < c_.size(); ++i) {
            Rational v = (c_[i] / leading()).abs();
            if (v > mx) mx = v;
        }
        return mx + Rational(1);
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Endpoint of a counting interval: finite rational or +/- infinity.
struct Bound {
    enum Kind { Finite, NegInf, PosInf } kind = Finite;
    Rational value;
    static Bound finite(Rational v) { return {Finite, std::move(v)}; }
    static Bound neg_inf() { return {NegInf, Rational(0)}; }
    static Bound pos_inf() { return {PosInf, Rational(0)}; }
};

namespace detail {

inline int sign_at(const RatPoly& p, const Bound& b) {
    if (p.is_zero()) return 0;
    switch (b.kind) {
        case Bound::Finite: return p.eval(b.value).sign();
        case Bound::PosInf: return p.leading().sign();
        case Bound::NegInf: return p.degree() % 2 == 0 ? p.leading().sign() : -p.leading().sign();
    }
    return 0;
}

inline int sign_variations(const std::vector<RatPoly>& chain, const Bound& b) {
    int vars = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sign_at(p, b);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

}  // namespace detail

/// Number of distinct real roots of p in (lo, hi], by Sturm's theorem over
/// exact rational arithmetic (the chain is built on the squarefree part, so
/// multiple roots are counted once).
inline int sturm_count(const RatPoly& p, const Bound& lo, const Bound& hi) {
    if (p.is_zero()) throw ZeroPolynomial();
    RatPoly q = p.squarefree_part();
    if (q.degree() == 0) return 0;
    std::vector<RatPoly> chain{q, q.derivative()};
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        RatPoly r = -(chain[chain.size() - 2].rem(chain.back()));
        if (r.is_zero()) break;
        // normalize to keep coefficient growth down; positive scaling
        // preserves the sign pattern
        r = r * r.leading().abs().inv();
        chain.push_back(std::move(r));
    }
    return detail::sign_variations(chain, lo) - detail::sign_variations(chain, hi);
}

inline int sturm_count(const RatPoly& p, const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw Error("sturm_count: need lo < hi");
    return sturm_count(p, Bound::finite(lo), Bound::finite(hi));
}

/// Root-counting result for an exact averaged function restricted to the
/// admissibility interval.
struct SimpleRootCount {
    bool identically_zero = false;
    int count = 0;           // simple positive roots
    int distinct_total = 0;  // all distinct positive roots (simple or not)
};

/// Counts simple roots of f = pi * z^a * P(z) on (0, hi) (hi rational or
/// infinite). Distinct roots come from the squarefree part; roots shared with
/// gcd(P, P') are multiple and excluded.
inline SimpleRootCount count_simple_positive(const ParamPoly& f,
                                             const Bound& hi = Bound::pos_inf()) {
    SimpleRootCount out;
    if (f.is_zero()) {
        out.identically_zero = true;
        return out;
    }
    for (VarId v : f.free_vars())
        if (v != kVarZ && v != kVarPi) throw UnboundParameter(var_name(v));
    // strip the pi unit and any z^a factor; the pi power must be uniform or
    // the zeros are not those of a rational polynomial
    ParamPoly stripped;
    std::optional<std::int32_t> zmin, pi_power;
    for (const auto& [m, c] : f.terms()) {
        std::int32_t ze = m.exponent_of(kVarZ);
        std::int32_t pe = m.exponent_of(kVarPi);
        if (!zmin || ze < *zmin) zmin = ze;
        if (!pi_power)
            pi_power = pe;
        else if (*pi_power != pe)
            throw Error("count_simple_positive: mixed pi powers; not of the form pi^a z^b P(z)");
    }
    for (const auto& [m, c] : f.terms()) {
        auto [rest, pe] = m.split(kVarPi);
        auto [rest2, ze] = rest.split(kVarZ);
        (void)rest2;
        stripped.add_term(Monomial::var(kVarZ, ze - *zmin), c);
    }
    RatPoly P = RatPoly::from_univariate(stripped);
    RatPoly g = RatPoly::gcd(P, P.derivative());
    RatPoly q = P.squarefree_part();
    out.distinct_total = q.degree() > 0 ? sturm_count(q, Bound::finite(Rational(0)), hi) : 0;
    out.count = out.distinct_total;
    if (g.degree() > 0) {
        RatPoly shared = RatPoly::gcd(q, g);
        if (shared.degree() > 0)
            out.count -= sturm_count(shared, Bound::finite(Rational(0)), hi);
    }
    return out;
}

/// Upper bound on the number of limit cycles of the generalized Kukles family
/// at averaging order k: floor(k (N - 1) / 2) with N = max(m, n1, n2+1, n3+2).
inline long kukles_bound(int m, int n1, int n2, int n3, int k) {
    long N = std::max(std::max(static_cast<long>(m), static_cast<long>(n1)),
                      std::max(static_cast<long>(n2) + 1, static_cast<long>(n3) + 2));
    if (N < 3) throw BadDegrees("require max(m, n1, n2+1, n3+2) >= 3, got " + std::to_string(N));
    if (k < 1) throw BadDegrees("require k >= 1");
    return (static_cast<long>(k) * (N - 1)) / 2;
}

}  // namespace avgcyc
