#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "avgcyc/parampoly.hpp"

namespace avgcyc {

/// cos/sin exponents of one trig monomial; canonical form has s in {0, 1}.
struct TrigKey {
    std::int32_t c = 0;
    std::int32_t s = 0;
    friend auto operator<=>(const TrigKey&, const TrigKey&) = default;
};

/// Polynomial in C = cos(theta), S = sin(theta) with ParamPoly coefficients,
/// reduced modulo S^2 = 1 - C^2 so every stored key has sin-degree <= 1.
/// The radial variable r of the normal form is carried as z inside the
/// coefficients.
class TrigPoly {
public:
    using TermMap = std::map<TrigKey, ParamPoly>;

    TrigPoly() = default;

    static TrigPoly zero() { return TrigPoly(); }

    static TrigPoly constant(ParamPoly p) {
        TrigPoly t;
        t.add_reduced({0, 0}, std::move(p));
        return t;
    }

    static TrigPoly monomial(std::int32_t c, std::int32_t s, ParamPoly p) {
        TrigPoly t;
        t.add_raw(c, s, std::move(p));
        return t;
    }

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    /// Adds coef * C^c * S^s, reducing S^s eagerly:
    /// S^(2t+u) = (1 - C^2)^t S^u expanded binomially.
    void add_raw(std::int32_t c, std::int32_t s, const ParamPoly& coef) {
        if (coef.is_zero()) return;
        if (s < 0 || c < 0) throw Error("TrigPoly: negative trig exponent");
        std::int32_t t = s / 2, u = s % 2;
        Rational binom(1);
        for (std::int32_t i = 0; i <= t; ++i) {
            // (-1)^i * C(t, i) * C^(c+2i) S^u
            Rational coeff = (i % 2 == 0) ? binom : -binom;
            add_reduced({c + 2 * i, u}, coef * coeff);
            binom = binom * Rational(t - i) / Rational(i + 1);
        }
    }

    void add_reduced(TrigKey k, ParamPoly p) {
        if (p.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, std::move(p));
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    TrigPoly& operator+=(const TrigPoly& o) {
        for (const auto& [k, p] : o.terms_) add_reduced(k, p);
        return *this;
    }

    TrigPoly& operator-=(const TrigPoly& o) {
        for (const auto& [k, p] : o.terms_) add_reduced(k, -p);
        return *this;
    }

    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }

    TrigPoly operator-() const {
        TrigPoly out;
        for (const auto& [k, p] : terms_) out.terms_.emplace(k, -p);
        return out;
    }

    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
        TrigPoly out;
        for (const auto& [ka, pa] : a.terms_)
            for (const auto& [kb, pb] : b.terms_) out.add_raw(ka.c + kb.c, ka.s + kb.s, pa * pb);
        return out;
    }

    friend TrigPoly operator*(const TrigPoly& a, const ParamPoly& s) {
        TrigPoly out;
        if (s.is_zero()) return out;
        for (const auto& [k, p] : a.terms_) out.add_reduced(k, p * s);
        return out;
    }

    friend TrigPoly operator*(const TrigPoly& a, const Rational& s) {
        return a * ParamPoly::constant(s);
    }

    TrigPoly pow(unsigned e) const {
        TrigPoly out = constant(ParamPoly::constant(Rational(1)));
        TrigPoly base = *this;
        while (e) {
            if (e & 1u) out = out * base;
            if (e >>= 1u) base = base * base;
        }
        return out;
    }

    /// d/dz applied to every coefficient (the r-derivative of the normal form).
    TrigPoly derivative_z() const {
        TrigPoly out;
        for (const auto& [k, p] : terms_) out.add_reduced(k, p.derivative(kVarZ));
        return out;
    }

    TrigPoly substitute(VarId v, const ParamPoly& rhs) const {
        TrigPoly out;
        for (const auto& [k, p] : terms_) out.add_reduced(k, p.substitute(v, rhs));
        return out;
    }

    TrigPoly bind(const std::map<VarId, Rational>& values) const {
        TrigPoly out;
        for (const auto& [k, p] : terms_) out.add_reduced(k, p.bind(values));
        return out;
    }

    /// Multiplies every coefficient by z^e (Laurent shift; e may be negative).
    TrigPoly shift_z(std::int32_t e) const {
        TrigPoly out;
        Monomial m = Monomial::var(kVarZ, e);
        for (const auto& [k, p] : terms_) out.add_reduced(k, p.times_monomial(m));
        return out;
    }

    std::set<VarId> free_vars() const {
        std::set<VarId> vs;
        for (const auto& [k, p] : terms_) {
            auto sub = p.free_vars();
            vs.insert(sub.begin(), sub.end());
        }
        return vs;
    }

    double eval(double theta, const std::map<VarId, double>& values) const {
        double c = std::cos(theta), s = std::sin(theta);
        double acc = 0.0;
        for (const auto& [k, p] : terms_)
            acc += p.eval(values) * std::pow(c, k.c) * (k.s ? s : 1.0);
        return acc;
    }

    friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const TrigPoly& a, const TrigPoly& b) { return !(a == b); }

    /// Canonical text, e.g. "(b_1_2 - d_1_0)*C^4 + (a_1_0)*S" with C = cos(theta),
    /// S = sin(theta). Keys in descending (c+s, c) order.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::vector<const std::pair<const TrigKey, ParamPoly>*> ts;
        for (const auto& t : terms_) ts.push_back(&t);
        std::sort(ts.begin(), ts.end(), [](auto* a, auto* b) {
            int da = a->first.c + a->first.s, db = b->first.c + b->first.s;
            if (da != db) return da > db;
            return a->first.c > b->first.c;
        });
        std::string out;
        for (auto* t : ts) {
            if (!out.empty()) out += " + ";
            out += "(" + t->second.to_string() + ")";
            out += trig_suffix(t->first.c, t->first.s);
        }
        return out;
    }

    static std::string trig_suffix(std::int32_t c, std::int32_t s) {
        std::string out;
        if (c > 0) {
            out += "*C";
            if (c != 1) out += "^" + std::to_string(c);
        }
        if (s > 0) {
            out += "*S";
            if (s != 1) out += "^" + std::to_string(s);
        }
        return out;
    }

private:
    TermMap terms_;
};

/// Raw (unreduced) polynomial in C, S keyed by (cos-degree, sin-degree).
using RawTrigPoly = std::map<std::pair<std::int32_t, std::int32_t>, ParamPoly>;

/// Reduction modulo the ideal (C^2 + S^2 - 1): eliminates sin powers above 1.
/// Idempotent; preserves the function on substitution C = cos, S = sin.
inline TrigPoly trig_reduce(const RawTrigPoly& raw) {
    TrigPoly out;
    for (const auto& [k, p] : raw) out.add_raw(k.first, k.second, p);
    return out;
}

}  // namespace avgcyc
