#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "avgcyc/trigpoly.hpp"

namespace avgcyc {

/// theta / cos / sin exponents of one mixed term; canonical s in {0, 1}.
struct MixedKey {
    std::int32_t t = 0;  // theta power, >= 0
    std::int32_t c = 0;
    std::int32_t s = 0;
    friend auto operator<=>(const MixedKey&, const MixedKey&) = default;
};

/// Finite sum of terms theta^a cos^i sin^j with ParamPoly coefficients.
/// Closed under d/dtheta and under antidifferentiation (the antiderivative of
/// every term is again a finite sum of the same shape).
class MixedTrigPoly {
public:
    using TermMap = std::map<MixedKey, ParamPoly>;

    MixedTrigPoly() = default;

    static MixedTrigPoly from_trig(const TrigPoly& tp) {
        MixedTrigPoly out;
        for (const auto& [k, p] : tp.terms()) out.add_reduced({0, k.c, k.s}, p);
        return out;
    }

    static MixedTrigPoly constant(ParamPoly p) {
        MixedTrigPoly out;
        out.add_reduced({0, 0, 0}, std::move(p));
        return out;
    }

    static MixedTrigPoly term(MixedKey k, ParamPoly p) {
        MixedTrigPoly out;
        out.add_raw(k.t, k.c, k.s, p);
        return out;
    }

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_raw(std::int32_t t, std::int32_t c, std::int32_t s, const ParamPoly& coef) {
        if (coef.is_zero()) return;
        if (t < 0 || c < 0 || s < 0) throw Error("MixedTrigPoly: negative exponent");
        std::int32_t half = s / 2, u = s % 2;
        Rational binom(1);
        for (std::int32_t i = 0; i <= half; ++i) {
            Rational coeff = (i % 2 == 0) ? binom : -binom;
            add_reduced({t, c + 2 * i, u}, coef * coeff);
            binom = binom * Rational(half - i) / Rational(i + 1);
        }
    }

    void add_reduced(MixedKey k, ParamPoly p) {
        if (p.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, std::move(p));
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MixedTrigPoly& operator+=(const MixedTrigPoly& o) {
        for (const auto& [k, p] : o.terms_) add_reduced(k, p);
        return *this;
    }

    MixedTrigPoly& operator-=(const MixedTrigPoly& o) {
        for (const auto& [k, p] : o.terms_) add_reduced(k, -p);
        return *this;
    }

    friend MixedTrigPoly operator+(MixedTrigPoly a, const MixedTrigPoly& b) { return a += b; }
    friend MixedTrigPoly operator-(MixedTrigPoly a, const MixedTrigPoly& b) { return a -= b; }

    MixedTrigPoly operator-() const {
        MixedTrigPoly out;
        for (const auto& [k, p] : terms_) out.terms_.emplace(k, -p);
        return out;
    }

    friend MixedTrigPoly operator*(const MixedTrigPoly& a, const MixedTrigPoly& b) {
        MixedTrigPoly out;
        for (const auto& [ka, pa] : a.terms_)
            for (const auto& [kb, pb] : b.terms_)
                out.add_raw(ka.t + kb.t, ka.c + kb.c, ka.s + kb.s, pa * pb);
        return out;
    }

    friend MixedTrigPoly operator*(const MixedTrigPoly& a, const ParamPoly& s) {
        MixedTrigPoly out;
        if (s.is_zero()) return out;
        for (const auto& [k, p] : a.terms_) out.add_reduced(k, p * s);
        return out;
    }

    friend MixedTrigPoly operator*(const MixedTrigPoly& a, const Rational& s) {
        return a * ParamPoly::constant(s);
    }

    MixedTrigPoly pow(unsigned e) const {
        MixedTrigPoly out = constant(ParamPoly::constant(Rational(1)));
        MixedTrigPoly base = *this;
        while (e) {
            if (e & 1u) out = out * base;
            if (e >>= 1u) base = base * base;
        }
        return out;
    }

    MixedTrigPoly derivative_z() const {
        MixedTrigPoly out;
        for (const auto& [k, p] : terms_) out.add_reduced(k, p.derivative(kVarZ));
        return out;
    }

    /// d/dtheta, exact: theta^a C^i S^j differentiates into at most three terms.
    MixedTrigPoly derivative_theta() const {
        MixedTrigPoly out;
        for (const auto& [k, p] : terms_) {
            if (k.t > 0) out.add_raw(k.t - 1, k.c, k.s, p * Rational(k.t));
            if (k.c > 0) out.add_raw(k.t, k.c - 1, k.s + 1, p * Rational(-k.c));
            if (k.s > 0) out.add_raw(k.t, k.c + 1, k.s - 1, p * Rational(k.s));
        }
        return out;
    }

    MixedTrigPoly substitute(VarId v, const ParamPoly& rhs) const {
        MixedTrigPoly out;
        for (const auto& [k, p] : terms_) out.add_reduced(k, p.substitute(v, rhs));
        return out;
    }

    MixedTrigPoly bind(const std::map<VarId, Rational>& values) const {
        MixedTrigPoly out;
        for (const auto& [k, p] : terms_) out.add_reduced(k, p.bind(values));
        return out;
    }

    /// Exact value at theta = 0 (cos = 1, sin = 0, theta^a = 0 for a > 0).
    ParamPoly value_at_zero() const {
        ParamPoly out;
        for (const auto& [k, p] : terms_)
            if (k.t == 0 && k.s == 0) out += p;
        return out;
    }

    /// Exact value at theta = 2*pi: theta^a -> 2^a pi^a, cos -> 1, sin -> 0.
    ParamPoly value_at_two_pi() const {
        ParamPoly out;
        for (const auto& [k, p] : terms_) {
            if (k.s != 0) continue;
            if (k.t == 0) {
                out += p;
            } else {
                out += p.times_monomial(Monomial::var(kVarPi, k.t), Rational(2).pow(k.t));
            }
        }
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
            acc += p.eval(values) * std::pow(theta, k.t) * std::pow(c, k.c) * (k.s ? s : 1.0);
        return acc;
    }

    friend bool operator==(const MixedTrigPoly& a, const MixedTrigPoly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const MixedTrigPoly& a, const MixedTrigPoly& b) { return !(a == b); }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::vector<const std::pair<const MixedKey, ParamPoly>*> ts;
        for (const auto& t : terms_) ts.push_back(&t);
        std::sort(ts.begin(), ts.end(), [](auto* a, auto* b) {
            if (a->first.t != b->first.t) return a->first.t > b->first.t;
            int da = a->first.c + a->first.s, db = b->first.c + b->first.s;
            if (da != db) return da > db;
            return a->first.c > b->first.c;
        });
        std::string out;
        for (auto* t : ts) {
            if (!out.empty()) out += " + ";
            out += "(" + t->second.to_string() + ")";
            const auto& k = t->first;
            if (k.t > 0) {
                out += "*theta";
                if (k.t != 1) out += "^" + std::to_string(k.t);
            }
            out += TrigPoly::trig_suffix(k.c, k.s);
        }
        return out;
    }

private:
    TermMap terms_;
};

namespace detail {

/// Antiderivative of the monomial theta^a cos^i sin^j (coefficients pure
/// rationals), by the integration-by-parts recursion:
///   j = 1:        -theta^a C^(i+1)/(i+1) + a/(i+1) * I(a-1, i+1, 0)
///   j = 0, i = 0: theta^(a+1)/(a+1)
///   j = 0, i > 0: theta^a C^(i-1) S / i - a/i * I(a-1, i-1, 1)
///                 + (i-1)/i * I(a, i-2, 0)
/// The integration constant is not fixed here.
inline const MixedTrigPoly& antider_monomial(std::int32_t a, std::int32_t i, std::int32_t j,
                                             std::map<MixedKey, MixedTrigPoly>& memo) {
    MixedKey key{a, i, j};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    MixedTrigPoly out;
    if (j == 1) {
        out.add_reduced({a, i + 1, 0}, ParamPoly::constant(Rational(-1, i + 1)));
        if (a > 0)
            out += antider_monomial(a - 1, i + 1, 0, memo) * Rational(a, i + 1);
    } else if (i == 0) {
        out.add_reduced({a + 1, 0, 0}, ParamPoly::constant(Rational(1, a + 1)));
    } else {
        out.add_reduced({a, i - 1, 1}, ParamPoly::constant(Rational(1, i)));
        if (a > 0) out += antider_monomial(a - 1, i - 1, 1, memo) * Rational(-a, i);
        if (i >= 2) out += antider_monomial(a, i - 2, 0, memo) * Rational(i - 1, i);
    }
    return memo.emplace(key, std::move(out)).first->second;
}

}  // namespace detail

/// Exact antiderivative G with dG/dtheta = f (termwise) and G(0) = 0.
inline MixedTrigPoly trig_antiderivative(const MixedTrigPoly& f) {
    MixedTrigPoly out;
    std::map<MixedKey, MixedTrigPoly> memo;
    for (const auto& [k, p] : f.terms()) {
        out += detail::antider_monomial(k.t, k.c, k.s, memo) * p;
    }
    out -= MixedTrigPoly::constant(out.value_at_zero());
    return out;
}

/// Exact integral over one period [0, 2*pi]; at most one pi factor enters per
/// primitive trig monomial, higher powers only from secular theta^a terms.
inline ParamPoly definite_integral_period(const MixedTrigPoly& f) {
    return trig_antiderivative(f).value_at_two_pi();
}

}  // namespace avgcyc
