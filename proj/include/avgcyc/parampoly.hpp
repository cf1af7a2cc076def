#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "avgcyc/errors.hpp"
#include "avgcyc/rational.hpp"

namespace avgcyc {

using VarId = std::int32_t;

/// Reserved variable ids. "z" doubles as the radial variable r of the normal
/// form; "pi" is the transcendental unit carried by exact period integrals.
inline constexpr VarId kVarZ = 0;
inline constexpr VarId kVarPi = 1;

/// Process-wide interned variable names. Append-only; ids are stable for the
/// lifetime of the process.
class VarTable {
public:
    static VarTable& instance() {
        static VarTable t;
        return t;
    }

    VarId intern(std::string_view name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ids_.find(std::string(name));
        if (it != ids_.end()) return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.emplace_back(name);
        ids_.emplace(std::string(name), id);
        return id;
    }

    std::optional<VarId> find(std::string_view name) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ids_.find(std::string(name));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    std::string name(VarId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.at(static_cast<std::size_t>(id));
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.size();
    }

private:
    VarTable() {
        names_ = {"z", "pi"};
        ids_ = {{"z", kVarZ}, {"pi", kVarPi}};
    }
    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> ids_;
};

inline VarId var_id(std::string_view name) { return VarTable::instance().intern(name); }
inline std::string var_name(VarId id) { return VarTable::instance().name(id); }

/// Power product over the variable table. Factors are sorted by id and carry
/// nonzero integer exponents; negative exponents support the Laurent cases
/// (inverse powers of z, and of parameters assumed nonzero).
class Monomial {
public:
    using Factor = std::pair<VarId, std::int32_t>;

    Monomial() = default;

    static Monomial var(VarId v, std::int32_t e = 1) {
        Monomial m;
        if (e != 0) m.factors_.push_back({v, e});
        return m;
    }

    bool is_constant() const { return factors_.empty(); }

    std::int32_t exponent_of(VarId v) const {
        for (const auto& [var, exp] : factors_)
            if (var == v) return exp;
        return 0;
    }

    /// Sum of exponents of all variables except pi (the grading used for
    /// canonical ordering).
    std::int64_t grade() const {
        std::int64_t d = 0;
        for (const auto& [var, exp] : factors_)
            if (var != kVarPi) d += exp;
        return d;
    }

    Monomial times(const Monomial& o) const {
        Monomial out;
        out.factors_.reserve(factors_.size() + o.factors_.size());
        std::size_t i = 0, j = 0;
        while (i < factors_.size() && j < o.factors_.size()) {
            if (factors_[i].first < o.factors_[j].first) {
                out.factors_.push_back(factors_[i++]);
            } else if (factors_[i].first > o.factors_[j].first) {
                out.factors_.push_back(o.factors_[j++]);
            } else {
                std::int32_t e = factors_[i].second + o.factors_[j].second;
                if (e != 0) out.factors_.push_back({factors_[i].first, e});
                ++i, ++j;
            }
        }
        for (; i < factors_.size(); ++i) out.factors_.push_back(factors_[i]);
        for (; j < o.factors_.size(); ++j) out.factors_.push_back(o.factors_[j]);
        return out;
    }

    Monomial inverse() const {
        Monomial out = *this;
        for (auto& [var, exp] : out.factors_) exp = -exp;
        return out;
    }

    Monomial pow(std::int32_t e) const {
        Monomial out;
        if (e == 0) return out;
        out = *this;
        for (auto& [var, exp] : out.factors_) exp *= e;
        return out;
    }

    /// Drops the given variable, returning (remaining monomial, its exponent).
    std::pair<Monomial, std::int32_t> split(VarId v) const {
        Monomial rest;
        std::int32_t e = 0;
        for (const auto& f : factors_) {
            if (f.first == v)
                e = f.second;
            else
                rest.factors_.push_back(f);
        }
        return {rest, e};
    }

    const std::vector<Factor>& factors() const { return factors_; }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.factors_ < b.factors_; }

private:
    std::vector<Factor> factors_;
};

/// Comparator giving the canonical term order: graded lexicographic with z
/// first, then parameters alphabetically; pi is excluded from the grade and
/// breaks remaining ties. Variable precedence is keyed by name, so the order
/// is independent of interning order.
class CanonicalOrder {
public:
    CanonicalOrder() = default;

    /// true when a is canonically greater than (prints before) b
    bool greater(const Monomial& a, const Monomial& b) const {
        std::int64_t ga = a.grade(), gb = b.grade();
        if (ga != gb) return ga > gb;
        auto va = ranked(a), vb = ranked(b);
        std::size_t i = 0, j = 0;
        while (i < va.size() || j < vb.size()) {
            // exponent-vector comparison over the canonical variable order;
            // a missing variable counts as exponent 0
            if (j == vb.size() || (i < va.size() && va[i].first < vb[j].first)) {
                if (va[i].second != 0) return va[i].second > 0;
                ++i;
            } else if (i == va.size() || vb[j].first < va[i].first) {
                if (vb[j].second != 0) return vb[j].second < 0;
                ++j;
            } else {
                if (va[i].second != vb[j].second) return va[i].second > vb[j].second;
                ++i, ++j;
            }
        }
        return false;
    }

private:
    // "" sorts z first; "\x7f" sorts pi after every printable parameter name
    const std::string& key(VarId v) const {
        auto it = keys_.find(v);
        if (it != keys_.end()) return it->second;
        std::string k;
        if (v == kVarZ)
            k = "";
        else if (v == kVarPi)
            k = "\x7f";
        else
            k = var_name(v);
        return keys_.emplace(v, std::move(k)).first->second;
    }

    std::vector<std::pair<std::string, std::int32_t>> ranked(const Monomial& m) const {
        std::vector<std::pair<std::string, std::int32_t>> v;
        v.reserve(m.factors().size());
        for (const auto& [var, exp] : m.factors()) v.push_back({key(var), exp});
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        return v;
    }

    mutable std::map<VarId, std::string> keys_;
};

/// Sparse multivariate polynomial over Q in z and named parameters (Laurent:
/// exponents may be negative for z, and for parameters inverted by
/// substitution scripts). No zero coefficients are stored.
class ParamPoly {
public:
    using TermMap = std::map<Monomial, Rational>;

    ParamPoly() = default;

    static ParamPoly zero() { return ParamPoly(); }

    static ParamPoly constant(Rational c) {
        ParamPoly p;
        if (!c.is_zero()) p.terms_.emplace(Monomial(), std::move(c));
        return p;
    }

    static ParamPoly variable(VarId v, std::int32_t e = 1) {
        ParamPoly p;
        p.terms_.emplace(Monomial::var(v, e), Rational(1));
        return p;
    }

    static ParamPoly variable(std::string_view name, std::int32_t e = 1) {
        return variable(var_id(name), e);
    }

    static ParamPoly term(Monomial m, Rational c) {
        ParamPoly p;
        if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
        return p;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
    }

    bool is_single_term() const { return terms_.size() == 1; }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw Error("ParamPoly: not a constant");
        return terms_.begin()->second;
    }

    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ParamPoly& operator+=(const ParamPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    ParamPoly& operator-=(const ParamPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }

    ParamPoly operator-() const {
        ParamPoly out = *this;
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }

    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
        ParamPoly out;
        if (a.is_zero() || b.is_zero()) return out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma.times(mb), ca * cb);
        return out;
    }

    ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }

    friend ParamPoly operator*(const ParamPoly& a, const Rational& s) {
        ParamPoly out;
        if (s.is_zero()) return out;
        out = a;
        for (auto& [m, c] : out.terms_) c *= s;
        return out;
    }

    friend ParamPoly operator*(const Rational& s, const ParamPoly& a) { return a * s; }

    ParamPoly pow(unsigned e) const {
        ParamPoly out = constant(Rational(1));
        ParamPoly base = *this;
        while (e) {
            if (e & 1u) out = out * base;
            base = (e >>= 1u) ? base * base : base;
        }
        return out;
    }

    /// Multiplies by a single power product (used for Laurent shifts like the
    /// division by r and r^2 in the polar substitution, and for monomial
    /// division in substitution scripts).
    ParamPoly times_monomial(const Monomial& m, const Rational& c = Rational(1)) const {
        ParamPoly out;
        for (const auto& [mm, cc] : terms_) out.add_term(mm.times(m), cc * c);
        return out;
    }

    /// Exact division by a single-term polynomial.
    ParamPoly divide_by_term(const ParamPoly& t) const {
        if (!t.is_single_term()) throw Error("ParamPoly: divisor is not a single term");
        const auto& [m, c] = *t.terms_.begin();
        return times_monomial(m.inverse(), c.inv());
    }

    /// One-shot simultaneous replacement of a variable by a polynomial.
    /// Negative exponents of the variable require a single-term replacement.
    ParamPoly substitute(VarId v, const ParamPoly& rhs) const {
        ParamPoly out;
        std::map<std::int32_t, ParamPoly> powers;  // cache rhs^e
        for (const auto& [m, c] : terms_) {
            auto [rest, e] = m.split(v);
            if (e == 0) {
                out.add_term(m, c);
                continue;
            }
            auto it = powers.find(e);
            if (it == powers.end()) {
                ParamPoly pe;
                if (e > 0) {
                    pe = rhs.pow(static_cast<unsigned>(e));
                } else {
                    if (!rhs.is_single_term())
                        throw Error("ParamPoly: cannot substitute a sum into a negative power of " +
                                    var_name(v));
                    const auto& [rm, rc] = *rhs.terms_.begin();
                    pe = ParamPoly::term(rm.pow(e), rc.pow(e));
                }
                it = powers.emplace(e, std::move(pe)).first;
            }
            out += it->second.times_monomial(rest, c);
        }
        return out;
    }

    /// Binds variables to rationals; unlisted variables stay symbolic.
    ParamPoly bind(const std::map<VarId, Rational>& values) const {
        ParamPoly out;
        for (const auto& [m, c] : terms_) {
            Monomial rest;
            Rational coef = c;
            bool dead = false;
            for (const auto& [var, exp] : m.factors()) {
                auto it = values.find(var);
                if (it == values.end()) {
                    rest = rest.times(Monomial::var(var, exp));
                } else if (it->second.is_zero()) {
                    if (exp < 0) throw Error("ParamPoly: binding " + var_name(var) + " = 0 hits a negative power");
                    dead = true;
                    break;
                } else {
                    coef *= it->second.pow(exp);
                }
            }
            if (!dead) out.add_term(rest, coef);
        }
        return out;
    }

    ParamPoly derivative(VarId v) const {
        ParamPoly out;
        for (const auto& [m, c] : terms_) {
            auto [rest, e] = m.split(v);
            if (e == 0) continue;
            out.add_term(rest.times(Monomial::var(v, e - 1)), c * Rational(e));
        }
        return out;
    }

    /// Collects the coefficient of v^power (a polynomial without v).
    ParamPoly coeff_of(VarId v, std::int32_t power) const {
        ParamPoly out;
        for (const auto& [m, c] : terms_) {
            auto [rest, e] = m.split(v);
            if (e == power) out.add_term(rest, c);
        }
        return out;
    }

    /// (min, max) exponent of v over all terms; nullopt for the zero polynomial.
    std::optional<std::pair<std::int32_t, std::int32_t>> degree_range(VarId v) const {
        if (terms_.empty()) return std::nullopt;
        std::int32_t lo = 0, hi = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            std::int32_t e = m.exponent_of(v);
            if (first) {
                lo = hi = e;
                first = false;
            } else {
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
        }
        return std::make_pair(lo, hi);
    }

    std::int64_t total_degree() const {
        std::int64_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.grade());
        return d;
    }

    std::set<VarId> free_vars() const {
        std::set<VarId> vs;
        for (const auto& [m, c] : terms_)
            for (const auto& [var, exp] : m.factors()) vs.insert(var);
        return vs;
    }

    /// Numeric evaluation. pi defaults to its numeric value; every other free
    /// variable must appear in the assignment.
    double eval(const std::map<VarId, double>& values) const {
        double acc = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = c.to_double();
            for (const auto& [var, exp] : m.factors()) {
                double x;
                auto it = values.find(var);
                if (it != values.end()) {
                    x = it->second;
                } else if (var == kVarPi) {
                    x = 3.14159265358979323846;
                } else {
                    throw UnboundParameter(var_name(var));
                }
                t *= std::pow(x, static_cast<double>(exp));
            }
            acc += t;
        }
        return acc;
    }

    friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

    /// Canonical text: terms in graded-lex order (z first, parameters
    /// alphabetically, pi as unit), joined with signed " + " / " - ".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        CanonicalOrder ord;
        std::vector<const std::pair<const Monomial, Rational>*> ts;
        ts.reserve(terms_.size());
        for (const auto& t : terms_) ts.push_back(&t);
        std::sort(ts.begin(), ts.end(),
                  [&ord](auto* a, auto* b) { return ord.greater(a->first, b->first); });
        std::string out;
        bool first = true;
        for (auto* t : ts) {
            const Rational& c = t->second;
            std::string mono = monomial_string(t->first);
            Rational a = c.abs();
            if (first) {
                out += c.sign() < 0 ? "-" : "";
                first = false;
            } else {
                out += c.sign() < 0 ? " - " : " + ";
            }
            if (mono.empty()) {
                out += a.str();
            } else if (a.is_one()) {
                out += mono;
            } else {
                out += a.str() + "*" + mono;
            }
        }
        return out;
    }

private:
    static std::string monomial_string(const Monomial& m) {
        if (m.is_constant()) return "";
        // print order: pi, z, then parameters alphabetically
        std::vector<std::pair<std::string, std::int32_t>> parts;
        std::int32_t pi_e = 0, z_e = 0;
        for (const auto& [var, exp] : m.factors()) {
            if (var == kVarPi)
                pi_e = exp;
            else if (var == kVarZ)
                z_e = exp;
            else
                parts.push_back({var_name(var), exp});
        }
        std::sort(parts.begin(), parts.end());
        std::string out;
        auto emit = [&out](const std::string& n, std::int32_t e) {
            if (e == 0) return;
            if (!out.empty()) out += "*";
            out += n;
            if (e != 1) out += "^" + std::to_string(e);
        };
        emit("pi", pi_e);
        emit("z", z_e);
        for (const auto& [n, e] : parts) emit(n, e);
        return out;
    }

    TermMap terms_;
};

inline ParamPoly operator*(const ParamPoly& a, long s) { return a * Rational(s); }
inline ParamPoly operator*(long s, const ParamPoly& a) { return a * Rational(s); }

}  // namespace avgcyc
