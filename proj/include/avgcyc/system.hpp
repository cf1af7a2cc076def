#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "avgcyc/parampoly.hpp"

namespace avgcyc {

/// Bivariate polynomial in the plane variables x, y with ParamPoly
/// coefficients (parameters only; z never appears here).
class PolyXY {
public:
    using Key = std::pair<std::int32_t, std::int32_t>;  // (x-degree, y-degree)
    using TermMap = std::map<Key, ParamPoly>;

    PolyXY() = default;

    static PolyXY zero() { return PolyXY(); }

    void add_term(std::int32_t i, std::int32_t j, const ParamPoly& c) {
        if (c.is_zero()) return;
        if (i < 0 || j < 0) throw Error("PolyXY: negative exponent");
        auto [it, inserted] = terms_.try_emplace({i, j}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    PolyXY& operator+=(const PolyXY& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
        return *this;
    }

    PolyXY& operator-=(const PolyXY& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
        return *this;
    }

    friend PolyXY operator+(PolyXY a, const PolyXY& b) { return a += b; }
    friend PolyXY operator-(PolyXY a, const PolyXY& b) { return a -= b; }

    PolyXY operator-() const {
        PolyXY out;
        for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
        return out;
    }

    friend PolyXY operator*(const PolyXY& a, const PolyXY& b) {
        PolyXY out;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return out;
    }

    friend PolyXY operator*(const PolyXY& a, const ParamPoly& s) {
        PolyXY out;
        if (s.is_zero()) return out;
        for (const auto& [k, c] : a.terms_) out.add_term(k.first, k.second, c * s);
        return out;
    }

    /// Multiplication by x^dx * y^dy.
    PolyXY shifted(std::int32_t dx, std::int32_t dy) const {
        PolyXY out;
        for (const auto& [k, c] : terms_) out.terms_.emplace(Key{k.first + dx, k.second + dy}, c);
        return out;
    }

    ParamPoly constant_term() const {
        auto it = terms_.find({0, 0});
        return it == terms_.end() ? ParamPoly::zero() : it->second;
    }

    std::int32_t total_degree() const {
        std::int32_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
        return d;
    }

    /// Degree in y only (used for matching the Kukles shape).
    std::int32_t degree_y() const {
        std::int32_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }

    std::int32_t degree_x() const {
        std::int32_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }

    /// Collects the x-polynomial coefficient of y^j.
    PolyXY coeff_of_y(std::int32_t j) const {
        PolyXY out;
        for (const auto& [k, c] : terms_)
            if (k.second == j) out.terms_.emplace(Key{k.first, 0}, c);
        return out;
    }

    std::set<VarId> free_vars() const {
        std::set<VarId> vs;
        for (const auto& [k, c] : terms_) {
            auto sub = c.free_vars();
            vs.insert(sub.begin(), sub.end());
        }
        return vs;
    }

    double eval(double x, double y, const std::map<VarId, double>& values) const {
        double acc = 0.0;
        for (const auto& [k, c] : terms_)
            acc += c.eval(values) * std::pow(x, k.first) * std::pow(y, k.second);
        return acc;
    }

    friend bool operator==(const PolyXY& a, const PolyXY& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const PolyXY& a, const PolyXY& b) { return !(a == b); }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::vector<const std::pair<const Key, ParamPoly>*> ts;
        for (const auto& t : terms_) ts.push_back(&t);
        std::sort(ts.begin(), ts.end(), [](auto* a, auto* b) {
            int da = a->first.first + a->first.second, db = b->first.first + b->first.second;
            if (da != db) return da > db;
            return a->first > b->first;
        });
        std::string out;
        for (auto* t : ts) {
            if (!out.empty()) out += " + ";
            std::string suffix;
            auto emit = [&suffix](const char* n, std::int32_t e) {
                if (e == 0) return;
                suffix += "*";
                suffix += n;
                if (e != 1) suffix += "^" + std::to_string(e);
            };
            emit("x", t->first.first);
            emit("y", t->first.second);
            out += "(" + t->second.to_string() + ")" + suffix;
        }
        return out;
    }

private:
    TermMap terms_;
};

/// A planar polynomial system: unperturbed center (P, Q) plus perturbation
/// lists indexed by the power of the small parameter.
struct SystemSpec {
    PolyXY P, Q;             // the center under study; P(0,0) = Q(0,0) = 0
    std::vector<PolyXY> p;   // p[i] multiplies eps^(i+1)
    std::vector<PolyXY> q;
    int order = 0;           // averaging order k; perturbation lists have length k

    void validate() const {
        if (order < 0) throw Error("SystemSpec: negative order");
        if (!P.constant_term().is_zero() || !Q.constant_term().is_zero())
            throw Error("SystemSpec: the origin must be a singular point (P(0,0) = Q(0,0) = 0)");
        if (static_cast<int>(p.size()) != order || static_cast<int>(q.size()) != order)
            throw Error("SystemSpec: perturbation lists must have length k");
    }

    friend bool operator==(const SystemSpec& a, const SystemSpec& b) {
        return a.P == b.P && a.Q == b.Q && a.p == b.p && a.q == b.q && a.order == b.order;
    }
};

}  // namespace avgcyc
