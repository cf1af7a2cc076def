#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avgcyc/bell.hpp"

namespace avgcyc {

/// One flattened term of the order-k integrand: coeff * d^m F_j * prod y_i^e_i
/// (m = 0 only for the leading k! F_k term).
struct IntegrandTerm {
    std::int64_t coeff = 0;
    int f_index = 0;                    // j in F_j
    int deriv_order = 0;                // m in d^m/dr^m
    std::vector<std::int32_t> y_exps;   // exponent of y_1 .. y_{k-1}

    friend bool operator==(const IntegrandTerm&, const IntegrandTerm&) = default;
};

/// The bracketed integrand of the order-k integral formula:
///   y_k = Y(theta,z) * int_0^theta Y(s,z)^-1 * ( ... ) ds,
/// flattened with Bell nodes expanded. Instantiated by the exact path over
/// mixed trig polynomials and by the numeric path over doubles.
struct IntegrandTemplate {
    int k = 0;
    std::vector<IntegrandTerm> terms;

    /// Display form mirroring the usual y_k listings: D{m}F{j} stands for the
    /// m-th r-derivative of F_j evaluated along (s, r(s,z)).
    std::string to_text() const {
        std::string out;
        for (const auto& t : terms) {
            if (!out.empty()) out += " + ";
            std::string factors;
            if (t.deriv_order == 0) {
                factors = "F" + std::to_string(t.f_index);
            } else {
                factors = "D" + std::to_string(t.deriv_order) + "F" + std::to_string(t.f_index);
            }
            for (std::size_t i = 0; i < t.y_exps.size(); ++i) {
                if (t.y_exps[i] == 0) continue;
                factors += "*y" + std::to_string(i + 1);
                if (t.y_exps[i] != 1) factors += "^" + std::to_string(t.y_exps[i]);
            }
            out += (t.coeff == 1 ? factors : std::to_string(t.coeff) + "*" + factors);
        }
        return out;
    }
};

/// Order-k integrand template:
///   k! F_k
///   + sum_{m=2..k}        d^m F_0     * B_{k,m}(y_1, ..., y_{k-m+1})
///   + sum_{l=1..k-1, m<=l} (k!/l!) d^m F_{k-l} * B_{l,m}(y_1, ..., y_{l-m+1})
inline IntegrandTemplate integrand_formula(int k) {
    if (k < 1) throw Error("integrand_formula: order must be >= 1");
    IntegrandTemplate tmpl;
    tmpl.k = k;
    std::size_t ny = static_cast<std::size_t>(k > 1 ? k - 1 : 0);

    Rational kfac = Rational::factorial(static_cast<unsigned>(k));
    tmpl.terms.push_back({static_cast<std::int64_t>(kfac.num().get_si()), k, 0,
                          std::vector<std::int32_t>(ny, 0)});

    auto push_bell = [&](std::int64_t outer, int f_index, int m, int l) {
        for (const auto& mono : bell_monomials(l, m)) {
            IntegrandTerm t;
            t.coeff = outer * mono.coeff;
            t.f_index = f_index;
            t.deriv_order = m;
            t.y_exps.assign(ny, 0);
            for (std::size_t j = 0; j < mono.exps.size(); ++j) t.y_exps[j] = mono.exps[j];
            tmpl.terms.push_back(std::move(t));
        }
    };

    for (int m = 2; m <= k; ++m) push_bell(1, 0, m, k);
    for (int l = 1; l <= k - 1; ++l) {
        Rational outer = kfac / Rational::factorial(static_cast<unsigned>(l));
        for (int m = 1; m <= l; ++m)
            push_bell(static_cast<std::int64_t>(outer.num().get_si()), k - l, m, l);
    }
    return tmpl;
}

}  // namespace avgcyc
