#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "avgcyc/errors.hpp"
#include "avgcyc/rational.hpp"

namespace avgcyc {

/// One monomial of a partial Bell polynomial: coeff * prod x_j^(exps[j-1]).
struct BellMonomial {
    std::int64_t coeff;
    std::vector<std::int32_t> exps;  // length l - m + 1
};

namespace detail {

inline void enumerate_bell_tuples(int l, int m, int j, int weight_left, int parts_left,
                                  std::vector<std::int32_t>& tuple,
                                  std::vector<BellMonomial>& out) {
    int nvars = l - m + 1;
    if (j > nvars) {
        if (weight_left == 0 && parts_left == 0) {
            // coefficient l! / (prod b_j! * prod (j!)^(b_j))
            Rational c = Rational::factorial(static_cast<unsigned>(l));
            for (int t = 1; t <= nvars; ++t) {
                int b = tuple[static_cast<std::size_t>(t - 1)];
                c /= Rational::factorial(static_cast<unsigned>(b));
                c /= Rational::factorial(static_cast<unsigned>(t)).pow(b);
            }
            if (!c.is_integer()) throw Error("bell: non-integer coefficient");
            out.push_back({static_cast<std::int64_t>(c.num().get_si()), tuple});
        }
        return;
    }
    // b_j ranges over 0..min(parts_left, weight_left / j)
    int bmax = std::min(parts_left, weight_left / j);
    for (int b = 0; b <= bmax; ++b) {
        tuple[static_cast<std::size_t>(j - 1)] = b;
        enumerate_bell_tuples(l, m, j + 1, weight_left - j * b, parts_left - b, tuple, out);
    }
    tuple[static_cast<std::size_t>(j - 1)] = 0;
}

}  // namespace detail

/// Monomials of B_{l,m}(x_1, ..., x_{l-m+1}): the sum over all tuples of
/// nonnegative integers [b_1, ..., b_{l-m+1}] with sum j*b_j = l and
/// sum b_j = m, with coefficient l!/(b_1!...b_n! (1!)^{b_1}...(n!)^{b_n}).
inline std::vector<BellMonomial> bell_monomials(int l, int m) {
    if (m < 1 || m > l) throw BadArity("bell: need 1 <= m <= l");
    std::vector<BellMonomial> out;
    std::vector<std::int32_t> tuple(static_cast<std::size_t>(l - m + 1), 0);
    detail::enumerate_bell_tuples(l, m, 1, l, m, tuple, out);
    return out;
}

/// Evaluates B_{l,m} over any commutative ring with +, * and integer scaling.
/// args must have length l - m + 1.
template <class T, class Scale>
T bell_partial(int l, int m, std::span<const T> args, const T& one, Scale&& scale) {
    if (static_cast<int>(args.size()) != l - m + 1)
        throw BadArity("bell: expected " + std::to_string(l - m + 1) + " arguments, got " +
                       std::to_string(args.size()));
    auto monos = bell_monomials(l, m);
    T acc{};
    bool first = true;
    for (const auto& mono : monos) {
        T term = one;
        for (std::size_t j = 0; j < mono.exps.size(); ++j)
            for (std::int32_t e = 0; e < mono.exps[j]; ++e) term = term * args[j];
        term = scale(term, mono.coeff);
        acc = first ? term : acc + term;
        first = false;
    }
    return acc;
}

inline double bell_partial(int l, int m, std::span<const double> args) {
    return bell_partial<double>(l, m, args, 1.0,
                                [](double t, std::int64_t c) { return t * static_cast<double>(c); });
}

}  // namespace avgcyc
