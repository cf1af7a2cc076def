#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

using namespace avgcyc;
using fixtures::pv;

namespace {

ParamPoly bell_param(int l, int m, const std::vector<ParamPoly>& args) {
    return bell_partial<ParamPoly>(
        l, m, std::span<const ParamPoly>(args.data(), args.size()),
        ParamPoly::constant(Rational(1)),
        [](const ParamPoly& t, std::int64_t c) { return t * Rational(static_cast<long>(c)); });
}

/// Independent oracle: B_{l,m} = sum_i C(l-1, i-1) x_i B_{l-i, m-1}, with
/// B_{0,0} = 1 and B_{l,0} = 0 for l > 0.
ParamPoly bell_recurrence(int l, int m, const std::vector<ParamPoly>& xs) {
    if (l == 0 && m == 0) return ParamPoly::constant(Rational(1));
    if (l <= 0 || m <= 0) return ParamPoly::zero();
    ParamPoly acc;
    for (int i = 1; i + m - 1 <= l; ++i) {
        Rational binom(1);
        for (int t = 0; t < i - 1; ++t)
            binom = binom * Rational(l - 1 - t) / Rational(t + 1);
        acc += xs[static_cast<std::size_t>(i - 1)] * binom * bell_recurrence(l - i, m - 1, xs);
    }
    return acc;
}

std::vector<ParamPoly> xs(int n) {
    std::vector<ParamPoly> out;
    for (int i = 1; i <= n; ++i) out.push_back(pv("x" + std::to_string(i)));
    return out;
}

}  // namespace

TEST_CASE("boundary cases") {
    // B_{l,l} = x1^l
    CHECK(bell_param(3, 3, xs(1)) == pv("x1").pow(3));
    // B_{l,1} = x_l
    CHECK(bell_param(5, 1, xs(5)) == pv("x5"));
}

TEST_CASE("B_{4,2} = 4 x1 x3 + 3 x2^2") {
    ParamPoly want = Rational(4) * pv("x1") * pv("x3") + Rational(3) * pv("x2") * pv("x2");
    CHECK(bell_param(4, 2, xs(3)) == want);
}

TEST_CASE("tuple enumeration agrees with the binomial recurrence") {
    for (int l = 1; l <= 7; ++l)
        for (int m = 1; m <= l; ++m) {
            auto args = xs(l - m + 1);
            auto full = xs(l);  // recurrence needs x_1..x_l
            CHECK(bell_param(l, m, args) == bell_recurrence(l, m, full));
        }
}

TEST_CASE("B_{6,3} via both routes") {
    CHECK(bell_param(6, 3, xs(4)) == bell_recurrence(6, 3, xs(6)));
}

TEST_CASE("row sums give the Bell numbers") {
    // B(l) = sum_m B_{l,m}(1,...,1); B(1..10)
    const long bell_numbers[] = {1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
    for (int l = 1; l <= 10; ++l) {
        long total = 0;
        for (int m = 1; m <= l; ++m)
            for (const auto& mono : bell_monomials(l, m)) total += mono.coeff;
        CHECK(total == bell_numbers[l - 1]);
    }
}

TEST_CASE("monomial weights satisfy both tuple constraints") {
    for (int l = 1; l <= 8; ++l)
        for (int m = 1; m <= l; ++m)
            for (const auto& mono : bell_monomials(l, m)) {
                long weight = 0, parts = 0;
                for (std::size_t j = 0; j < mono.exps.size(); ++j) {
                    weight += static_cast<long>(j + 1) * mono.exps[j];
                    parts += mono.exps[j];
                }
                CHECK(weight == l);
                CHECK(parts == m);
                CHECK(mono.coeff > 0);
            }
}

TEST_CASE("arity is checked") {
    std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(bell_partial(4, 2, std::span<const double>(two.data(), two.size())), BadArity);
    CHECK_THROWS_AS(bell_monomials(3, 4), BadArity);
    CHECK_THROWS_AS(bell_monomials(3, 0), BadArity);
}
