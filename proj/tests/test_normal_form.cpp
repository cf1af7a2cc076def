#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

using namespace avgcyc;
using fixtures::pv;

namespace {

TrigPoly tp(std::int32_t c, std::int32_t s, ParamPoly p) { return TrigPoly::monomial(c, s, p); }

ParamPoly zp(std::int32_t e) { return ParamPoly::variable(kVarZ, e); }

}  // namespace

TEST_CASE("linear center collapses to zero") {
    SystemSpec s;
    s.P.add_term(0, 1, fixtures::pc(-1));
    s.Q.add_term(1, 0, fixtures::pc(1));
    s.order = 0;
    PolarParts parts = polar_substitute(s);
    CHECK(parts.d1.c[0].is_zero());
    CHECK(parts.d2.c[0] == TrigPoly::constant(ParamPoly::constant(Rational(1))));
    EpsSeries nf = normal_form(s);
    CHECK(nf.F[0].is_zero());
}

TEST_CASE("cubic UIC center: d1 = r^3 C S, d2 = 1") {
    SystemSpec s;
    s.P.add_term(0, 1, fixtures::pc(-1));
    s.P.add_term(2, 1, fixtures::pc(1));
    s.Q.add_term(1, 0, fixtures::pc(1));
    s.Q.add_term(1, 2, fixtures::pc(1));
    s.order = 0;
    PolarParts parts = polar_substitute(s);
    CHECK(parts.d1.c[0] == tp(1, 1, zp(3)));
    CHECK(parts.d2.c[0] == TrigPoly::constant(ParamPoly::constant(Rational(1))));
    EpsSeries nf = normal_form(s);
    CHECK(nf.F[0].num() == tp(1, 1, zp(3)));
}

TEST_CASE("quintic example: dr/dtheta = r^5 cos sin") {
    EpsSeries nf = normal_form(fixtures::quintic_system());
    CHECK(nf.F[0].is_polynomial());
    CHECK(nf.F[0].num() == tp(1, 1, zp(5)));
}

TEST_CASE("cubic example: dr/dtheta = -2 r cos sin") {
    EpsSeries nf = normal_form(fixtures::cubic_exp_system());
    CHECK(nf.F[0].is_polynomial());
    CHECK(nf.F[0].num() == tp(1, 1, zp(1) * Rational(-2)));
}

TEST_CASE("quartic UIC: F0 = r^4 cos ((alpha-1) cos^2 + 1)") {
    SystemSpec s = fixtures::quartic_uic_system(0);
    EpsSeries nf = normal_form(s);
    TrigPoly want = tp(3, 0, zp(4) * (pv("alpha") - fixtures::pc(1))) + tp(1, 0, zp(4));
    CHECK(nf.F[0].num() == want);
}

TEST_CASE("Kukles order 1: F0 = 0 and F1 matches the published display") {
    EpsSeries nf = normal_form(fixtures::kukles_system(1));
    CHECK(nf.F[0].is_zero());
    REQUIRE(nf.F[1].is_polynomial());

    // S((-C^3 a13 + C^3 c11 - C c11) r^3 + (-C^2 a12 + C^2 c10 - c10) r^2
    //   - C a11 r - a10)
    // + (C^4 b12 - C^4 d10 + C^4 e13 - C^2 b12 + 2 C^2 d10 - d10) r^3
    // + (C^3 b11 + C^3 e12 - C b11) r^2 + (C^2 b10 + C^2 e11 - b10) r + C e10
    TrigPoly want;
    want += tp(3, 1, zp(3) * (-pv("a_1_3") + pv("c_1_1")));
    want += tp(1, 1, zp(3) * (-pv("c_1_1")));
    want += tp(2, 1, zp(2) * (-pv("a_1_2") + pv("c_1_0")));
    want += tp(0, 1, zp(2) * (-pv("c_1_0")));
    want += tp(1, 1, zp(1) * (-pv("a_1_1")));
    want += tp(0, 1, -pv("a_1_0"));
    want += tp(4, 0, zp(3) * (pv("b_1_2") - pv("d_1_0") + pv("e_1_3")));
    want += tp(2, 0, zp(3) * (-pv("b_1_2") + Rational(2) * pv("d_1_0")));
    want += tp(0, 0, zp(3) * (-pv("d_1_0")));
    want += tp(3, 0, zp(2) * (pv("b_1_1") + pv("e_1_2")));
    want += tp(1, 0, zp(2) * (-pv("b_1_1")));
    want += tp(2, 0, zp(1) * (pv("b_1_0") + pv("e_1_1")));
    want += tp(0, 0, zp(1) * (-pv("b_1_0")));
    want += tp(1, 0, pv("e_1_0"));
    CHECK(nf.F[1].num() == want);
}

TEST_CASE("truncated series tracks the full quotient to order eps^(k+1)") {
    // run at order k and k+2; the tail coefficient bounds the truncation error
    SystemSpec s = fixtures::kukles_system(4);
    const int k = 2;
    EpsSeries nf = normal_form(s);
    PolarParts parts = polar_substitute(s);

    auto g = fixtures::rng(707);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> radius(0.4, 1.4);
    std::map<VarId, double> vals;
    for (int j = 1; j <= 4; ++j) {
        std::string sj = std::to_string(j);
        for (int i = 0; i <= 3; ++i) vals[var_id("e_" + sj + "_" + std::to_string(i))] = 0.3 * i - 0.2;
        for (int i = 0; i <= 3; ++i) vals[var_id("a_" + sj + "_" + std::to_string(i))] = 0.1 * i + 0.2;
        for (int i = 0; i <= 2; ++i) vals[var_id("b_" + sj + "_" + std::to_string(i))] = -0.25 * i + 0.4;
        for (int i = 0; i <= 1; ++i) vals[var_id("c_" + sj + "_" + std::to_string(i))] = 0.15 + 0.1 * i;
        vals[var_id("d_" + sj + "_0")] = 0.5;
    }

    const double eps = 1e-4;
    for (int trial = 0; trial < 50; ++trial) {
        double th = angle(g), r = radius(g);
        std::map<VarId, double> v = vals;
        v[kVarZ] = r;
        auto eval_series = [&](const PolySeries& ps) {
            double acc = 0.0, ep = 1.0;
            for (const auto& c : ps.c) {
                acc += ep * c.eval(th, v);
                ep *= eps;
            }
            return acc;
        };
        double direct = eval_series(parts.d1) / eval_series(parts.d2);
        double truncated = 0.0, ep = 1.0;
        for (int i = 0; i <= k; ++i) {
            truncated += ep * nf.F[static_cast<std::size_t>(i)].eval(th, v);
            ep *= eps;
        }
        double tail = std::abs(nf.F[static_cast<std::size_t>(k + 1)].eval(th, v));
        double budget = 10.0 * (tail + 1.0) * std::pow(eps, k + 1);
        CHECK(std::abs(truncated - direct) <= budget);
    }
}

TEST_CASE("normal form coefficients are 2pi periodic") {
    EpsSeries nf = normal_form(fixtures::kukles_system(2));
    auto g = fixtures::rng(808);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::map<VarId, double> vals{{kVarZ, 0.9}};
    for (VarId v : nf.F[1].num().free_vars())
        if (v != kVarZ && v != kVarPi) vals[v] = 0.37;
    for (VarId v : nf.F[2].num().free_vars())
        if (v != kVarZ && v != kVarPi) vals.emplace(v, 0.37);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int i = 0; i < 10; ++i) {
        double th = angle(g);
        CHECK(nf.F[1].eval(th, vals) == Catch::Approx(nf.F[1].eval(th + two_pi, vals)).margin(1e-9));
        CHECK(nf.F[2].eval(th, vals) == Catch::Approx(nf.F[2].eval(th + two_pi, vals)).margin(1e-9));
    }
}

TEST_CASE("linear center: every order has denominator 1") {
    EpsSeries nf = normal_form(fixtures::kukles_system(3));
    for (const auto& F : nf.F) CHECK(F.is_polynomial());
}

TEST_CASE("origin must be singular") {
    SystemSpec s;
    s.P.add_term(0, 0, fixtures::pc(1));
    s.Q.add_term(1, 0, fixtures::pc(1));
    s.order = 0;
    CHECK_THROWS(normal_form(s));
}
