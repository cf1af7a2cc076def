#pragma once

// Shared builders and oracles for the test suites. Everything here is
// test-only; the oracles are deliberately independent of the code paths they
// check (tuple enumeration instead of Bell expansion, quadrature instead of
// exact antiderivatives).

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "avgcyc/avgcyc.hpp"

namespace fixtures {

using namespace avgcyc;

inline ParamPoly pv(const std::string& n) { return ParamPoly::variable(n); }
inline ParamPoly pz(std::int32_t e = 1) { return ParamPoly::variable(kVarZ, e); }
inline ParamPoly ppi() { return ParamPoly::variable(kVarPi); }
inline ParamPoly pc(long n, long d = 1) { return ParamPoly::constant(Rational(n, d)); }

// ---------------------------------------------------------------- systems --

/// Generalized Kukles family of order k (cubic l and f, quadratic g, linear
/// h, constant d), fully symbolic.
inline SystemSpec kukles_system(int k) {
    SystemSpec s;
    s.P.add_term(0, 1, pc(-1));
    s.Q.add_term(1, 0, pc(1));
    s.order = k;
    for (int j = 1; j <= k; ++j) {
        std::string sj = std::to_string(j);
        PolyXY pj, qj;
        for (int i = 0; i <= 3; ++i) pj.add_term(i, 0, pv("e_" + sj + "_" + std::to_string(i)));
        for (int i = 0; i <= 3; ++i) qj.add_term(i, 0, -pv("a_" + sj + "_" + std::to_string(i)));
        for (int i = 0; i <= 2; ++i) qj.add_term(i, 1, -pv("b_" + sj + "_" + std::to_string(i)));
        for (int i = 0; i <= 1; ++i) qj.add_term(i, 2, -pv("c_" + sj + "_" + std::to_string(i)));
        qj.add_term(0, 3, -pv("d_" + sj + "_0"));
        s.p.push_back(pj);
        s.q.push_back(qj);
    }
    return s;
}

/// Cubic system with a uniform isochronous center (first form), perturbed at
/// first order by full cubic polynomials with symbolic coefficients pa_i_j,
/// pb_i_j.
inline SystemSpec collins_symbolic() {
    SystemSpec s;
    s.P.add_term(0, 1, pc(-1));
    s.P.add_term(2, 1, pc(1));
    s.Q.add_term(1, 0, pc(1));
    s.Q.add_term(1, 2, pc(1));
    s.order = 1;
    PolyXY p1, q1;
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j) {
            p1.add_term(i, j, pv("pa_" + std::to_string(i) + "_" + std::to_string(j)));
            q1.add_term(i, j, pv("pb_" + std::to_string(i) + "_" + std::to_string(j)));
        }
    s.p.push_back(p1);
    s.q.push_back(q1);
    return s;
}

/// The concrete three-cycle instance of the perturbed cubic UIC family, with
/// the two remaining free coefficients b03, b21.
inline SystemSpec collins_concrete(const Rational& b03, const Rational& b21) {
    SystemSpec s;
    s.P.add_term(0, 1, pc(-1));
    s.P.add_term(2, 1, pc(1));
    s.Q.add_term(1, 0, pc(1));
    s.Q.add_term(1, 2, pc(1));
    s.order = 1;
    PolyXY p1, q1;
    p1.add_term(1, 0, ParamPoly::constant(Rational(-26) - b03 - b21));
    p1.add_term(3, 0, ParamPoly::constant(Rational(61, 2) + b21));
    p1.add_term(1, 2, ParamPoly::constant(Rational(-11, 2) + b03));
    q1.add_term(0, 1, ParamPoly::constant(Rational(30) + b21 + b03));
    q1.add_term(2, 1, ParamPoly::constant(b21));
    q1.add_term(0, 3, ParamPoly::constant(b03));
    s.p.push_back(p1);
    s.q.push_back(q1);
    return s;
}

/// Quartic UIC subfamily x' = -y + x(alpha x^3 + x y^2), perturbed at orders
/// 1..k by lam_k (x, y) + homogeneous quartics with coefficients a_k_i_j,
/// b_k_i_j. alpha stays symbolic (bind it per test).
inline SystemSpec quartic_uic_system(int k) {
    SystemSpec s;
    ParamPoly alpha = pv("alpha");
    s.P.add_term(0, 1, pc(-1));
    s.P.add_term(4, 0, alpha);
    s.P.add_term(2, 2, pc(1));
    s.Q.add_term(1, 0, pc(1));
    s.Q.add_term(3, 1, alpha);
    s.Q.add_term(1, 3, pc(1));
    s.order = k;
    for (int j = 1; j <= k; ++j) {
        std::string sj = std::to_string(j);
        PolyXY pj, qj;
        pj.add_term(1, 0, pv("lam_" + sj));
        qj.add_term(0, 1, pv("lam_" + sj));
        for (int i = 0; i <= 4; ++i) {
            pj.add_term(i, 4 - i, pv("a_" + sj + "_" + std::to_string(i) + "_" + std::to_string(4 - i)));
            qj.add_term(i, 4 - i, pv("b_" + sj + "_" + std::to_string(i) + "_" + std::to_string(4 - i)));
        }
        s.p.push_back(pj);
        s.q.push_back(qj);
    }
    return s;
}

/// Example quintic with dr/dtheta = r^5 cos sin.
inline SystemSpec quintic_system() {
    SystemSpec s;
    s.P.add_term(0, 1, pc(-1));
    s.P.add_term(4, 1, pc(1));
    s.P.add_term(2, 3, pc(1));
    s.Q.add_term(1, 0, pc(1));
    s.Q.add_term(3, 2, pc(1));
    s.Q.add_term(1, 4, pc(1));
    s.order = 0;
    return s;
}

/// Example cubic with dr/dtheta = -2 r cos sin.
inline SystemSpec cubic_exp_system() {
    SystemSpec s;
    s.P.add_term(2, 1, pc(-3));
    s.P.add_term(0, 3, pc(-1));
    s.Q.add_term(3, 0, pc(1));
    s.Q.add_term(1, 2, pc(-1));
    s.order = 0;
    return s;
}

// ----------------------------------------------------- chain manipulation --

/// Coefficient of pi^1 z^zpow in an exact averaged function.
inline ParamPoly fcoeff(const ParamPoly& f, int zpow) {
    return f.coeff_of(kVarPi, 1).coeff_of(kVarZ, zpow);
}

/// Solves the affine equation C = 0 for the parameter `pname` (C must be
/// affine in it with a single-term leading coefficient): p <- -rest / k.
inline Substitution solve_for(const ParamPoly& C, const std::string& pname) {
    VarId p = var_id(pname);
    auto dr = C.degree_range(p);
    if (!dr || dr->second != 1) throw Error("solve_for: not affine in " + pname);
    ParamPoly k = C.coeff_of(p, 1);
    ParamPoly rest = C.coeff_of(p, 0);
    if (!k.is_single_term()) throw Error("solve_for: leading coefficient of " + pname + " is not a single term");
    return {p, -rest.divide_by_term(k)};
}

/// The annihilation chain for the symbolic Kukles system: after stage j the
/// series has f_1 = ... = f_j = 0 identically. Stages follow the published
/// substitution pattern (branch with 5 b_1_2 + 12 d_1_0 = 0 at stage 3 and
/// c_1_1 = 0 at stage 4). Returns the scripts applied per target order.
struct KuklesChain {
    EpsSeries series;                                   // after all stages
    std::map<int, std::vector<Substitution>> scripts;   // keyed by target order j+1
};

inline KuklesChain kukles_chain(const EpsSeries& nf, int annihilate_upto) {
    KuklesChain chain;
    chain.series = nf;
    for (int j = 1; j <= annihilate_upto; ++j) {
        auto avg = averaged_exact(chain.series, j);
        const ParamPoly& fj = avg.f[static_cast<std::size_t>(j)];
        std::vector<Substitution> script;
        if (j == 1) {
            script.push_back(solve_for(fcoeff(fj, 3), "e_1_3"));
            script.push_back(solve_for(fcoeff(fj, 1), "e_1_1"));
        } else if (j == 2) {
            script.push_back(solve_for(fcoeff(fj, 1), "e_2_1"));
            script.push_back(solve_for(fcoeff(fj, 3), "e_2_3"));
            script.push_back(solve_for(fcoeff(fj, 5), "a_1_3"));
        } else if (j == 3) {
            // branch choice kills the leading coefficient; then solve the rest
            script.push_back({var_id("b_1_2"), pv("d_1_0") * Rational(-12, 5)});
            chain.series = apply_substitutions(chain.series, {script.back()});
            auto avg2 = averaged_exact(chain.series, 3);
            const ParamPoly& f3 = avg2.f[3];
            script.push_back(solve_for(fcoeff(f3, 1), "e_3_1"));
            script.push_back(solve_for(fcoeff(f3, 3), "e_3_3"));
            script.push_back(solve_for(fcoeff(f3, 5), "a_2_3"));
            chain.series = apply_substitutions(
                chain.series, {script.begin() + 1, script.end()});
            chain.scripts[j + 1] = script;
            continue;
        } else if (j == 4) {
            script.push_back({var_id("c_1_1"), ParamPoly::zero()});
            chain.series = apply_substitutions(chain.series, {script.back()});
            auto avg2 = averaged_exact(chain.series, 4);
            const ParamPoly& f4 = avg2.f[4];
            script.push_back(solve_for(fcoeff(f4, 1), "e_4_1"));
            script.push_back(solve_for(fcoeff(f4, 3), "e_4_3"));
            script.push_back(solve_for(fcoeff(f4, 5), "a_3_3"));
            script.push_back(solve_for(fcoeff(f4, 7), "b_2_2"));
            chain.series = apply_substitutions(
                chain.series, {script.begin() + 1, script.end()});
            chain.scripts[j + 1] = script;
            continue;
        } else {
            throw Error("kukles_chain: no published pattern beyond order 5");
        }
        chain.series = apply_substitutions(chain.series, script);
        chain.scripts[j + 1] = script;
    }
    return chain;
}

// -------------------------------------------------------------- randomness --

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Rational random_rational(std::mt19937_64& g, long lo = -9, long hi = 9,
                                long den_max = 4) {
    std::uniform_int_distribution<long> num(lo, hi);
    std::uniform_int_distribution<long> den(1, den_max);
    return Rational(num(g), den(g));
}

inline ParamPoly random_parampoly(std::mt19937_64& g, const std::vector<std::string>& vars,
                                  int max_terms = 6, int max_deg = 3) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<std::size_t> pick(0, vars.empty() ? 0 : vars.size() - 1);
    ParamPoly out;
    int n = nterms(g);
    for (int t = 0; t < n; ++t) {
        Monomial m;
        if (!vars.empty()) {
            int d = deg(g);
            for (int i = 0; i < d; ++i) m = m.times(Monomial::var(var_id(vars[pick(g)])));
        }
        Rational c = random_rational(g);
        if (!c.is_zero()) out.add_term(m, c);
    }
    return out;
}

inline MixedTrigPoly random_mixedtrig(std::mt19937_64& g, int max_terms = 5, int max_theta = 2,
                                      int max_cos = 8) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> tpow(0, max_theta);
    std::uniform_int_distribution<int> cpow(0, max_cos);
    std::uniform_int_distribution<int> spow(0, 1);
    MixedTrigPoly out;
    int n = nterms(g);
    for (int t = 0; t < n; ++t) {
        Rational c = random_rational(g);
        if (c.is_zero()) continue;
        out.add_raw(tpow(g), cpow(g), spow(g), ParamPoly::constant(c));
    }
    return out;
}

// ---------------------------------------------------------------- oracles --

/// Adaptive Simpson quadrature (independent cross-check for the exact period
/// integrals). The interval is pre-split into panels so the symmetries of
/// periodic integrands cannot fool the top-level error estimate.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13, int panels = 16) {
    auto simpson = [](double fa, double fm, double fb, double h) {
        return h / 6.0 * (fa + 4.0 * fm + fb);
    };
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a0, double b0, double fa0, double fm0, double fb0, double whole,
            int d) -> double {
        double m0 = 0.5 * (a0 + b0);
        double lm = 0.5 * (a0 + m0), rm = 0.5 * (m0 + b0);
        double flm = f(lm), frm = f(rm);
        double left = simpson(fa0, flm, fm0, m0 - a0);
        double right = simpson(fm0, frm, fb0, b0 - m0);
        if (d > 50 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(a0, m0, fa0, flm, fm0, left, d + 1) + rec(m0, b0, fm0, frm, fb0, right, d + 1);
    };
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        double a0 = a + (b - a) * static_cast<double>(i) / panels;
        double b0 = a + (b - a) * static_cast<double>(i + 1) / panels;
        double m0 = 0.5 * (a0 + b0);
        double fa0 = f(a0), fm0 = f(m0), fb0 = f(b0);
        total += rec(a0, b0, fa0, fm0, fb0, simpson(fa0, fm0, fb0, b0 - a0), 0);
    }
    return total;
}

/// Numeric averaged functions straight from the tuple-form recursion
///   y_i' = i! ( F_i + sum_{l=1..i} sum_{S_l} w(b) d^L F_{i-l} prod y_j^{b_j} ),
/// w(b) = prod_j 1/(b_j! (j!)^{b_j}), S_l = { b : sum j b_j = l }. This is an
/// independent organization of the recursion (no Bell polynomials) used as an
/// oracle for the production path.
class TupleRecursionOracle {
public:
    TupleRecursionOracle(const EpsSeries& series, const PeriodicSolution& sol, int k,
                         const std::map<VarId, Rational>& bindings)
        : k_(k), bound_(sol, bindings) {
        // symbolic z-derivatives, then numeric binding
        for (int j = 0; j <= k; ++j) {
            std::vector<TrigRational> ders;
            TrigPoly N = series.F[static_cast<std::size_t>(j)].num();
            TrigPoly D = series.F[static_cast<std::size_t>(j)].den();
            for (int m = 0; m <= k; ++m) {
                ders.emplace_back(N, D.pow(static_cast<unsigned>(m) + 1));
                N = N.derivative_z() * D - N * D.derivative_z() * Rational(m + 1);
            }
            std::vector<std::function<double(double, double)>> evals;
            for (int m = 0; m <= k; ++m) {
                TrigRational fr = ders[static_cast<std::size_t>(m)].bind(bindings);
                evals.push_back([fr](double theta, double r) { return fr.eval(theta, {{kVarZ, r}}); });
            }
            dF_.push_back(std::move(evals));
        }
        // tuples of S_l for l = 1..k with weights
        tuples_.resize(static_cast<std::size_t>(k) + 1);
        for (int l = 1; l <= k; ++l) {
            std::vector<std::int32_t> b(static_cast<std::size_t>(l), 0);
            enumerate(l, 1, l, b);
        }
    }

    std::vector<double> eval(double z) const {
        auto rhs = [&](double theta, const double* y, double* dy) {
            double r = bound_.r(theta, z);
            for (int i = 1; i <= k_; ++i) {
                double acc = dF_[static_cast<std::size_t>(i)][0](theta, r);
                for (int l = 1; l <= i; ++l) {
                    for (const auto& [b, w, L] : tuples_[static_cast<std::size_t>(l)]) {
                        double prod = 1.0;
                        bool usable = true;
                        for (std::size_t jj = 0; jj < b.size(); ++jj) {
                            for (std::int32_t e = 0; e < b[jj]; ++e) {
                                if (static_cast<int>(jj) + 1 > k_) { usable = false; break; }
                                prod *= y[jj];
                            }
                            if (!usable) break;
                        }
                        if (!usable) continue;
                        acc += w * dF_[static_cast<std::size_t>(i - l)][static_cast<std::size_t>(L)](theta, r) * prod;
                    }
                }
                double fac = 1.0;
                for (int t = 2; t <= i; ++t) fac *= t;
                dy[i - 1] = fac * acc;
            }
        };
        constexpr double two_pi = 6.283185307179586476925286766559;
        std::vector<double> y = integrate_dopri5(
            rhs, 0.0, two_pi, std::vector<double>(static_cast<std::size_t>(k_), 0.0),
            OdeOptions{1e-12, 1e-14, 2000000});
        std::vector<double> f(static_cast<std::size_t>(k_) + 1, 0.0);
        double fac = 1.0;
        for (int i = 1; i <= k_; ++i) {
            fac *= i;
            f[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i - 1)] / fac;
        }
        return f;
    }

private:
    struct Tuple {
        std::vector<std::int32_t> b;
        double w;
        int L;
    };

    void enumerate(int l, int j, int weight_left, std::vector<std::int32_t>& b) {
        if (j > l) {
            if (weight_left != 0) return;
            Rational w(1);
            int L = 0;
            for (int t = 1; t <= l; ++t) {
                int bt = b[static_cast<std::size_t>(t - 1)];
                L += bt;
                w /= Rational::factorial(static_cast<unsigned>(bt));
                w /= Rational::factorial(static_cast<unsigned>(t)).pow(bt);
            }
            if (L == 0) return;  // the empty tuple contributes nothing
            tuples_[static_cast<std::size_t>(l)].push_back({b, w.to_double(), L});
            return;
        }
        for (int bj = 0; bj * j <= weight_left; ++bj) {
            b[static_cast<std::size_t>(j - 1)] = bj;
            enumerate(l, j + 1, weight_left - j * bj, b);
        }
        b[static_cast<std::size_t>(j - 1)] = 0;
    }

    int k_;
    BoundSolution bound_;
    std::vector<std::vector<std::function<double(double, double)>>> dF_;
    std::vector<std::vector<Tuple>> tuples_;
};

}  // namespace fixtures
