#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "avgcyc/averaging_exact.hpp"
#include "avgcyc/averaging_numeric.hpp"
#include "avgcyc/normal_form.hpp"
#include "avgcyc/parse.hpp"
#include "avgcyc/sturm.hpp"
#include "avgcyc/unperturbed.hpp"
#include "avgcyc/zero_scan.hpp"

namespace avgcyc {

/// Degrees (m, n1, n2, n3) of a system matching the generalized Kukles shape
///   x' = -y + sum eps^k l_m^k(x)
///   y' = x - sum eps^k (f_{n1}^k(x) + g_{n2}^k(x) y + h_{n3}^k(x) y^2 + d_0^k y^3).
struct KuklesShape {
    int m = 0, n1 = 0, n2 = 0, n3 = 0;
};

inline std::optional<KuklesShape> detect_kukles(const SystemSpec& spec) {
    PolyXY minus_y, plain_x;
    minus_y.add_term(0, 1, ParamPoly::constant(Rational(-1)));
    plain_x.add_term(1, 0, ParamPoly::constant(Rational(1)));
    if (spec.P != minus_y || spec.Q != plain_x) return std::nullopt;
    KuklesShape shape;
    bool cubic_seen = false;
    for (int i = 0; i < spec.order; ++i) {
        const PolyXY& p = spec.p[static_cast<std::size_t>(i)];
        const PolyXY& q = spec.q[static_cast<std::size_t>(i)];
        if (p.degree_y() > 0) return std::nullopt;
        if (q.degree_y() > 3) return std::nullopt;
        PolyXY cubic = q.coeff_of_y(3);
        if (!cubic.is_zero()) {
            if (cubic.degree_x() > 0) return std::nullopt;
            cubic_seen = true;
        }
        shape.m = std::max(shape.m, p.degree_x());
        shape.n1 = std::max(shape.n1, q.coeff_of_y(0).degree_x());
        shape.n2 = std::max(shape.n2, q.coeff_of_y(1).degree_x());
        shape.n3 = std::max(shape.n3, q.coeff_of_y(2).degree_x());
    }
    if (!cubic_seen && shape.m == 0 && shape.n1 == 0 && shape.n2 == 0 && shape.n3 == 0)
        return std::nullopt;
    return shape;
}

struct Report {
    std::string input_echo;
    int order = 0;
    std::vector<std::string> normal_form_text;  // F_0 .. F_k
    std::string path;                           // "exact" or "numeric"

    bool failed = false;
    std::string failure_stage, failure_reason;

    // unperturbed solution (numeric path)
    bool solved = false;
    int sep_m = 0;
    std::string sep_g, solution_r, solution_Y, domain_text;
    double domain_lo = 0.0, domain_hi = 0.0;

    std::vector<std::string> warnings;
    std::vector<std::string> averaged_text;  // f_1 .. f_k (exact text or grid summary)

    int first_nonzero_order = 0;  // 0: all vanish identically
    bool has_exact_count = false;
    SimpleRootCount exact_count;
    bool has_zero_report = false;
    ZeroReport zero_report;
    std::vector<std::pair<double, std::vector<double>>> radius_samples;  // (z*, r(theta_i, z*))

    std::optional<KuklesShape> kukles;
    std::optional<long> bound;

    // sample table for the CSV; row layout: z, f_1(z), ..., f_k(z)
    std::vector<std::vector<double>> samples;
};

namespace detail {

inline std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline std::string domain_to_string(const DomainInterval& D) {
    std::string out = "(" + fmt15(D.lo) + ", ";
    if (!D.hi_finite()) return out + "inf)";
    out += fmt15(D.hi);
    if (D.hi_exact) out += " = " + D.hi_exact->str();
    return out + ")";
}

}  // namespace detail

/// Uniformly spaced interior samples of the averaged functions:
/// z_i = lo + (hi - lo) (i + 1) / (n + 1). Rows are (z, f_1(z), ..., f_k(z)).
template <class Eval>
std::vector<std::vector<double>> sample_rows(Eval&& f, double lo, double hi, int n, int k) {
    if (n < 2) throw Error("emit_samples: need at least 2 samples");
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < n; ++i) {
        double z = lo + (hi - lo) * static_cast<double>(i + 1) / (n + 1);
        std::vector<double> row{z};
        std::vector<double> fv = f(z);
        for (int j = 1; j <= k; ++j) row.push_back(fv[static_cast<std::size_t>(j)]);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string samples_to_csv(const std::vector<std::vector<double>>& rows, int k) {
    std::string out = "z";
    for (int j = 1; j <= k; ++j) out += ",f" + std::to_string(j);
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += detail::fmt15(row[i]);
        }
        out += "\n";
    }
    return out;
}

inline Report run_pipeline(const SystemSpec& spec, const RunConfig& config) {
    Report rep;
    rep.order = config.order;
    rep.input_echo = print_system(spec, &config);
    rep.kukles = detect_kukles(spec);
    if (rep.kukles && config.order >= 1) {
        try {
            rep.bound = kukles_bound(rep.kukles->m, rep.kukles->n1, rep.kukles->n2, rep.kukles->n3,
                                     config.order);
        } catch (const BadDegrees&) {
            rep.bound.reset();
        }
    }

    std::map<VarId, Rational> bindings;
    for (const auto& [name, v] : config.bindings) {
        if (name == "z" || name == "pi")
            throw StageFailure("normal-form", "cannot bind reserved symbol " + name);
        bindings[var_id(name)] = v;
    }

    // STEP 1: normal form
    EpsSeries series;
    try {
        series = normal_form(spec);
    } catch (const Error& e) {
        throw StageFailure("normal-form", e.what());
    }
    for (const auto& F : series.F) rep.normal_form_text.push_back(F.to_string());

    bool exact = config.mode == RunMode::Exact ||
                 (config.mode == RunMode::Auto && series.F[0].is_zero());
    if (config.mode == RunMode::Exact && !series.F[0].is_zero()) {
        rep.failed = true;
        rep.failure_stage = "averaging";
        rep.failure_reason = "exact mode requires a vanishing unperturbed term";
        rep.path = "exact";
        return rep;
    }
    rep.path = exact ? "exact" : "numeric";
    int k = config.order;

    if (exact) {
        if (k == 0) return rep;
        EpsSeries current = series;
        ParamPoly first_nonzero_f;
        for (int j = 1; j <= k; ++j) {
            auto it = config.substitutions.find(j);
            if (it != config.substitutions.end()) {
                try {
                    current = apply_substitutions(current, it->second);
                } catch (const Error& e) {
                    throw StageFailure("averaging", e.what());
                }
            }
            ExactAveraged avg;
            try {
                avg = averaged_exact(current, j);
            } catch (const Error& e) {
                throw StageFailure("averaging", e.what());
            }
            for (int i = 1; i < j; ++i) {
                if (!avg.f[static_cast<std::size_t>(i)].is_zero())
                    rep.warnings.push_back("substitution script for order " + std::to_string(j) +
                                           " does not annihilate f_" + std::to_string(i));
            }
            const ParamPoly& fj = avg.f[static_cast<std::size_t>(j)];
            rep.averaged_text.push_back("f_" + std::to_string(j) + "(z) = " + fj.to_string());
            if (rep.first_nonzero_order == 0 && !fj.is_zero()) {
                rep.first_nonzero_order = j;
                first_nonzero_f = fj;
            }
        }

        // STEP 3: exact root counting on (0, inf) when the function is fully bound
        if (rep.first_nonzero_order > 0) {
            ParamPoly bound_f = first_nonzero_f.bind(bindings);
            bool fully_bound = true;
            for (VarId v : bound_f.free_vars())
                if (v != kVarZ && v != kVarPi) fully_bound = false;
            if (fully_bound) {
                rep.has_exact_count = true;
                rep.exact_count = count_simple_positive(bound_f);
            } else {
                rep.warnings.push_back("root counting skipped: f_" +
                                       std::to_string(rep.first_nonzero_order) +
                                       " still carries free parameters");
            }
            // sample table when fully bound
            if (fully_bound) {
                double hi = 2.0;
                auto eval1 = [&](double zv) {
                    std::vector<double> out(static_cast<std::size_t>(k) + 1, 0.0);
                    out[static_cast<std::size_t>(rep.first_nonzero_order)] =
                        bound_f.eval({{kVarZ, zv}});
                    return out;
                };
                rep.samples = sample_rows(eval1, 0.0, hi, config.sample_count, k);
            }
        } else if (k > 0) {
            rep.warnings.push_back("all averaged functions vanish identically");
            auto eval0 = [&](double) {
                return std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0);
            };
            rep.samples = sample_rows(eval0, 0.0, 1.0, config.sample_count, k);
        }
        return rep;
    }

    // numeric path: STEP 2 needs the closed-form unperturbed solution
    SeparableUnperturbed sep;
    PeriodicSolution sol;
    DomainInterval D;
    try {
        sep = classify_separable(series.F[0]);
        sol = solve_unperturbed(sep);
        D = domain_interval(sep, bindings);
    } catch (const Error& e) {
        rep.failed = true;
        rep.failure_stage = "unperturbed-solver";
        rep.failure_reason = e.what();
        return rep;
    }
    rep.solved = true;
    rep.sep_m = sep.m;
    rep.sep_g = sep.g.to_string();
    switch (sol.form) {
        case SolutionForm::Additive:
            rep.solution_r = "r(theta,z) = z + G(theta)";
            rep.solution_Y = "Y(theta,z) = 1";
            break;
        case SolutionForm::Exponential:
            rep.solution_r = "r(theta,z) = z*exp(G(theta))";
            rep.solution_Y = "Y(theta,z) = exp(G(theta))";
            break;
        case SolutionForm::Radical: {
            std::string base = sol.radical_base().to_string();
            rep.solution_r = "r(theta,z) = z*(" + base + ")^(" + sol.r_exponent().str() + ")";
            rep.solution_Y = "Y(theta,z) = (" + base + ")^(" + sol.Y_exponent().str() + ")";
            break;
        }
    }
    rep.solution_r += "   with G(theta) = " + sol.G.to_string();
    rep.domain_text = detail::domain_to_string(D);
    rep.domain_lo = D.lo;
    rep.domain_hi = D.hi;
    if (k == 0) return rep;

    EpsSeries current = series;
    for (int j = 1; j <= k; ++j) {
        auto it = config.substitutions.find(j);
        if (it == config.substitutions.end()) continue;
        try {
            current = apply_substitutions(current, it->second);
        } catch (const Error& e) {
            throw StageFailure("averaging", e.what());
        }
    }

    double scan_lo = D.lo;
    double scan_hi = D.hi_finite() ? D.hi : D.lo + 4.0;
    if (!D.hi_finite())
        rep.warnings.push_back("unbounded domain: scan window truncated to (" +
                               detail::fmt15(scan_lo) + ", " + detail::fmt15(scan_hi) + ")");

    try {
        NumericAveraging engine(current, sol, k, bindings, D);
        auto evalv = [&](double zv) { return engine.eval(zv).f; };

        rep.samples = sample_rows(evalv, scan_lo, scan_hi, config.sample_count, k);

        // identify the first order whose values rise above the annihilation
        // threshold on the sample grid
        std::vector<double> fmax(static_cast<std::size_t>(k) + 1, 0.0);
        for (const auto& row : rep.samples)
            for (int j = 1; j <= k; ++j)
                fmax[static_cast<std::size_t>(j)] =
                    std::max(fmax[static_cast<std::size_t>(j)], std::abs(row[static_cast<std::size_t>(j)]));
        for (int j = 1; j <= k; ++j) {
            rep.averaged_text.push_back("f_" + std::to_string(j) +
                                        ": max |f| on grid = " + detail::fmt15(fmax[static_cast<std::size_t>(j)]));
            if (rep.first_nonzero_order == 0 && fmax[static_cast<std::size_t>(j)] > 1e-9)
                rep.first_nonzero_order = j;
        }
        for (int j = 1; j < rep.first_nonzero_order; ++j)
            if (fmax[static_cast<std::size_t>(j)] > 1e-9)
                rep.warnings.push_back("substitution script does not annihilate f_" + std::to_string(j));

        if (rep.first_nonzero_order > 0) {
            int jstar = rep.first_nonzero_order;
            auto f1 = [&](double zv) { return engine.eval(zv).f[static_cast<std::size_t>(jstar)]; };
            rep.has_zero_report = true;
            rep.zero_report = numeric_zero_scan(f1, scan_lo, scan_hi, config.grid, config.tol);
            rep.zero_report.order = jstar;
            for (const auto& zr : rep.zero_report.zeros) {
                std::vector<double> rs;
                for (int t = 0; t <= 8; ++t)
                    rs.push_back(engine.solution().r(6.283185307179586 * t / 8.0, zr.location));
                rep.radius_samples.push_back({zr.location, rs});
            }
        }
    } catch (const Error& e) {
        rep.failed = true;
        rep.failure_stage = "averaging";
        rep.failure_reason = e.what();
        return rep;
    }
    return rep;
}

inline std::string render_text(const Report& rep) {
    std::ostringstream out;
    out << "== averaging pipeline report ==\n\n";
    out << "-- input --\n" << rep.input_echo << "\n";
    out << "-- normal form (C = cos(theta), S = sin(theta), z = radial variable) --\n";
    for (std::size_t i = 0; i < rep.normal_form_text.size(); ++i)
        out << "F_" << i << " = " << rep.normal_form_text[i] << "\n";
    out << "\npath: " << rep.path << "\n";
    if (rep.kukles) {
        out << "kukles shape: m = " << rep.kukles->m << ", n1 = " << rep.kukles->n1
            << ", n2 = " << rep.kukles->n2 << ", n3 = " << rep.kukles->n3 << "\n";
        if (rep.bound)
            out << "bound: floor(k(N-1)/2) = " << *rep.bound << " limit cycles at order "
                << rep.order << "\n";
    }
    if (rep.failed) {
        out << "\nFAILED at stage " << rep.failure_stage << ": " << rep.failure_reason << "\n";
        return out.str();
    }
    if (rep.solved) {
        out << "\n-- unperturbed solution --\n";
        out << "separable: m = " << rep.sep_m << ", g(theta) = " << rep.sep_g << "\n";
        out << rep.solution_r << "\n" << rep.solution_Y << "\n";
        out << "D = " << rep.domain_text << "\n";
    }
    if (!rep.averaged_text.empty()) {
        out << "\n-- averaged functions --\n";
        for (const auto& s : rep.averaged_text) out << s << "\n";
    }
    for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
    if (rep.first_nonzero_order > 0)
        out << "first non-vanishing averaged function: f_" << rep.first_nonzero_order << "\n";
    else if (!rep.averaged_text.empty())
        out << "all averaged functions vanish\n";
    if (rep.has_exact_count) {
        out << "\n-- root analysis (exact) --\n";
        if (rep.exact_count.identically_zero) {
            out << "f identically zero\n";
        } else {
            out << "simple positive roots: " << rep.exact_count.count << " (distinct: "
                << rep.exact_count.distinct_total << ")\n";
        }
    }
    if (rep.has_zero_report) {
        out << "\n-- root analysis (numeric scan) --\n";
        out << "zeros of f_" << rep.zero_report.order << ": " << rep.zero_report.zeros.size()
            << " (simple: " << rep.zero_report.simple_count() << ")\n";
        for (const auto& zr : rep.zero_report.zeros)
            out << "  z* = " << detail::fmt15(zr.location) << "  f' ~ " << detail::fmt15(zr.derivative)
                << (zr.simple ? "  [simple]" : "  [not certified]") << "\n";
        for (double t : rep.zero_report.tangency_candidates)
            out << "  tangency candidate near z = " << detail::fmt15(t) << "\n";
        for (const auto& [zstar, rs] : rep.radius_samples) {
            out << "  r(theta, " << detail::fmt15(zstar) << ") at theta = j*pi/4: ";
            for (std::size_t i = 0; i < rs.size(); ++i) out << (i ? ", " : "") << detail::fmt15(rs[i]);
            out << "\n";
        }
    }
    return out.str();
}

/// Machine-readable mirror of the report (keys are sorted by the json
/// object's map, so the serialization is deterministic).
inline nlohmann::json render_json(const Report& rep) {
    nlohmann::json j;
    j["order"] = rep.order;
    j["path"] = rep.path;
    j["normal_form"] = rep.normal_form_text;
    j["input"] = rep.input_echo;
    j["failed"] = rep.failed;
    if (rep.failed) {
        j["failure"] = {{"stage", rep.failure_stage}, {"reason", rep.failure_reason}};
    }
    if (rep.kukles) {
        j["kukles"] = {{"m", rep.kukles->m},
                       {"n1", rep.kukles->n1},
                       {"n2", rep.kukles->n2},
                       {"n3", rep.kukles->n3}};
        if (rep.bound) j["kukles"]["bound"] = *rep.bound;
    }
    if (rep.solved) {
        j["solution"] = {{"m", rep.sep_m},
                         {"g", rep.sep_g},
                         {"r", rep.solution_r},
                         {"Y", rep.solution_Y},
                         {"domain", rep.domain_text},
                         {"domain_lo", rep.domain_lo},
                         {"domain_hi", rep.domain_hi}};
    }
    j["averaged"] = rep.averaged_text;
    j["warnings"] = rep.warnings;
    j["first_nonzero_order"] = rep.first_nonzero_order;
    if (rep.has_exact_count) {
        j["exact_roots"] = {{"identically_zero", rep.exact_count.identically_zero},
                            {"simple_positive", rep.exact_count.count},
                            {"distinct_positive", rep.exact_count.distinct_total}};
    }
    if (rep.has_zero_report) {
        nlohmann::json zeros = nlohmann::json::array();
        for (const auto& zr : rep.zero_report.zeros)
            zeros.push_back({{"z", zr.location}, {"derivative", zr.derivative}, {"simple", zr.simple}});
        j["zero_scan"] = {{"order", rep.zero_report.order},
                          {"zeros", zeros},
                          {"tangency_candidates", rep.zero_report.tangency_candidates},
                          {"identically_zero", rep.zero_report.identically_zero}};
    }
    return j;
}

}  // namespace avgcyc
