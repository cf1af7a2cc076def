#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "avgcyc/averaging_exact.hpp"
#include "avgcyc/system.hpp"

namespace avgcyc {

enum class RunMode { Auto, Exact, Numeric };

/// Everything the pipeline needs besides the system itself.
struct RunConfig {
    std::string input_path;
    int order = -1;  // -1: infer from the largest perturbation index
    RunMode mode = RunMode::Auto;
    std::map<int, std::vector<Substitution>> substitutions;  // keyed by order j
    std::map<std::string, Rational> bindings;
    int grid = 2048;
    double tol = 1e-10;
    int sample_count = 100;
    std::string out_base;      // report paths <out>.txt / <out>.json
    std::string samples_path;  // samples CSV
};

namespace detail {

/// Recursive-descent parser for polynomial expressions over x, y and
/// parameter names [a-zA-Z][a-zA-Z0-9_]*, with rational constants, + - * /,
/// integer exponents (possibly negative) and parentheses. Division requires a
/// single-term divisor.
class ExprParser {
public:
    ExprParser(const std::string& text, int line, bool allow_xy)
        : text_(text), line_(line), allow_xy_(allow_xy) {}

    PolyXY parse() {
        PolyXY v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, static_cast<int>(pos_) + 1, msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    PolyXY expr() {
        PolyXY acc = term();
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    PolyXY term() {
        PolyXY acc = unary();
        for (;;) {
            if (eat('*')) {
                acc = acc * unary();
            } else if (eat('/')) {
                acc = divide(acc, unary());
            } else {
                return acc;
            }
        }
    }

    PolyXY divide(const PolyXY& num, const PolyXY& den) {
        // the divisor must collapse to a single ParamPoly term
        if (den.terms().size() != 1) fail("division requires a single-term divisor");
        const auto& [key, coef] = *den.terms().begin();
        if (key.first != 0 || key.second != 0) fail("division by x/y powers is not supported");
        if (!coef.is_single_term()) fail("division requires a single-term divisor");
        PolyXY out;
        ParamPoly inv = ParamPoly::constant(Rational(1)).divide_by_term(coef);
        for (const auto& [k, c] : num.terms()) out.add_term(k.first, k.second, c * inv);
        return out;
    }

    PolyXY unary() {
        if (eat('-')) return -unary();
        return power();
    }

    PolyXY power() {
        PolyXY base = primary();
        if (eat('^')) {
            skip_ws();
            bool neg = eat('-');
            std::int32_t e = integer();
            if (neg) e = -e;
            return pow_xy(base, e);
        }
        return base;
    }

    PolyXY pow_xy(const PolyXY& base, std::int32_t e) {
        if (e >= 0) {
            PolyXY out;
            out.add_term(0, 0, ParamPoly::constant(Rational(1)));
            for (std::int32_t i = 0; i < e; ++i) out = out * base;
            return out;
        }
        // negative exponent: single parameter-term base only
        if (base.terms().size() != 1) fail("negative exponent on a sum");
        const auto& [key, coef] = *base.terms().begin();
        if (key.first != 0 || key.second != 0) fail("negative exponent on x/y");
        if (!coef.is_single_term()) fail("negative exponent on a sum");
        const auto& [mono, c] = *coef.terms().begin();
        PolyXY out;
        out.add_term(0, 0, ParamPoly::term(mono.pow(e), c.pow(e)));
        return out;
    }

    std::int32_t integer() {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected an integer");
        long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1000000) fail("exponent too large");
            ++pos_;
        }
        return static_cast<std::int32_t>(v);
    }

    PolyXY primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            PolyXY v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                digits += text_[pos_++];
            PolyXY out;
            out.add_term(0, 0, ParamPoly::constant(Rational::from_string(digits)));
            return out;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                name += text_[pos_++];
            PolyXY out;
            if (name == "x" || name == "y") {
                if (!allow_xy_) fail("x and y are not allowed here");
                out.add_term(name == "x" ? 1 : 0, name == "x" ? 0 : 1,
                             ParamPoly::constant(Rational(1)));
            } else if (name == "z") {
                fail("z is reserved for the radial variable");
            } else if (name == "pi") {
                fail("pi is reserved for the transcendental unit");
            } else {
                out.add_term(0, 0, ParamPoly::variable(name));
            }
            return out;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
    bool allow_xy_;
};

inline PolyXY parse_poly_xy(const std::string& text, int line) {
    return ExprParser(text, line, true).parse();
}

inline ParamPoly parse_parampoly(const std::string& text, int line) {
    PolyXY p = ExprParser(text, line, false).parse();
    ParamPoly out;
    for (const auto& [k, c] : p.terms()) out += c;  // x/y keys cannot appear
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

/// Parses the textual system format:
///   [center]                P = ..., Q = ...
///   [perturbation.k]        p = ..., q = ...      (k = 1, 2, ...)
///   [bindings]              name = rational
///   [substitutions.order_j] name = polynomial in parameters (ordered)
///   [run]                   order/mode/grid/tol/sample_count/out/samples
/// '#' starts a comment; sections may appear in any order.
inline std::pair<SystemSpec, RunConfig> parse_system_text(const std::string& text,
                                                          const std::string& path = "") {
    SystemSpec spec;
    RunConfig config;
    config.input_path = path;

    std::map<int, std::pair<std::optional<PolyXY>, std::optional<PolyXY>>> perturbations;
    std::optional<PolyXY> P, Q;

    enum class Section { None, Center, Perturbation, Bindings, Substitutions, Run };
    Section section = Section::None;
    int section_index = 0;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, 1, "unterminated section header");
            std::string name = line.substr(1, line.size() - 2);
            if (name == "center") {
                section = Section::Center;
            } else if (name.rfind("perturbation.", 0) == 0) {
                section = Section::Perturbation;
                try {
                    section_index = std::stoi(name.substr(13));
                } catch (...) {
                    throw ParseError(lineno, 1, "bad perturbation index");
                }
                if (section_index < 1) throw ParseError(lineno, 1, "perturbation index must be >= 1");
            } else if (name == "bindings") {
                section = Section::Bindings;
            } else if (name.rfind("substitutions.order_", 0) == 0) {
                section = Section::Substitutions;
                try {
                    section_index = std::stoi(name.substr(20));
                } catch (...) {
                    throw ParseError(lineno, 1, "bad substitution order");
                }
                if (section_index < 1) throw ParseError(lineno, 1, "substitution order must be >= 1");
            } else if (name == "run") {
                section = Section::Run;
            } else {
                throw ParseError(lineno, 1, "unknown section [" + name + "]");
            }
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, 1, "expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(lineno, 1, "empty key");
        if (value.empty()) throw ParseError(lineno, static_cast<int>(eq) + 2, "empty value");

        switch (section) {
            case Section::None:
                throw ParseError(lineno, 1, "assignment outside any section");
            case Section::Center: {
                if (key == "P") {
                    if (P) throw ParseError(lineno, 1, "duplicate P");
                    P = detail::parse_poly_xy(value, lineno);
                } else if (key == "Q") {
                    if (Q) throw ParseError(lineno, 1, "duplicate Q");
                    Q = detail::parse_poly_xy(value, lineno);
                } else {
                    throw ParseError(lineno, 1, "center section takes only P and Q");
                }
                break;
            }
            case Section::Perturbation: {
                auto& slot = perturbations[section_index];
                if (key == "p") {
                    if (slot.first) throw ParseError(lineno, 1, "duplicate p");
                    slot.first = detail::parse_poly_xy(value, lineno);
                } else if (key == "q") {
                    if (slot.second) throw ParseError(lineno, 1, "duplicate q");
                    slot.second = detail::parse_poly_xy(value, lineno);
                } else {
                    throw ParseError(lineno, 1, "perturbation sections take only p and q");
                }
                break;
            }
            case Section::Bindings: {
                ParamPoly v = detail::parse_parampoly(value, lineno);
                if (!v.is_constant()) throw ParseError(lineno, 1, "binding value must be a rational");
                config.bindings[key] = v.constant_value();
                break;
            }
            case Section::Substitutions: {
                ParamPoly rhs = detail::parse_parampoly(value, lineno);
                config.substitutions[section_index].push_back({var_id(key), rhs});
                break;
            }
            case Section::Run: {
                if (key == "order") {
                    config.order = std::stoi(value);
                } else if (key == "mode") {
                    if (value == "auto")
                        config.mode = RunMode::Auto;
                    else if (value == "exact")
                        config.mode = RunMode::Exact;
                    else if (value == "numeric")
                        config.mode = RunMode::Numeric;
                    else
                        throw ParseError(lineno, 1, "mode must be auto, exact or numeric");
                } else if (key == "grid") {
                    config.grid = std::stoi(value);
                    if (config.grid < 2) throw ParseError(lineno, 1, "grid must be >= 2");
                } else if (key == "tol") {
                    config.tol = std::stod(value);
                    if (!(config.tol > 0)) throw ParseError(lineno, 1, "tol must be positive");
                } else if (key == "sample_count") {
                    config.sample_count = std::stoi(value);
                    if (config.sample_count < 2)
                        throw ParseError(lineno, 1, "sample_count must be >= 2");
                } else if (key == "out") {
                    config.out_base = value;
                } else if (key == "samples") {
                    config.samples_path = value;
                } else {
                    throw ParseError(lineno, 1, "unknown run option '" + key + "'");
                }
                break;
            }
        }
    }

    if (!P || !Q) throw ParseError(lineno, 1, "missing [center] P and Q");
    spec.P = *P;
    spec.Q = *Q;

    int max_pert = 0;
    for (const auto& [idx, pq] : perturbations) max_pert = std::max(max_pert, idx);
    if (config.order < 0) config.order = std::max(max_pert, 0);
    if (max_pert > config.order)
        throw ParseError(lineno, 1,
                         "perturbation index " + std::to_string(max_pert) +
                             " exceeds the averaging order " + std::to_string(config.order));
    spec.order = config.order;
    spec.p.assign(static_cast<std::size_t>(config.order), PolyXY::zero());
    spec.q.assign(static_cast<std::size_t>(config.order), PolyXY::zero());
    for (const auto& [idx, pq] : perturbations) {
        if (pq.first) spec.p[static_cast<std::size_t>(idx - 1)] = *pq.first;
        if (pq.second) spec.q[static_cast<std::size_t>(idx - 1)] = *pq.second;
    }

    // degree guard
    std::int32_t deg = std::max(spec.P.total_degree(), spec.Q.total_degree());
    for (const auto& f : spec.p) deg = std::max(deg, f.total_degree());
    for (const auto& f : spec.q) deg = std::max(deg, f.total_degree());
    if (deg > 12) throw DegreeOverflow(deg);

    for (const auto& [j, subs] : config.substitutions)
        if (j > config.order + 1)
            throw ParseError(lineno, 1, "substitution order " + std::to_string(j) +
                                            " exceeds the averaging order");

    spec.validate();
    return {spec, config};
}

inline std::pair<SystemSpec, RunConfig> parse_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system_text(ss.str(), path);
}

/// Canonical system-file text for a SystemSpec (+ optional config echo);
/// parse_system_text() round-trips it.
inline std::string print_system(const SystemSpec& spec, const RunConfig* config = nullptr) {
    std::ostringstream out;
    out << "[center]\n";
    out << "P = " << spec.P.to_string() << "\n";
    out << "Q = " << spec.Q.to_string() << "\n";
    for (int i = 0; i < spec.order; ++i) {
        const auto& p = spec.p[static_cast<std::size_t>(i)];
        const auto& q = spec.q[static_cast<std::size_t>(i)];
        if (p.is_zero() && q.is_zero()) continue;
        out << "[perturbation." << (i + 1) << "]\n";
        if (!p.is_zero()) out << "p = " << p.to_string() << "\n";
        if (!q.is_zero()) out << "q = " << q.to_string() << "\n";
    }
    if (config) {
        if (!config->bindings.empty()) {
            out << "[bindings]\n";
            for (const auto& [name, v] : config->bindings) out << name << " = " << v.str() << "\n";
        }
        for (const auto& [j, subs] : config->substitutions) {
            out << "[substitutions.order_" << j << "]\n";
            for (const auto& s : subs)
                out << var_name(s.param) << " = " << s.rhs.to_string() << "\n";
        }
        out << "[run]\n";
        out << "order = " << config->order << "\n";
        out << "mode = "
            << (config->mode == RunMode::Auto ? "auto"
                                              : config->mode == RunMode::Exact ? "exact" : "numeric")
            << "\n";
        out << "grid = " << config->grid << "\n";
        out << "tol = " << config->tol << "\n";
        out << "sample_count = " << config->sample_count << "\n";
    } else {
        out << "[run]\n";
        out << "order = " << spec.order << "\n";
    }
    return out.str();
}

}  // namespace avgcyc
