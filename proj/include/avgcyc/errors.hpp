#pragma once

#include <stdexcept>
#include <string>

namespace avgcyc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroLeadingDenominator : Error {
    ZeroLeadingDenominator() : Error("series quotient: leading denominator coefficient is zero") {}
};

struct NotSeparable : Error {
    explicit NotSeparable(const std::string& why) : Error("unperturbed term is not separable: " + why) {}
};

struct NotPeriodic : Error {
    explicit NotPeriodic(const std::string& why) : Error("no 2pi-periodic solution family: " + why) {}
};

struct UnboundParameter : Error {
    explicit UnboundParameter(const std::string& name) : Error("unbound parameter: " + name) {}
};

struct UnknownParameter : Error {
    explicit UnknownParameter(const std::string& name) : Error("unknown parameter: " + name) {}
};

struct NonzeroUnperturbed : Error {
    NonzeroUnperturbed() : Error("exact averaging requires a vanishing unperturbed term") {}
};

struct OutsideDomain : Error {
    explicit OutsideDomain(const std::string& msg) : Error("initial radius outside domain: " + msg) {}
};

struct StiffnessFailure : Error {
    explicit StiffnessFailure(const std::string& msg) : Error("integrator tolerance failure: " + msg) {}
};

struct BadArity : Error {
    explicit BadArity(const std::string& msg) : Error("bad arity: " + msg) {}
};

struct ZeroPolynomial : Error {
    ZeroPolynomial() : Error("operation undefined for the zero polynomial") {}
};

struct BadDegrees : Error {
    explicit BadDegrees(const std::string& msg) : Error("bad degrees: " + msg) {}
};

struct ParseError : Error {
    ParseError(int line, int col, const std::string& msg)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
    int line;
    int col;
};

struct DegreeOverflow : Error {
    explicit DegreeOverflow(int deg)
        : Error("polynomial total degree " + std::to_string(deg) + " exceeds the guard limit 12") {}
};

struct StageFailure : Error {
    StageFailure(const std::string& stage, const std::string& msg)
        : Error("[" + stage + "] " + msg), stage(stage) {}
    std::string stage;
};

}  // namespace avgcyc
