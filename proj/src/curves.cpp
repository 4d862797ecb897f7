#include "curves.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "errors.hpp"

namespace stepwell {

ParamCurve ParamCurve::make_constant(double c0) { return {Kind::constant, c0, 0.0}; }
ParamCurve ParamCurve::make_affine(double c0, double c1) { return {Kind::affine, c0, c1}; }
ParamCurve ParamCurve::make_exp_decay(double c0, double c1) { return {Kind::exp_decay, c0, c1}; }

double ParamCurve::operator()(double t) const {
    switch (kind) {
        case Kind::constant: return c0;
        case Kind::affine: return c0 + c1 * t;
        case Kind::exp_decay: return c0 + c1 * std::exp(-t);
    }
    return c0;
}

double ParamCurve::integral(double t) const {
    switch (kind) {
        case Kind::constant: return c0 * t;
        case Kind::affine: return c0 * t + 0.5 * c1 * t * t;
        case Kind::exp_decay: return c0 * t + c1 * (1.0 - std::exp(-t));
    }
    return c0 * t;
}

bool ParamCurve::positive_on(double tau) const {
    // All three families are monotone in t, so the endpoints decide.
    return (*this)(0.0) > 0.0 && (*this)(tau) > 0.0;
}

namespace {

double parse_number(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        fail(ErrorCode::parse, "curve: bad number '" + s + "'");
    return v;
}

std::string format_number(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

} // namespace

ParamCurve ParamCurve::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        fail(ErrorCode::parse, "curve '" + text + "': expected <kind>:<params>");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    const auto comma = rest.find(',');

    if (kind == "const") {
        if (comma != std::string::npos)
            fail(ErrorCode::parse, "curve '" + text + "': const takes one parameter");
        return make_constant(parse_number(rest));
    }
    if (kind == "affine" || kind == "expdecay") {
        if (comma == std::string::npos)
            fail(ErrorCode::parse, "curve '" + text + "': expected two parameters");
        const double c0 = parse_number(rest.substr(0, comma));
        const double c1 = parse_number(rest.substr(comma + 1));
        return kind == "affine" ? make_affine(c0, c1) : make_exp_decay(c0, c1);
    }
    fail(ErrorCode::parse, "curve '" + text + "': unknown kind '" + kind + "'");
}

std::string ParamCurve::format() const {
    switch (kind) {
        case Kind::constant: return "const:" + format_number(c0);
        case Kind::affine: return "affine:" + format_number(c0) + "," + format_number(c1);
        case Kind::exp_decay: return "expdecay:" + format_number(c0) + "," + format_number(c1);
    }
    return "";
}

} // namespace stepwell
