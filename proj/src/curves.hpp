#pragma once

#include <string>

namespace stepwell {

// Small closed family of deterministic parameter curves:
//   constant  : c0
//   affine    : c0 + c1 * t
//   exp_decay : c0 + c1 * e^{-t}
struct ParamCurve {
    enum class Kind { constant, affine, exp_decay };

    Kind kind = Kind::constant;
    double c0 = 0.0;
    double c1 = 0.0;

    static ParamCurve make_constant(double c0);
    static ParamCurve make_affine(double c0, double c1);
    static ParamCurve make_exp_decay(double c0, double c1);

    // Flag syntax: "const:0.05", "affine:0.05,0.01", "expdecay:0.04,0.01".
    static ParamCurve parse(const std::string& text);
    std::string format() const;

    double operator()(double t) const;
    // Exact antiderivative evaluated over [0, t] (used for discounting).
    double integral(double t) const;

    bool is_constant_value() const { return kind == Kind::constant || c1 == 0.0; }
    bool positive_on(double tau) const;

    bool operator==(const ParamCurve&) const = default;
};

} // namespace stepwell
