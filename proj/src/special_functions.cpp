#include "special_functions.hpp"

#include <cmath>

#include "errors.hpp"

namespace stepwell {

namespace {
constexpr double kShift = 10.0;
// B2k / (2k) for the digamma tail, k = 1..6 (B2..B12).
constexpr double kDigammaTail[6] = {
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0,
};
// B2k for the trigamma tail, k = 1..6.
constexpr double kBernoulli[6] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0,
};
} // namespace

double digamma(double z) {
    if (!(z > 0.0)) fail(ErrorCode::domain, "digamma: argument must be positive");
    double acc = 0.0;
    while (z < kShift) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    const double inv2 = 1.0 / (z * z);
    double tail = 0.0;
    double p = inv2;
    for (double coef : kDigammaTail) {
        tail += coef * p;
        p *= inv2;
    }
    return acc + std::log(z) - 0.5 / z - tail;
}

double trigamma(double z) {
    if (!(z > 0.0)) fail(ErrorCode::domain, "trigamma: argument must be positive");
    double acc = 0.0;
    while (z < kShift) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    double tail = 0.0;
    double p = inv * inv2; // 1/z^3
    for (double coef : kBernoulli) {
        tail += coef * p;
        p *= inv2;
    }
    return acc + inv + 0.5 * inv2 + tail;
}

} // namespace stepwell
