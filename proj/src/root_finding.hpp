#pragma once

#include <cmath>
#include <functional>

#include "errors.hpp"

namespace stepwell {

// Bracketed root solve for a strictly increasing function: bisection down to a
// requested bracket width, then a few Newton polish steps clamped to the
// bracket. The caller guarantees f(lo) < 0 < f(hi).
template <typename F, typename DF>
double solve_increasing(F&& f, DF&& df, double lo, double hi, double bracket_width,
                        int newton_steps = 5) {
    double flo = f(lo);
    double fhi = f(hi);
    if (!(flo < 0.0) || !(fhi > 0.0))
        fail(ErrorCode::internal, "root bracket does not straddle zero");

    while (hi - lo > bracket_width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket at floating-point resolution
        const double fm = f(mid);
        if (fm < 0.0)
            lo = mid;
        else
            hi = mid;
    }

    double x = 0.5 * (lo + hi);
    for (int i = 0; i < newton_steps; ++i) {
        const double fx = f(x);
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        double next = x - fx / d;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return x;
}

} // namespace stepwell
