#include "well_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"
#include "root_finding.hpp"

namespace stepwell {

namespace {

// arcsin with the argument clamped to [-1, 1] to absorb rounding at k -> beta.
double clamped_asin(double t) {
    if (t > 1.0 && t < 1.0 + 1e-15) t = 1.0;
    if (t < -1.0 && t > -1.0 - 1e-15) t = -1.0;
    return std::asin(t);
}

double level_fn(const WellSpec& well, double beta, int n, double k) {
    return 0.5 * k * well.width() + clamped_asin(k / beta) - 0.5 * n * M_PI;
}

double level_fn_deriv(const WellSpec& well, double beta, double k) {
    const double s = beta * beta - k * k;
    return 0.5 * well.width() + (s > 0.0 ? 1.0 / std::sqrt(s) : INFINITY);
}

} // namespace

WellSpec::WellSpec(double a_, double b_, double v0_) : a(a_), b(b_), v0(v0_) {
    if (!(a < b)) fail(ErrorCode::invalid_argument, "WellSpec: requires a < b");
    if (!(v0 > 0.0))
        fail(ErrorCode::invalid_argument, "WellSpec: requires v0 > 0 (no bound states otherwise)");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(v0))
        fail(ErrorCode::invalid_argument, "WellSpec: parameters must be finite");
}

double compute_beta(const WellSpec& well, double sigma) {
    if (!(sigma > 0.0)) fail(ErrorCode::domain, "compute_beta: sigma must be positive");
    if (!(well.v0 > 0.0)) fail(ErrorCode::domain, "compute_beta: v0 must be positive");
    return std::sqrt(2.0 * well.v0) / sigma;
}

int count_bound_states(const WellSpec& well, double sigma) {
    const double beta = compute_beta(well, sigma);
    const double x = beta * well.width() / M_PI + 1.0;
    int n = static_cast<int>(std::floor(x));
    if (static_cast<double>(n) == x) n -= 1; // root exactly at k = beta: not normalizable
    // Marginal levels within 1e-12*beta of the top are excluded as well.
    const double hi = beta * (1.0 - 1e-12);
    while (n >= 1 && !(level_fn(well, beta, n, hi) > 0.0)) --n;
    return std::max(n, 0);
}

double level_equation_residual(const WellSpec& well, double beta, int n, double k1) {
    return level_fn(well, beta, n, k1);
}

EigenLevel solve_level(const WellSpec& well, double sigma, int n) {
    const double beta = compute_beta(well, sigma);
    const int count = count_bound_states(well, sigma);
    if (n < 1 || n > count)
        fail(ErrorCode::level_index, "solve_level: level index " + std::to_string(n) +
                                         " outside 1.." + std::to_string(count));

    const double lo = beta * 1e-6;
    const double hi = beta * (1.0 - 1e-12);
    // Monotone bracket must straddle the root before solving.
    if (!(level_fn(well, beta, n, lo) < 0.0 && level_fn(well, beta, n, hi) > 0.0))
        fail(ErrorCode::internal, "solve_level: bracket check failed");

    const double k1 = solve_increasing(
        [&](double k) { return level_fn(well, beta, n, k); },
        [&](double k) { return level_fn_deriv(well, beta, k); }, 0.0, beta, 1e-12 * beta);

    EigenLevel lv;
    lv.n = n;
    lv.k1 = k1;
    lv.k2 = std::sqrt(std::max(beta * beta - k1 * k1, 0.0));
    lv.parity = (n % 2 == 1) ? Parity::even_function : Parity::odd_function;
    lv.a1 = std::sqrt(2.0 * lv.k2 / (lv.k2 * well.width() + 2.0));
    const double half_arg = 0.5 * k1 * well.width();
    lv.a2 = (lv.parity == Parity::even_function) ? lv.a1 * std::cos(half_arg)
                                                 : lv.a1 * std::sin(half_arg);
    return lv;
}

double approx_level_low_energy(const WellSpec& well, double sigma, int n) {
    if (n < 1) fail(ErrorCode::level_index, "approx_level_low_energy: n must be >= 1");
    const double beta = compute_beta(well, sigma);
    return beta * n * M_PI / (beta * well.width() + 2.0);
}

Spectrum solve_spectrum(const WellSpec& well, double sigma) {
    Spectrum sp{well, sigma, compute_beta(well, sigma), {}};
    const int count = count_bound_states(well, sigma);
    sp.levels.reserve(count);
    for (int n = 1; n <= count; ++n) sp.levels.push_back(solve_level(well, sigma, n));
    return sp;
}

double eval_wavefunction(const EigenLevel& level, const WellSpec& well, double x) {
    const double c = well.center();
    if (x > well.b) return level.a2 * std::exp(-level.k2 * (x - well.b));
    if (x < well.a) {
        const double tail = level.a2 * std::exp(level.k2 * (x - well.a));
        return level.parity == Parity::even_function ? tail : -tail;
    }
    const double u = level.k1 * (x - c);
    return level.parity == Parity::even_function ? level.a1 * std::cos(u)
                                                 : level.a1 * std::sin(u);
}

double wavefunction_inner_product(const EigenLevel& lm, const EigenLevel& ln,
                                  const WellSpec& well, int panels, int order) {
    const double inside = quad::integrate_panels(
        [&](double x) { return eval_wavefunction(lm, well, x) * eval_wavefunction(ln, well, x); },
        well.a, well.b, panels, order);
    // Tails: phi_m phi_n = (+-) a2m a2n e^{-(k2m + k2n)|x - barrier|} on each side.
    const double decay = lm.k2 + ln.k2;
    const double upper = lm.a2 * ln.a2 / decay;
    const double sm = lm.parity == Parity::even_function ? 1.0 : -1.0;
    const double sn = ln.parity == Parity::even_function ? 1.0 : -1.0;
    const double lower = sm * sn * lm.a2 * ln.a2 / decay;
    return inside + upper + lower;
}

} // namespace stepwell
