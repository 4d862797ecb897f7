#pragma once

#include <cstdint>
#include <vector>

#include "curves.hpp"
#include "pricing_const.hpp"
#include "well_spectrum.hpp"

namespace stepwell {

struct McConfig {
    long long paths = 400000;
    int steps_per_year = 4000;
    std::uint64_t seed = 42;
    bool antithetic = true;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    double ci_lo = 0.0; // mean - 1.96 std_err
    double ci_hi = 0.0;
    long long paths_used = 0;
};

// Independent Feynman-Kac estimator for the occupation-time-damped call:
// discounted mean of e^{-v0 * tau_outside} max(S_T - K, 0) under the
// risk-neutral log dynamics dx = (r(t) - sigma(t)^2/2) dt + sigma(t) dW, with
// tau_outside accumulated by left-endpoint monitoring at every step.
// Deterministic for fixed (seed, paths, steps) regardless of worker count.
McEstimate simulate_price(const WellSpec& well, const Contract& contract,
                          const ParamCurve& r_curve, const ParamCurve& sigma_curve, double s0,
                          const McConfig& cfg);

// Per-path occupation accounting: time inside the corridor, time outside, and
// the terminal log-price. tau_inside + tau_outside = tau by construction.
struct McPathStats {
    double tau_inside = 0.0;
    double tau_outside = 0.0;
    double terminal_log_price = 0.0;
};

// Occupation accounting for the first `count` (non-antithetic) paths of the
// configured stream. Diagnostic surface for tests.
std::vector<McPathStats> sample_path_stats(const WellSpec& well, const Contract& contract,
                                           const ParamCurve& r_curve,
                                           const ParamCurve& sigma_curve, double s0,
                                           const McConfig& cfg, int count);

struct ConvergencePoint {
    int steps_per_year = 0;
    McEstimate estimate;
};

// Estimates along an increasing ladder of step counts; bounds the
// occupation-time discretization bias.
std::vector<ConvergencePoint> convergence_study(const WellSpec& well, const Contract& contract,
                                                const ParamCurve& r_curve,
                                                const ParamCurve& sigma_curve, double s0,
                                                const McConfig& cfg,
                                                const std::vector<int>& step_ladder);

// Black-Scholes call (constant coefficients); reference for the disabled-well
// sanity check.
double vanilla_call_price(double s0, double strike, double r, double sigma, double tau);

// Worker count: explicit argument wins, then STEPWELL_THREADS, then hardware.
int resolve_thread_count(int requested = 0);

} // namespace stepwell
