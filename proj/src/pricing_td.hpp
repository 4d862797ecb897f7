#pragma once

#include <vector>

#include "curves.hpp"
#include "pricing_const.hpp"
#include "well_spectrum.hpp"

namespace stepwell {

struct TimeGrid {
    int n_steps = 0;
    double eps = 0.0; // tau / n_steps

    TimeGrid(double tau, int n_steps_);
    double node(int j) const { return j * eps; }
};

// Time integrals replacing gamma*tau and sigma^2 k1n^2 tau when the
// coefficients are curves: big_gamma = eps sum gamma(t_j),
// lambdas[n-1] = eps sum sigma(t_j)^2 k1n(t_j)^2.
struct TdAccumulators {
    double big_gamma = 0.0;
    std::vector<double> lambdas;
    double alpha0 = 0.0; // alpha at t = 0
    double alphaN = 0.0; // alpha at t = tau
    int levels_dropped = 0; // levels that unbind at some node
};

enum class EigenMode {
    exact_eigen, // re-solve the level equation at every node
    paper_approx // low-energy formula beta n pi / (beta (b-a) + 2)
};

// Gauge for the alpha tilt factors of the td kernel. `centered` anchors the
// tilt at the corridor midpoint, e^{alpha0 (x-c) - alphaN (x'-c)}, which keeps
// the kernel independent of the log-price origin and consistent with
// simulation; `raw_log_price` applies it to absolute log-price (differs by the
// constant factor e^{(alpha0 - alphaN) c}).
enum class TdGauge { centered, raw_log_price };

struct TdOptions {
    int n_steps = 1000;
    EigenMode mode = EigenMode::exact_eigen;
    TdGauge gauge = TdGauge::centered;
};

// Left-endpoint Riemann accumulation of the kernel exponents over the time
// grid. Levels that unbind at any node are dropped (counted in the result);
// zero bound states at a node is an error naming the node.
TdAccumulators accumulate_td(const ParamCurve& r_curve, const ParamCurve& sigma_curve,
                             const WellSpec& well, double tau, int n_steps,
                             EigenMode mode = EigenMode::exact_eigen);

enum class CaseId { linear_rate, exp_rate, linear_vol };

// Whether a closed form evaluates the published series coefficients verbatim
// or the coefficients re-derived from the declared curve (the published case-1
// middle coefficient is inconsistent with its own curve).
enum class ClosedForm { as_published, rederived };

struct ClosedFormParams {
    double tau = 1.0;
    double v0 = 0.0;
    double width = 0.0;      // b - a (linear_vol only)
    double sigma0 = 0.3;     // linear_vol start level
    double slope = 0.05;     // linear_vol slope
    int n_steps = 1000;      // finite-N forms (linear_vol)
    int n_levels = 0;        // lambdas to produce (linear_vol)
};

// Analytic series limits for the three coefficient cases. linear_rate /
// exp_rate fill big_gamma with the exact integral limit; linear_vol fills
// big_gamma and lambdas with the *finite-N* sums written through the digamma /
// trigamma identities, so they can be compared 1:1 against accumulate_td at
// the same N.
TdAccumulators closed_form_case(CaseId case_id, const ClosedFormParams& params,
                                ClosedForm form = ClosedForm::rederived);

// Time-dependent pricing kernel
// P = e^{alpha0 (x-c) - alphaN (x'-c)} e^{-Gamma} sum_n e^{-Lambda_n/2} phi_n(x) phi_n(x')
// with phi_n from the t = 0 spectrum (raw gauge adds e^{(alpha0-alphaN) c}).
double kernel_td(const TdAccumulators& acc, const Spectrum& spectrum_ref, double x,
                 double x_prime, TdGauge gauge = TdGauge::centered);

// Option price under curve coefficients; reduces to price_const exactly when
// both curves are constant.
PriceResult price_td(const WellSpec& well, const Contract& contract, const ParamCurve& r_curve,
                     const ParamCurve& sigma_curve, const PriceQuery& query,
                     const TdOptions& options = {});

} // namespace stepwell
