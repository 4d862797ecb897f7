#pragma once

#include <optional>
#include <vector>

#include "well_spectrum.hpp"

namespace stepwell {

// Similarity transform making the pricing generator Hermitian: alpha tilts the
// measure, gamma absorbs discounting into the spectrum shift.
struct DriftTransform {
    double alpha = 0.0; // (sigma^2/2 - r) / sigma^2
    double gamma = 0.0; // (sigma^2/2 + r)^2 / (2 sigma^2)
};

struct Contract {
    double strike;
    double tau; // years to maturity

    Contract(double strike_, double tau_);
};

struct PriceQuery {
    double x = 0.0;                  // initial log-price
    std::optional<int> terms{};      // truncation override (at most this many levels)
};

struct DroppedTail {
    int level = 0;
    double k2 = 0.0;
};

struct PriceResult {
    double price = 0.0;
    double big_gamma = 0.0;                  // total Gamma in the discount exponent
    std::vector<double> term_contributions;  // signed contribution per level used
    std::vector<double> lambdas;             // per-level Lambda_n in the decay exponent
    std::vector<DroppedTail> dropped;        // outer-tail terms dropped as divergent
    int terms_used = 0;

    int dropped_count() const { return static_cast<int>(dropped.size()); }
};

// Per-level payoff integrals over x' (the inner trigonometric region
// (lnK, b) and the exponential tail (b, inf)), with the closed-form
// antiderivatives of e^{c x'} {sin,cos,exp}(k x'). `tail_dropped` marks outer
// terms rejected because k2 + alpha_out - 1 is at or below the divergence
// margin.
struct TermIntegral {
    double inner = 0.0;
    double tail = 0.0;
    bool tail_dropped = false;
};

// Margin below which the outer-tail integral is treated as divergent.
inline constexpr double kTailMargin = 1e-6;

DriftTransform drift_transform(double r, double sigma);

TermIntegral payoff_term_integral(const EigenLevel& level, const WellSpec& well,
                                  double alpha_out, double strike);

// Pricing kernel P(x, x'; tau) = e^{-tau gamma} e^{alpha (x - x')}
// sum_n e^{-tau sigma^2 k1n^2 / 2} phi_n(x) phi_n(x').
double kernel_const(const WellSpec& well, const DriftTransform& dt, const Spectrum& spectrum,
                    double x, double x_prime, double tau);

// Shared expansion pricer: price = e^{-big_gamma + extra_log}
// e^{alpha_in (x - c)} sum_n e^{-lambda_n/2} phi_n(x) * payoff integral(alpha_out).
// Both constant and time-dependent engines feed through here.
PriceResult price_expansion(const Spectrum& spectrum, const Contract& contract,
                            const PriceQuery& query, double alpha_in, double alpha_out,
                            double big_gamma, const std::vector<double>& lambdas,
                            double extra_log = 0.0);

// Proportional double-barrier step call under constant r and sigma.
// Requires ln(strike) inside (a, b).
PriceResult price_const(const WellSpec& well, const Contract& contract, double r, double sigma,
                        const PriceQuery& query);

// Standard double-barrier (infinite well) limit: hard knock-out at the
// barriers; returns 0 for x outside (a, b).
double price_sdb_limit(const WellSpec& well, const Contract& contract, double r, double sigma,
                       const PriceQuery& query);

} // namespace stepwell
