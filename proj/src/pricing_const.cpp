#include "pricing_const.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace stepwell {

Contract::Contract(double strike_, double tau_) : strike(strike_), tau(tau_) {
    if (!(strike > 0.0)) fail(ErrorCode::invalid_argument, "Contract: strike must be positive");
    if (!(tau > 0.0)) fail(ErrorCode::invalid_argument, "Contract: tau must be positive");
}

DriftTransform drift_transform(double r, double sigma) {
    if (!(sigma > 0.0)) fail(ErrorCode::domain, "drift_transform: sigma must be positive");
    const double s2 = sigma * sigma;
    const double half = 0.5 * s2;
    return {(half - r) / s2, (half + r) * (half + r) / (2.0 * s2)};
}

namespace {

// int e^{p u} sin(k u) du and the cosine analogue, as antiderivative values.
double anti_exp_sin(double p, double k, double u) {
    return std::exp(p * u) * (p * std::sin(k * u) - k * std::cos(k * u)) / (p * p + k * k);
}
double anti_exp_cos(double p, double k, double u) {
    return std::exp(p * u) * (p * std::cos(k * u) + k * std::sin(k * u)) / (p * p + k * k);
}

double int_exp_trig(double p, double k, double u0, double u1, bool cosine) {
    return cosine ? anti_exp_cos(p, k, u1) - anti_exp_cos(p, k, u0)
                  : anti_exp_sin(p, k, u1) - anti_exp_sin(p, k, u0);
}

} // namespace

TermIntegral payoff_term_integral(const EigenLevel& level, const WellSpec& well,
                                  double alpha_out, double strike) {
    const double c = well.center();
    const double u0 = std::log(strike) - c;
    const double u1 = 0.5 * well.width();
    const bool cosine = level.parity == Parity::even_function;

    TermIntegral out;
    // Inner region (lnK, b), in u = x' - c coordinates:
    //   int e^{-alpha_out u} (e^{u + c} - K) a1 trig(k1 u) du.
    out.inner = level.a1 *
                (std::exp(c) * int_exp_trig(1.0 - alpha_out, level.k1, u0, u1, cosine) -
                 strike * int_exp_trig(-alpha_out, level.k1, u0, u1, cosine));

    // Outer region (b, inf): tail amplitude anchored at the barrier.
    const double p1 = level.k2 + alpha_out - 1.0; // decay rate of the e^{x'} part
    const double p2 = level.k2 + alpha_out;       // decay rate of the K part
    if (p1 <= kTailMargin || p2 <= kTailMargin) {
        out.tail_dropped = true;
        return out;
    }
    out.tail = level.a2 * (std::exp(c) * std::exp((1.0 - alpha_out) * u1) / p1 -
                           strike * std::exp(-alpha_out * u1) / p2);
    return out;
}

double kernel_const(const WellSpec& well, const DriftTransform& dt, const Spectrum& spectrum,
                    double x, double x_prime, double tau) {
    if (spectrum.levels.empty())
        fail(ErrorCode::no_bound_states, "kernel_const: spectrum has no bound states");
    const double s2 = spectrum.sigma * spectrum.sigma;
    double sum = 0.0;
    for (const EigenLevel& lv : spectrum.levels) {
        sum += std::exp(-0.5 * tau * s2 * lv.k1 * lv.k1) * eval_wavefunction(lv, well, x) *
               eval_wavefunction(lv, well, x_prime);
    }
    return std::exp(-tau * dt.gamma) * std::exp(dt.alpha * (x - x_prime)) * sum;
}

PriceResult price_expansion(const Spectrum& spectrum, const Contract& contract,
                            const PriceQuery& query, double alpha_in, double alpha_out,
                            double big_gamma, const std::vector<double>& lambdas,
                            double extra_log) {
    const WellSpec& well = spectrum.well;
    if (spectrum.levels.empty())
        fail(ErrorCode::no_bound_states, "price: spectrum has no bound states");
    const double log_strike = std::log(contract.strike);
    if (!(log_strike > well.a && log_strike < well.b))
        fail(ErrorCode::unsupported,
             "price: ln(strike) = " + std::to_string(log_strike) +
                 " must lie inside the barrier corridor (" + std::to_string(well.a) + ", " +
                 std::to_string(well.b) + ")");

    std::size_t n_terms = std::min(spectrum.levels.size(), lambdas.size());
    if (query.terms && *query.terms >= 0)
        n_terms = std::min(n_terms, static_cast<std::size_t>(*query.terms));

    PriceResult res;
    res.big_gamma = big_gamma;
    const double prefactor =
        std::exp(-big_gamma + extra_log) * std::exp(alpha_in * (query.x - well.center()));

    double sum = 0.0;
    for (std::size_t i = 0; i < n_terms; ++i) {
        const EigenLevel& lv = spectrum.levels[i];
        const TermIntegral ti = payoff_term_integral(lv, well, alpha_out, contract.strike);
        if (ti.tail_dropped) res.dropped.push_back({lv.n, lv.k2});
        const double term = std::exp(-0.5 * lambdas[i]) * eval_wavefunction(lv, well, query.x) *
                            (ti.inner + ti.tail);
        res.term_contributions.push_back(prefactor * term);
        res.lambdas.push_back(lambdas[i]);
        sum += term;
    }
    res.terms_used = static_cast<int>(n_terms);
    res.price = prefactor * sum;
    return res;
}

PriceResult price_const(const WellSpec& well, const Contract& contract, double r, double sigma,
                        const PriceQuery& query) {
    const DriftTransform dt = drift_transform(r, sigma);
    const Spectrum sp = solve_spectrum(well, sigma);
    std::vector<double> lambdas;
    lambdas.reserve(sp.levels.size());
    const double s2 = sigma * sigma;
    for (const EigenLevel& lv : sp.levels) lambdas.push_back(s2 * lv.k1 * lv.k1 * contract.tau);
    return price_expansion(sp, contract, query, dt.alpha, dt.alpha, dt.gamma * contract.tau,
                           lambdas);
}

double price_sdb_limit(const WellSpec& well, const Contract& contract, double r, double sigma,
                       const PriceQuery& query) {
    const double log_strike = std::log(contract.strike);
    if (!(log_strike > well.a && log_strike < well.b))
        fail(ErrorCode::unsupported, "price_sdb_limit: ln(strike) must lie inside (a, b)");
    if (!(query.x > well.a && query.x < well.b)) return 0.0; // knocked out

    const DriftTransform dt = drift_transform(r, sigma);
    const double width = well.width();
    const double c = well.center();
    const double amp = std::sqrt(2.0 / width);
    const double u0 = log_strike - c;
    const double u1 = 0.5 * width;
    const double s2 = sigma * sigma;

    // phi_n(x') = amp sin(n pi (x'-a)/width) = amp [sin(n pi/2) cos(k u) + cos(n pi/2) sin(k u)].
    double sum = 0.0;
    int small_streak = 0;
    constexpr int kMaxTerms = 100000;
    for (int n = 1; n <= kMaxTerms; ++n) {
        const double k = n * M_PI / width;
        const double w = std::exp(-0.5 * s2 * k * k * contract.tau);
        const double sn = (n % 2 == 1) ? ((n % 4 == 1) ? 1.0 : -1.0) : 0.0; // sin(n pi/2)
        const double cn = (n % 2 == 0) ? ((n % 4 == 0) ? 1.0 : -1.0) : 0.0; // cos(n pi/2)
        const double integral =
            std::exp(c) * (sn * int_exp_trig(1.0 - dt.alpha, k, u0, u1, true) +
                           cn * int_exp_trig(1.0 - dt.alpha, k, u0, u1, false)) -
            contract.strike * (sn * int_exp_trig(-dt.alpha, k, u0, u1, true) +
                               cn * int_exp_trig(-dt.alpha, k, u0, u1, false));
        const double term = w * amp * std::sin(k * (query.x - well.a)) * amp * integral;
        sum += term;
        // Zero trig factors can make isolated terms vanish; require two in a row.
        small_streak = (n >= 4 && std::abs(term) < 1e-12 * std::abs(sum)) ? small_streak + 1 : 0;
        if (small_streak >= 2) break;
    }
    return std::exp(-dt.gamma * contract.tau + dt.alpha * (query.x - c)) * sum;
}

} // namespace stepwell
