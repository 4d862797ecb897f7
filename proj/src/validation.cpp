#include "validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "errors.hpp"
#include "monte_carlo.hpp"
#include "pricing_const.hpp"
#include "pricing_td.hpp"
#include "well_spectrum.hpp"

namespace stepwell::validate {

namespace {

constexpr double kA = 4.5;
constexpr double kB = 4.867;
constexpr double kSigma = 0.3;
constexpr double kRate = 0.05;
constexpr double kStrike = 100.0;
constexpr double kTau = 1.0;
constexpr double kV0Deep = 55.7859;
constexpr double kV0Mid = 26.3401;
constexpr double kV0Shallow = 12.8233;

// Reference bound-state wavenumbers for the three preset wells (entries the
// published table lists beyond the admissible count are excluded up front).
struct ReferenceLevels {
    double v0;
    std::vector<double> k1;
};
const ReferenceLevels kReference[] = {
    {kV0Deep, {7.38515, 14.7215, 21.9384, 28.8819, 34.4789}},
    {kV0Mid, {6.94708, 13.7663, 20.1958}},
    {kV0Shallow, {6.41782, 12.527}},
};

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

struct Ctx {
    const CheckOptions& opts;
    Report& report;

    double tol(int id, double nominal) const {
        return opts.corrupt_id == id ? 0.0 : nominal;
    }

    void note_dropped(const std::string& context, const PriceResult& res) const {
        for (const DroppedTail& d : res.dropped)
            report.dropped_tails.push_back({context, d.level, d.k2});
    }
};

CheckResult check_table_reproduction(const Ctx& ctx) {
    CheckResult res{1, "table-reproduction", true, "", 0.0};
    const double rel_tol = ctx.tol(1, 0.005);
    const double residual_tol = ctx.tol(1, 1e-10);
    double worst_rel = 0.0, worst_resid = 0.0;
    std::string failures;
    for (const ReferenceLevels& ref : kReference) {
        const WellSpec well(kA, kB, ref.v0);
        const double beta = compute_beta(well, kSigma);
        for (std::size_t i = 0; i < ref.k1.size(); ++i) {
            const int n = static_cast<int>(i) + 1;
            const EigenLevel lv = solve_level(well, kSigma, n);
            const double rel = std::abs(lv.k1 - ref.k1[i]) / ref.k1[i];
            const double resid = std::abs(level_equation_residual(well, beta, n, lv.k1));
            worst_rel = std::max(worst_rel, rel);
            worst_resid = std::max(worst_resid, resid);
            if (rel > rel_tol || resid > residual_tol) {
                res.passed = false;
                failures += format(" [V0=%.4f n=%d ref=%.5f solved=%.5f rel=%.3g resid=%.2g]",
                                   ref.v0, n, ref.k1[i], lv.k1, rel, resid);
            }
        }
    }
    res.details = format("max rel diff %.3g (tol %.3g), max residual %.2g (tol %.2g)%s",
                         worst_rel, rel_tol, worst_resid, residual_tol, failures.c_str());
    return res;
}

CheckResult check_bound_state_counts(const Ctx& ctx) {
    CheckResult res{2, "bound-state-counts", true, "", 0.0};
    const int expected[] = {5, 3, 2};
    const double v0s[] = {kV0Deep, kV0Mid, kV0Shallow};
    std::string got;
    for (int i = 0; i < 3; ++i) {
        const int n = count_bound_states(WellSpec(kA, kB, v0s[i]), kSigma);
        const int want = ctx.opts.corrupt_id == 2 ? expected[i] + 1 : expected[i];
        if (n != want) res.passed = false;
        got += format("%sV0=%.4f: %d (expect %d)", i ? "; " : "", v0s[i], n, want);
    }
    res.details = got;
    return res;
}

CheckResult check_orthonormality_composition(const Ctx& ctx) {
    CheckResult res{3, "orthonormality-and-composition", true, "", 0.0};
    const double tol = ctx.tol(3, 1e-8);
    double worst_gram = 0.0, worst_ck = 0.0;
    for (double v0 : {kV0Deep, kV0Mid, kV0Shallow}) {
        const WellSpec well(kA, kB, v0);
        const Spectrum sp = solve_spectrum(well, kSigma);
        const std::size_t n = sp.levels.size();
        std::vector<std::vector<double>> gram(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                gram[i][j] = wavefunction_inner_product(sp.levels[i], sp.levels[j], well);
                const double target = i == j ? 1.0 : 0.0;
                worst_gram = std::max(worst_gram, std::abs(gram[i][j] - target));
            }

        // Chapman-Kolmogorov at tau1 = tau2 = 0.5 through the measured Gram
        // matrix (quadrature inside, analytic tails).
        const DriftTransform dt = drift_transform(kRate, kSigma);
        const double tau1 = 0.5, tau2 = 0.5;
        const double s2 = kSigma * kSigma;
        for (int gi = 0; gi < 10; ++gi)
            for (int gj = 0; gj < 10; ++gj) {
                const double span = well.width() * 1.2;
                const double x = well.a - 0.1 * well.width() + span * gi / 9.0;
                const double xp = well.a - 0.1 * well.width() + span * gj / 9.0;
                double composed = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        const double w1 = std::exp(-0.5 * tau1 * s2 * sp.levels[i].k1 * sp.levels[i].k1);
                        const double w2 = std::exp(-0.5 * tau2 * s2 * sp.levels[j].k1 * sp.levels[j].k1);
                        composed += w1 * w2 * eval_wavefunction(sp.levels[i], well, x) *
                                    gram[i][j] * eval_wavefunction(sp.levels[j], well, xp);
                    }
                composed *= std::exp(-(tau1 + tau2) * dt.gamma) * std::exp(dt.alpha * (x - xp));
                const double direct = kernel_const(well, dt, sp, x, xp, tau1 + tau2);
                worst_ck = std::max(worst_ck, std::abs(composed - direct));
            }
    }
    res.passed = worst_gram < tol && worst_ck < tol;
    res.details = format("max |<m,n>-delta| %.3g, sup composition error %.3g (tol %.1e)",
                         worst_gram, worst_ck, tol);
    return res;
}

CheckResult check_const_vs_mc(const Ctx& ctx) {
    CheckResult res{4, "const-vs-mc", true, "", 0.0};
    const double rel_floor = ctx.tol(4, 0.02);
    const WellSpec well(kA, kB, kV0Deep);
    const Contract contract(kStrike, kTau);
    const ParamCurve rc = ParamCurve::make_constant(kRate);
    const ParamCurve sc = ParamCurve::make_constant(kSigma);
    for (double s0 : {105.0, 115.0, 125.0}) {
        const PriceResult spectral = price_const(well, contract, kRate, kSigma, {std::log(s0)});
        ctx.note_dropped(format("const-vs-mc S0=%g", s0), spectral);
        McConfig cfg;
        cfg.paths = ctx.opts.mc_paths;
        cfg.steps_per_year = ctx.opts.mc_steps_per_year;
        cfg.seed = 90210 + static_cast<std::uint64_t>(s0);
        const McEstimate mc = simulate_price(well, contract, rc, sc, s0, cfg);
        const double diff = std::abs(spectral.price - mc.mean);
        const double allowed = std::max(3.0 * mc.std_err, rel_floor * mc.mean);
        if (!(diff <= allowed)) res.passed = false;
        res.details += format("%sS0=%g: spectral %.6f mc %.6f+-%.6f diff %.2e alw %.2e",
                              res.details.empty() ? "" : "; ", s0, spectral.price, mc.mean,
                              mc.std_err, diff, allowed);
    }
    return res;
}

CheckResult check_linear_rate_vs_mc(const Ctx& ctx) {
    CheckResult res{5, "linear-rate-vs-mc", true, "", 0.0};
    const double rel_floor = ctx.tol(5, 0.025);
    const WellSpec well(kA, kB, kV0Deep);
    const Contract contract(kStrike, kTau);
    const ParamCurve rc = ParamCurve::make_affine(0.05, 0.01);
    const ParamCurve sc = ParamCurve::make_constant(kSigma);
    for (double s0 : {105.0, 115.0, 125.0}) {
        const PriceResult spectral = price_td(well, contract, rc, sc, {std::log(s0)});
        ctx.note_dropped(format("linear-rate-vs-mc S0=%g", s0), spectral);
        McConfig cfg;
        cfg.paths = ctx.opts.mc_paths;
        cfg.steps_per_year = ctx.opts.mc_steps_per_year;
        cfg.seed = 60601 + static_cast<std::uint64_t>(s0);
        const McEstimate mc = simulate_price(well, contract, rc, sc, s0, cfg);
        const double diff = std::abs(spectral.price - mc.mean);
        const double allowed = std::max(3.0 * mc.std_err, rel_floor * mc.mean);
        if (!(diff <= allowed)) res.passed = false;
        res.details += format("%sS0=%g: spectral %.6f mc %.6f+-%.6f diff %.2e alw %.2e",
                              res.details.empty() ? "" : "; ", s0, spectral.price, mc.mean,
                              mc.std_err, diff, allowed);
    }
    return res;
}

CheckResult check_orderings(const Ctx& ctx) {
    CheckResult res{6, "price-orderings", true, "", 0.0};
    const Contract contract(kStrike, kTau);
    const ParamCurve r_lin = ParamCurve::make_affine(0.05, 0.01);
    const ParamCurve r_exp = ParamCurve::make_exp_decay(0.04, 0.01);
    const ParamCurve s_const = ParamCurve::make_constant(kSigma);

    int viol_v0 = 0, viol_lin = 0, viol_exp = 0;

    std::vector<double> grid(21);
    for (int i = 0; i < 21; ++i) grid[i] = 100.0 + 30.0 * i / 20.0;

    const double v0s[] = {kV0Shallow, kV0Mid, kV0Deep};
    std::vector<std::vector<double>> fixed(3), lin(3), expd(3);
    for (int vi = 0; vi < 3; ++vi) {
        const WellSpec well(kA, kB, v0s[vi]);
        for (double s0 : grid) {
            const PriceQuery q{std::log(s0)};
            const PriceResult pc = price_const(well, contract, kRate, kSigma, q);
            const PriceResult pl = price_td(well, contract, r_lin, s_const, q);
            const PriceResult pe = price_td(well, contract, r_exp, s_const, q);
            ctx.note_dropped(format("orderings V0=%g S0=%g", v0s[vi], s0), pc);
            fixed[vi].push_back(pc.price);
            lin[vi].push_back(pl.price);
            expd[vi].push_back(pe.price);
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (fixed[0][i] < fixed[1][i] || fixed[1][i] < fixed[2][i]) ++viol_v0;
        for (int vi = 0; vi < 3; ++vi) {
            if (lin[vi][i] < fixed[vi][i]) ++viol_lin;
            if (expd[vi][i] > fixed[vi][i]) ++viol_exp;
        }
    }
    res.passed = (viol_v0 == 0 && viol_lin == 0 && viol_exp == 0);
    if (ctx.opts.corrupt_id == 6) res.passed = false;
    res.details = format("violations: V0-monotonicity %d, linear-rate>=fixed %d, "
                         "exp-decay<=fixed %d (21-point grid, 3 wells)",
                         viol_v0, viol_lin, viol_exp);
    return res;
}

CheckResult check_closed_form_vs_riemann(const Ctx& ctx) {
    CheckResult res{7, "closed-form-vs-riemann", true, "", 0.0};
    const double gamma_tol = ctx.tol(7, 1e-6);
    const double lambda_tol = ctx.tol(7, 1e-10);
    const WellSpec well(kA, kB, kV0Deep);

    // Case 1, published coefficients: closed form vs a 1e6-node sum of the same
    // printed integrand, and the pinned value.
    ClosedFormParams p1;
    p1.tau = kTau;
    const double g1_pub = closed_form_case(CaseId::linear_rate, p1, ClosedForm::as_published)
                              .big_gamma;
    const long long nodes = 1000000;
    const double eps = kTau / nodes;
    double sum_pub = 0.0, sum_true = 0.0, sum_exp = 0.0;
    for (long long j = 0; j < nodes; ++j) {
        const double t = j * eps;
        sum_pub += (0.095 * 0.095 + 0.019 * t + 0.0001 * t * t) / 0.18;
        const double g = 0.095 + 0.01 * t;
        sum_true += g * g / 0.18;
        const double h = 0.085 + 0.01 * std::exp(-t);
        sum_exp += h * h / 0.18;
    }
    sum_pub *= eps;
    sum_true *= eps;
    sum_exp *= eps;
    const double g1_re = closed_form_case(CaseId::linear_rate, p1, ClosedForm::rederived)
                             .big_gamma;
    const double g2 = closed_form_case(CaseId::exp_rate, p1).big_gamma;

    const bool c1 = std::abs(g1_pub - 0.1031019) <= gamma_tol &&
                    std::abs(g1_pub - sum_pub) <= gamma_tol;
    const bool c1re = std::abs(g1_re - sum_true) <= gamma_tol;
    const bool c2 = std::abs(g2 - 0.0463491) <= gamma_tol && std::abs(g2 - sum_exp) <= gamma_tol;

    // Case 3: digamma/trigamma finite-N forms vs direct summation at equal N.
    const int N = 1000;
    const ParamCurve r_const = ParamCurve::make_constant(kRate);
    const ParamCurve s_lin = ParamCurve::make_affine(0.3, 0.05);
    const TdAccumulators direct =
        accumulate_td(r_const, s_lin, well, kTau, N, EigenMode::paper_approx);
    ClosedFormParams p3;
    p3.tau = kTau;
    p3.v0 = kV0Deep;
    p3.width = well.width();
    p3.sigma0 = 0.3;
    p3.slope = 0.05;
    p3.n_steps = N;
    p3.n_levels = static_cast<int>(direct.lambdas.size());
    const TdAccumulators closed = closed_form_case(CaseId::linear_vol, p3);
    double worst_lambda = 0.0;
    for (std::size_t i = 0; i < direct.lambdas.size(); ++i)
        worst_lambda = std::max(worst_lambda, std::abs(closed.lambdas[i] - direct.lambdas[i]) /
                                                  std::abs(direct.lambdas[i]));
    const bool c3 = worst_lambda <= lambda_tol;

    res.passed = c1 && c1re && c2 && c3;
    res.details = format(
        "case1 published %.7f (pin 0.1031019, sum %.7f)%s; case1 rederived %.7f (sum %.7f)%s; "
        "case2 %.7f (pin 0.0463491, sum %.7f)%s; case3 max lambda rel diff %.2e (tol %.0e)%s",
        g1_pub, sum_pub, c1 ? "" : " FAIL", g1_re, sum_true, c1re ? "" : " FAIL", g2, sum_exp,
        c2 ? "" : " FAIL", worst_lambda, lambda_tol, c3 ? "" : " FAIL");
    return res;
}

CheckResult check_infinite_well_limit(const Ctx& ctx) {
    CheckResult res{8, "infinite-well-limit", true, "", 0.0};
    const double tol = ctx.tol(8, 0.005);
    const WellSpec well(kA, kB, 1e6);
    const Contract contract(kStrike, kTau);
    const PriceQuery q{std::log(115.0)};
    const double deep = price_const(well, contract, kRate, kSigma, q).price;
    const double sdb = price_sdb_limit(well, contract, kRate, kSigma, q);
    const double rel = std::abs(deep - sdb) / sdb;
    res.passed = rel <= tol;
    res.details = format("V0=1e6 price %.8f vs SDB limit %.8f: rel gap %.4f%% (tol %.2f%%)",
                         deep, sdb, 100.0 * rel, 100.0 * tol);
    return res;
}

CheckResult check_mc_self(const Ctx& ctx) {
    CheckResult res{9, "mc-self-checks", true, "", 0.0};
    const Contract contract(kStrike, kTau);
    const ParamCurve rc = ParamCurve::make_constant(kRate);
    const ParamCurve sc = ParamCurve::make_constant(kSigma);

    // Disabled well (v0 ~ 0): the occupation damping is identically 1, so the
    // estimator must reproduce the vanilla call.
    const WellSpec disabled(kA, kB, 1e-30);
    McConfig cfg;
    cfg.paths = ctx.opts.mc_vanilla_paths;
    cfg.steps_per_year = 250;
    cfg.seed = 1234;
    const McEstimate mc = simulate_price(disabled, contract, rc, sc, 115.0, cfg);
    const double bs = vanilla_call_price(115.0, kStrike, kRate, kSigma, kTau);
    const double band = ctx.opts.corrupt_id == 9 ? 0.0 : 3.0 * mc.std_err;
    const bool vanilla_ok = std::abs(mc.mean - bs) <= band;

    // Bitwise reproducibility across forced worker counts.
    McConfig small;
    small.paths = 20000;
    small.steps_per_year = 250;
    small.seed = 777;
    const WellSpec well(kA, kB, kV0Deep);
    const char* saved = std::getenv("STEPWELL_THREADS");
    const bool had_env = saved != nullptr;
    const std::string saved_copy = had_env ? saved : "";
    setenv("STEPWELL_THREADS", "1", 1);
    const McEstimate one = simulate_price(well, contract, rc, sc, 115.0, small);
    setenv("STEPWELL_THREADS", "8", 1);
    const McEstimate eight = simulate_price(well, contract, rc, sc, 115.0, small);
    if (had_env)
        setenv("STEPWELL_THREADS", saved_copy.c_str(), 1);
    else
        unsetenv("STEPWELL_THREADS");
    const bool bitwise_ok = one.mean == eight.mean && one.std_err == eight.std_err;

    res.passed = vanilla_ok && bitwise_ok;
    res.details = format("vanilla mc %.6f vs analytic %.6f (3se %.6f)%s; 1-vs-8 workers %s",
                         mc.mean, bs, 3.0 * mc.std_err, vanilla_ok ? "" : " FAIL",
                         bitwise_ok ? "bitwise equal" : "MISMATCH");
    return res;
}

} // namespace

Report run_validation(const CheckOptions& options) {
    Report report;
    Ctx ctx{options, report};
    using Fn = CheckResult (*)(const Ctx&);
    const Fn checks[] = {check_table_reproduction, check_bound_state_counts,
                         check_orthonormality_composition, check_const_vs_mc,
                         check_linear_rate_vs_mc, check_orderings,
                         check_closed_form_vs_riemann, check_infinite_well_limit,
                         check_mc_self};
    report.all_passed = true;
    for (int id = 1; id <= 9; ++id) {
        if (!options.only.empty() &&
            std::find(options.only.begin(), options.only.end(), id) == options.only.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        CheckResult res = checks[id - 1](ctx);
        res.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.all_passed = report.all_passed && res.passed;
        report.checks.push_back(std::move(res));
    }
    return report;
}

std::string report_to_json(const Report& report) {
    nlohmann::json j;
    j["suite"] = "stepwell-validation";
    j["all_passed"] = report.all_passed;
    j["checks"] = nlohmann::json::array();
    for (const CheckResult& c : report.checks) {
        j["checks"].push_back({{"id", c.id},
                               {"name", c.name},
                               {"passed", c.passed},
                               {"details", c.details},
                               {"elapsed_seconds", c.seconds}});
    }
    j["dropped_tails"] = nlohmann::json::array();
    for (const DroppedTailNote& d : report.dropped_tails)
        j["dropped_tails"].push_back({{"context", d.context}, {"level", d.level}, {"k2", d.k2}});
    return j.dump(2);
}

} // namespace stepwell::validate
