#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "errors.hpp"
#include "monte_carlo.hpp"
#include "pricing_const.hpp"

using namespace stepwell;

namespace {

const WellSpec kWell(4.5, 4.867, 55.7859);
const Contract kContract(100.0, 1.0);
const ParamCurve kRConst = ParamCurve::make_constant(0.05);
const ParamCurve kSConst = ParamCurve::make_constant(0.3);

McConfig small_cfg(long long paths = 20000, int steps = 250, std::uint64_t seed = 42) {
    McConfig cfg;
    cfg.paths = paths;
    cfg.steps_per_year = steps;
    cfg.seed = seed;
    return cfg;
}

struct EnvThreads {
    std::string saved;
    bool had;
    explicit EnvThreads(const char* value) {
        const char* cur = std::getenv("STEPWELL_THREADS");
        had = cur != nullptr;
        if (had) saved = cur;
        setenv("STEPWELL_THREADS", value, 1);
    }
    ~EnvThreads() {
        if (had)
            setenv("STEPWELL_THREADS", saved.c_str(), 1);
        else
            unsetenv("STEPWELL_THREADS");
    }
};

} // namespace

TEST_CASE("config invariants") {
    McConfig bad = small_cfg();
    bad.paths = 500;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = small_cfg();
    bad.steps_per_year = 100;
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_THROWS_AS(simulate_price(kWell, kContract, kRConst, kSConst, -1.0, small_cfg()), Error);
}

TEST_CASE("same seed twice gives bitwise-identical estimates") {
    const McEstimate a = simulate_price(kWell, kContract, kRConst, kSConst, 115.0, small_cfg());
    const McEstimate b = simulate_price(kWell, kContract, kRConst, kSConst, 115.0, small_cfg());
    CHECK(a.mean == b.mean);
    CHECK(a.std_err == b.std_err);
    CHECK(a.paths_used == b.paths_used);
    CHECK(a.ci_lo == a.mean - 1.96 * a.std_err);
    CHECK(a.ci_hi == a.mean + 1.96 * a.std_err);
}

TEST_CASE("estimate is independent of the worker count") {
    McEstimate one, eight;
    {
        EnvThreads env("1");
        one = simulate_price(kWell, kContract, kRConst, kSConst, 115.0, small_cfg());
    }
    {
        EnvThreads env("8");
        eight = simulate_price(kWell, kContract, kRConst, kSConst, 115.0, small_cfg());
    }
    CHECK(one.mean == eight.mean);
    CHECK(one.std_err == eight.std_err);
}

TEST_CASE("occupation times account for the whole maturity") {
    const auto stats =
        sample_path_stats(kWell, kContract, kRConst, kSConst, 115.0, small_cfg(1000, 250), 100);
    REQUIRE(stats.size() == 100);
    bool saw_outside = false;
    for (const McPathStats& st : stats) {
        CHECK(std::abs(st.tau_inside + st.tau_outside - kContract.tau) < 1e-12);
        CHECK(st.tau_outside >= 0.0);
        if (st.tau_outside > 0.0) saw_outside = true;
        CHECK(std::isfinite(st.terminal_log_price));
    }
    CHECK(saw_outside); // sigma=0.3 paths do leave the corridor within a year
}

TEST_CASE("near-deterministic volatility reproduces the drift-path value") {
    const ParamCurve tiny_sigma = ParamCurve::make_constant(1e-9);
    McConfig cfg = small_cfg(1000, 4000);

    SUBCASE("path that never leaves the corridor") {
        const McEstimate est = simulate_price(kWell, kContract, kRConst, tiny_sigma, 115.0, cfg);
        // x(t) = ln(115) + 0.05 t stays inside (a, b) through maturity.
        const double expect = std::exp(-0.05) * (115.0 * std::exp(0.05) - 100.0);
        CHECK(std::abs(est.mean - expect) / expect < 1e-3);
    }
    SUBCASE("path that crosses the upper barrier part-way") {
        const WellSpec soft(4.5, 4.867, 2.0);
        const McEstimate est = simulate_price(soft, kContract, kRConst, tiny_sigma, 128.0, cfg);
        // crossing time from the drift ODE x(t) = ln(128) + 0.05 t
        const double t_cross = (4.867 - std::log(128.0)) / 0.05;
        const double tau_out = kContract.tau - t_cross;
        const double expect =
            std::exp(-0.05) * std::exp(-2.0 * tau_out) * (128.0 * std::exp(0.05) - 100.0);
        CHECK(std::abs(est.mean - expect) / expect < 1e-3);
    }
}

TEST_CASE("disabled well reproduces the analytic vanilla call") {
    const WellSpec disabled(4.5, 4.867, 1e-30);
    const McEstimate est =
        simulate_price(disabled, kContract, kRConst, kSConst, 115.0, small_cfg(50000, 250, 9));
    const double bs = vanilla_call_price(115.0, 100.0, 0.05, 0.3, 1.0);
    CHECK(std::abs(est.mean - bs) <= 3.0 * est.std_err);
}

TEST_CASE("discount-only martingale check") {
    const WellSpec disabled(4.5, 4.867, 1e-30);
    const Contract penny(1e-9, 1.0);
    const McEstimate est =
        simulate_price(disabled, penny, kRConst, kSConst, 115.0, small_cfg(50000, 250, 10));
    CHECK(std::abs(est.mean - 115.0) <= 3.0 * est.std_err);
}

TEST_CASE("antithetic variates do not inflate the error bar") {
    McConfig plain = small_cfg(50000, 250, 11);
    plain.antithetic = false;
    McConfig anti = plain;
    anti.antithetic = true;
    const McEstimate p = simulate_price(kWell, kContract, kRConst, kSConst, 115.0, plain);
    const McEstimate a = simulate_price(kWell, kContract, kRConst, kSConst, 115.0, anti);
    CHECK(a.std_err <= 1.05 * p.std_err);
}

TEST_CASE("error bars scale like one over root paths") {
    const McEstimate half = simulate_price(kWell, kContract, kRConst, kSConst, 115.0,
                                           small_cfg(40000, 250, 12));
    const McEstimate full = simulate_price(kWell, kContract, kRConst, kSConst, 115.0,
                                           small_cfg(80000, 250, 12));
    const double ratio = full.std_err / half.std_err;
    const double expected = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(ratio - expected) < 0.2 * expected);
}

TEST_CASE("step-count ladder trends monotonically within error bars") {
    McConfig cfg = small_cfg(60000, 250, 13);
    const auto ladder =
        convergence_study(kWell, kContract, kRConst, kSConst, 115.0, cfg, {250, 1000, 4000});
    REQUIRE(ladder.size() == 3);
    // Coarser monitoring misses excursions, understating the damping, so the
    // means drift down as the grid refines (up to noise).
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        const double slack = 2.0 * (ladder[i - 1].estimate.std_err + ladder[i].estimate.std_err);
        CHECK(ladder[i].estimate.mean <= ladder[i - 1].estimate.mean + slack);
    }
    CHECK_THROWS_AS(
        convergence_study(kWell, kContract, kRConst, kSConst, 115.0, cfg, {1000, 250}), Error);
}

TEST_CASE("spectral price sits inside the Monte Carlo band (smoke)") {
    const McEstimate est = simulate_price(kWell, kContract, kRConst, kSConst, 115.0,
                                          small_cfg(60000, 1000, 14));
    const double spectral = price_const(kWell, kContract, 0.05, 0.3, {std::log(115.0)}).price;
    CHECK(std::abs(spectral - est.mean) <= std::max(4.0 * est.std_err, 0.05 * est.mean));
}
