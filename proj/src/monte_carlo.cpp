#include "monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"

namespace stepwell {

void McConfig::validate() const {
    if (paths < 1000) fail(ErrorCode::invalid_argument, "McConfig: paths must be >= 1000");
    if (steps_per_year < 250)
        fail(ErrorCode::invalid_argument, "McConfig: steps_per_year must be >= 250");
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STEPWELL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct StepTable {
    std::vector<double> drift; // (r - sigma^2/2) dt at the step midpoint
    std::vector<double> vol;   // sigma sqrt(dt) at the step midpoint
    double dt = 0.0;
    int n_steps = 0;
};

StepTable build_steps(const ParamCurve& r_curve, const ParamCurve& sigma_curve, double tau,
                      int steps_per_year) {
    StepTable t;
    t.n_steps = std::max(1, static_cast<int>(std::lround(steps_per_year * tau)));
    t.dt = tau / t.n_steps;
    t.drift.resize(t.n_steps);
    t.vol.resize(t.n_steps);
    const double sqrt_dt = std::sqrt(t.dt);
    for (int j = 0; j < t.n_steps; ++j) {
        const double tm = (j + 0.5) * t.dt;
        const double sig = sigma_curve(tm);
        t.drift[j] = (r_curve(tm) - 0.5 * sig * sig) * t.dt;
        t.vol[j] = sig * sqrt_dt;
    }
    return t;
}

constexpr long long kBlock = 4096;

} // namespace

McEstimate simulate_price(const WellSpec& well, const Contract& contract,
                          const ParamCurve& r_curve, const ParamCurve& sigma_curve, double s0,
                          const McConfig& cfg) {
    cfg.validate();
    if (!(s0 > 0.0)) fail(ErrorCode::invalid_argument, "simulate_price: s0 must be positive");
    if (!sigma_curve.positive_on(contract.tau))
        fail(ErrorCode::invalid_argument, "simulate_price: sigma curve must stay positive");

    const StepTable steps = build_steps(r_curve, sigma_curve, contract.tau, cfg.steps_per_year);
    const double x0 = std::log(s0);
    const double strike = contract.strike;
    const double v0 = well.v0;
    const double discount = std::exp(-r_curve.integral(contract.tau));

    const long long n_blocks = (cfg.paths + kBlock - 1) / kBlock;
    std::vector<double> block_sum(n_blocks, 0.0);
    std::vector<double> block_sumsq(n_blocks, 0.0);

    std::atomic<long long> next_block{0};
    auto worker = [&]() {
        for (;;) {
            const long long b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            const long long lo = b * kBlock;
            const long long hi = std::min(cfg.paths, lo + kBlock);
            double sum = 0.0, sumsq = 0.0;
            for (long long p = lo; p < hi; ++p) {
                NormalSource normals(cfg.seed, static_cast<std::uint64_t>(p));
                double x = x0, xa = x0;
                long long out = 0, out_a = 0;
                for (int j = 0; j < steps.n_steps; ++j) {
                    out += (x < well.a) | (x > well.b);
                    const double z = normals.next();
                    x += steps.drift[j] + steps.vol[j] * z;
                    if (cfg.antithetic) {
                        out_a += (xa < well.a) | (xa > well.b);
                        xa += steps.drift[j] - steps.vol[j] * z;
                    }
                }
                double value =
                    std::exp(-v0 * (out * steps.dt)) * std::max(std::exp(x) - strike, 0.0);
                if (cfg.antithetic) {
                    const double anti = std::exp(-v0 * (out_a * steps.dt)) *
                                        std::max(std::exp(xa) - strike, 0.0);
                    value = 0.5 * (value + anti);
                }
                sum += value;
                sumsq += value * value;
            }
            block_sum[b] = sum;
            block_sumsq[b] = sumsq;
        }
    };

    const int n_threads = static_cast<int>(std::min<long long>(resolve_thread_count(), n_blocks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Fixed-order reduction keeps the result independent of scheduling.
    double total = 0.0, total_sq = 0.0;
    for (long long b = 0; b < n_blocks; ++b) {
        total += block_sum[b];
        total_sq += block_sumsq[b];
    }
    const double n = static_cast<double>(cfg.paths);
    const double mean_raw = total / n;
    const double var = std::max(total_sq / n - mean_raw * mean_raw, 0.0);

    McEstimate est;
    est.mean = discount * mean_raw;
    est.std_err = discount * std::sqrt(var / n);
    est.ci_lo = est.mean - 1.96 * est.std_err;
    est.ci_hi = est.mean + 1.96 * est.std_err;
    est.paths_used = cfg.paths;
    return est;
}

std::vector<McPathStats> sample_path_stats(const WellSpec& well, const Contract& contract,
                                           const ParamCurve& r_curve,
                                           const ParamCurve& sigma_curve, double s0,
                                           const McConfig& cfg, int count) {
    cfg.validate();
    const StepTable steps = build_steps(r_curve, sigma_curve, contract.tau, cfg.steps_per_year);
    std::vector<McPathStats> out;
    out.reserve(count);
    for (int p = 0; p < count; ++p) {
        NormalSource normals(cfg.seed, static_cast<std::uint64_t>(p));
        double x = std::log(s0);
        long long outside = 0;
        for (int j = 0; j < steps.n_steps; ++j) {
            outside += (x < well.a) | (x > well.b);
            x += steps.drift[j] + steps.vol[j] * normals.next();
        }
        McPathStats st;
        st.tau_outside = outside * steps.dt;
        st.tau_inside = (steps.n_steps - outside) * steps.dt;
        st.terminal_log_price = x;
        out.push_back(st);
    }
    return out;
}

std::vector<ConvergencePoint> convergence_study(const WellSpec& well, const Contract& contract,
                                                const ParamCurve& r_curve,
                                                const ParamCurve& sigma_curve, double s0,
                                                const McConfig& cfg,
                                                const std::vector<int>& step_ladder) {
    for (std::size_t i = 1; i < step_ladder.size(); ++i)
        if (step_ladder[i] <= step_ladder[i - 1])
            fail(ErrorCode::invalid_argument, "convergence_study: ladder must be increasing");
    std::vector<ConvergencePoint> out;
    out.reserve(step_ladder.size());
    for (int steps : step_ladder) {
        McConfig c = cfg;
        c.steps_per_year = steps;
        out.push_back({steps, simulate_price(well, contract, r_curve, sigma_curve, s0, c)});
    }
    return out;
}

double vanilla_call_price(double s0, double strike, double r, double sigma, double tau) {
    const double sd = sigma * std::sqrt(tau);
    const double d1 = (std::log(s0 / strike) + (r + 0.5 * sigma * sigma) * tau) / sd;
    const double d2 = d1 - sd;
    auto cdf = [](double d) { return 0.5 * std::erfc(-d / std::sqrt(2.0)); };
    return s0 * cdf(d1) - strike * std::exp(-r * tau) * cdf(d2);
}

} // namespace stepwell
