#include "stepwell.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "curves.hpp"
#include "errors.hpp"
#include "monte_carlo.hpp"
#include "pricing_const.hpp"
#include "pricing_td.hpp"
#include "validation.hpp"
#include "well_spectrum.hpp"

using namespace stepwell;

struct sw_well {
    WellSpec spec;
};
struct sw_curve {
    ParamCurve curve;
};
struct sw_spectrum {
    Spectrum spectrum;
};

namespace {

thread_local std::string g_last_error;

sw_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return SW_ERR_INVALID_ARGUMENT;
        case ErrorCode::domain: return SW_ERR_DOMAIN;
        case ErrorCode::level_index: return SW_ERR_LEVEL_INDEX;
        case ErrorCode::no_bound_states: return SW_ERR_NO_BOUND_STATES;
        case ErrorCode::unsupported: return SW_ERR_UNSUPPORTED_CONFIG;
        case ErrorCode::parse: return SW_ERR_PARSE;
        case ErrorCode::io: return SW_ERR_IO;
        case ErrorCode::internal: return SW_ERR_INTERNAL;
    }
    return SW_ERR_INTERNAL;
}

template <typename F>
sw_status guarded(F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SW_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SW_ERR_INTERNAL;
    }
}

sw_status require(bool ok, const char* message) {
    if (ok) return SW_OK;
    g_last_error = message;
    return SW_ERR_INVALID_ARGUMENT;
}

void fill_price_info(const PriceResult& res, sw_price_info* out) {
    out->price = res.price;
    out->big_gamma = res.big_gamma;
    out->terms_used = res.terms_used;
    out->dropped_tails = res.dropped_count();
}

} // namespace

extern "C" {

const char* sw_status_name(sw_status status) {
    switch (status) {
        case SW_OK: return "ok";
        case SW_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case SW_ERR_DOMAIN: return "domain-error";
        case SW_ERR_LEVEL_INDEX: return "level-index";
        case SW_ERR_NO_BOUND_STATES: return "no-bound-states";
        case SW_ERR_UNSUPPORTED_CONFIG: return "unsupported-configuration";
        case SW_ERR_PARSE: return "parse-error";
        case SW_ERR_IO: return "io-error";
        case SW_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* sw_last_error(void) { return g_last_error.c_str(); }

const char* sw_version(void) { return "1.0.0"; }

sw_status sw_well_create(double a, double b, double v0, sw_well** out) {
    if (sw_status s = require(out != nullptr, "sw_well_create: out is null")) return s;
    return guarded([&] {
        *out = new sw_well{WellSpec(a, b, v0)};
        return SW_OK;
    });
}

void sw_well_destroy(sw_well* well) { delete well; }

sw_status sw_curve_constant(double c0, sw_curve** out) {
    if (sw_status s = require(out != nullptr, "sw_curve_constant: out is null")) return s;
    *out = new sw_curve{ParamCurve::make_constant(c0)};
    return SW_OK;
}

sw_status sw_curve_affine(double c0, double c1, sw_curve** out) {
    if (sw_status s = require(out != nullptr, "sw_curve_affine: out is null")) return s;
    *out = new sw_curve{ParamCurve::make_affine(c0, c1)};
    return SW_OK;
}

sw_status sw_curve_exp_decay(double c0, double c1, sw_curve** out) {
    if (sw_status s = require(out != nullptr, "sw_curve_exp_decay: out is null")) return s;
    *out = new sw_curve{ParamCurve::make_exp_decay(c0, c1)};
    return SW_OK;
}

sw_status sw_curve_parse(const char* text, sw_curve** out) {
    if (sw_status s = require(out != nullptr && text != nullptr, "sw_curve_parse: null argument"))
        return s;
    return guarded([&] {
        *out = new sw_curve{ParamCurve::parse(text)};
        return SW_OK;
    });
}

sw_status sw_curve_format(const sw_curve* curve, char* buf, size_t buf_len) {
    if (sw_status s = require(curve != nullptr && buf != nullptr, "sw_curve_format: null argument"))
        return s;
    const std::string text = curve->curve.format();
    if (text.size() + 1 > buf_len) {
        g_last_error = "sw_curve_format: buffer too small";
        return SW_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return SW_OK;
}

double sw_curve_eval(const sw_curve* curve, double t) {
    return curve ? curve->curve(t) : 0.0;
}

void sw_curve_destroy(sw_curve* curve) { delete curve; }

sw_status sw_spectrum_solve(const sw_well* well, double sigma, sw_spectrum** out) {
    if (sw_status s = require(well != nullptr && out != nullptr, "sw_spectrum_solve: null argument"))
        return s;
    return guarded([&] {
        *out = new sw_spectrum{solve_spectrum(well->spec, sigma)};
        return SW_OK;
    });
}

int sw_spectrum_count(const sw_spectrum* spectrum) {
    return spectrum ? static_cast<int>(spectrum->spectrum.levels.size()) : 0;
}

double sw_spectrum_beta(const sw_spectrum* spectrum) {
    return spectrum ? spectrum->spectrum.beta : 0.0;
}

sw_status sw_spectrum_level(const sw_spectrum* spectrum, int n, sw_level* out) {
    if (sw_status s = require(spectrum != nullptr && out != nullptr,
                              "sw_spectrum_level: null argument"))
        return s;
    const auto& levels = spectrum->spectrum.levels;
    if (n < 1 || n > static_cast<int>(levels.size())) {
        g_last_error = "sw_spectrum_level: level index out of range";
        return SW_ERR_LEVEL_INDEX;
    }
    const EigenLevel& lv = levels[n - 1];
    out->n = lv.n;
    out->k1 = lv.k1;
    out->k2 = lv.k2;
    out->a1 = lv.a1;
    out->a2 = lv.a2;
    out->is_even_function = lv.parity == Parity::even_function ? 1 : 0;
    return SW_OK;
}

double sw_spectrum_wavefunction(const sw_spectrum* spectrum, int n, double x) {
    if (!spectrum || n < 1 || n > static_cast<int>(spectrum->spectrum.levels.size())) return 0.0;
    return eval_wavefunction(spectrum->spectrum.levels[n - 1], spectrum->spectrum.well, x);
}

void sw_spectrum_destroy(sw_spectrum* spectrum) { delete spectrum; }

sw_status sw_count_bound_states(const sw_well* well, double sigma, int* out) {
    if (sw_status s = require(well != nullptr && out != nullptr,
                              "sw_count_bound_states: null argument"))
        return s;
    return guarded([&] {
        *out = count_bound_states(well->spec, sigma);
        return SW_OK;
    });
}

sw_status sw_price_const(const sw_well* well, double strike, double tau, double r, double sigma,
                         double x, int max_terms, sw_price_info* out) {
    if (sw_status s = require(well != nullptr && out != nullptr, "sw_price_const: null argument"))
        return s;
    return guarded([&] {
        PriceQuery query{x};
        if (max_terms > 0) query.terms = max_terms;
        fill_price_info(price_const(well->spec, Contract(strike, tau), r, sigma, query), out);
        return SW_OK;
    });
}

sw_status sw_price_sdb_limit(const sw_well* well, double strike, double tau, double r,
                             double sigma, double x, double* out) {
    if (sw_status s = require(well != nullptr && out != nullptr,
                              "sw_price_sdb_limit: null argument"))
        return s;
    return guarded([&] {
        *out = price_sdb_limit(well->spec, Contract(strike, tau), r, sigma, PriceQuery{x});
        return SW_OK;
    });
}

sw_status sw_price_td(const sw_well* well, double strike, double tau, const sw_curve* r_curve,
                      const sw_curve* sigma_curve, double x, int n_steps, sw_eigen_mode mode,
                      sw_td_gauge gauge, int max_terms, sw_price_info* out) {
    if (sw_status s = require(well && r_curve && sigma_curve && out, "sw_price_td: null argument"))
        return s;
    return guarded([&] {
        PriceQuery query{x};
        if (max_terms > 0) query.terms = max_terms;
        TdOptions options;
        if (n_steps > 0) options.n_steps = n_steps;
        options.mode = mode == SW_EIGEN_APPROX ? EigenMode::paper_approx : EigenMode::exact_eigen;
        options.gauge =
            gauge == SW_GAUGE_RAW_LOG_PRICE ? TdGauge::raw_log_price : TdGauge::centered;
        fill_price_info(price_td(well->spec, Contract(strike, tau), r_curve->curve,
                                 sigma_curve->curve, query, options),
                        out);
        return SW_OK;
    });
}

sw_status sw_mc_price(const sw_well* well, double strike, double tau, const sw_curve* r_curve,
                      const sw_curve* sigma_curve, double s0, long long paths,
                      int steps_per_year, uint64_t seed, int antithetic, sw_mc_estimate* out) {
    if (sw_status s = require(well && r_curve && sigma_curve && out, "sw_mc_price: null argument"))
        return s;
    return guarded([&] {
        McConfig cfg;
        cfg.paths = paths;
        cfg.steps_per_year = steps_per_year;
        cfg.seed = seed;
        cfg.antithetic = antithetic != 0;
        const McEstimate est = simulate_price(well->spec, Contract(strike, tau), r_curve->curve,
                                              sigma_curve->curve, s0, cfg);
        out->mean = est.mean;
        out->std_err = est.std_err;
        out->ci_lo = est.ci_lo;
        out->ci_hi = est.ci_hi;
        out->paths_used = est.paths_used;
        return SW_OK;
    });
}

sw_status sw_validate(const char* options_json, char** report_json, int* all_passed) {
    if (sw_status s = require(report_json != nullptr, "sw_validate: report_json is null"))
        return s;
    return guarded([&] {
        validate::CheckOptions opts;
        if (options_json && *options_json) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(options_json);
            } catch (const nlohmann::json::exception& e) {
                g_last_error = std::string("sw_validate: bad options JSON: ") + e.what();
                return SW_ERR_PARSE;
            }
            if (j.contains("only"))
                for (const auto& v : j["only"]) opts.only.push_back(v.get<int>());
            if (j.contains("corrupt")) opts.corrupt_id = j["corrupt"].get<int>();
            if (j.contains("mc_paths")) opts.mc_paths = j["mc_paths"].get<long long>();
            if (j.contains("mc_steps_per_year"))
                opts.mc_steps_per_year = j["mc_steps_per_year"].get<int>();
            if (j.contains("mc_vanilla_paths"))
                opts.mc_vanilla_paths = j["mc_vanilla_paths"].get<long long>();
        }
        const validate::Report report = validate::run_validation(opts);
        const std::string text = validate::report_to_json(report);
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *report_json = buf;
        if (all_passed) *all_passed = report.all_passed ? 1 : 0;
        return SW_OK;
    });
}

void sw_free(char* ptr) { std::free(ptr); }

} // extern "C"
