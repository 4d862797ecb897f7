#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_io.hpp"
#include "stepwell.h"

namespace fs = std::filesystem;
using namespace stepwell::cli;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct CurveHandle {
    sw_curve* ptr = nullptr;
    ~CurveHandle() { sw_curve_destroy(ptr); }
};
struct WellHandle {
    sw_well* ptr = nullptr;
    ~WellHandle() { sw_well_destroy(ptr); }
};

[[noreturn]] void die(const std::string& message, int code = kExitUsage) {
    std::cerr << "stepwell: " << message << "\n";
    std::exit(code);
}

void check(sw_status status, const std::string& what) {
    if (status != SW_OK)
        die(what + ": " + sw_status_name(status) + " (" + sw_last_error() + ")");
}

WellHandle make_well(const RunConfig& cfg) {
    WellHandle w;
    check(sw_well_create(cfg.well_a, cfg.well_b, cfg.well_v0, &w.ptr), "well");
    return w;
}

CurveHandle make_curve(const std::string& text, const std::string& what) {
    CurveHandle c;
    check(sw_curve_parse(text.c_str(), &c.ptr), what);
    return c;
}

bool curve_is_constant(const std::string& text) { return text.rfind("const:", 0) == 0; }

sw_price_info spectral_price(const RunConfig& cfg, double s0, const std::string& engine) {
    const WellHandle well = make_well(cfg);
    const double x = std::log(s0);
    sw_price_info info{};
    const bool both_const = curve_is_constant(cfg.r_curve) && curve_is_constant(cfg.sigma_curve);
    std::string which = engine;
    if (which == "auto") which = both_const ? "const" : "td";
    const CurveHandle r = make_curve(cfg.r_curve, "curves.r");
    const CurveHandle sig = make_curve(cfg.sigma_curve, "curves.sigma");
    if (which == "const") {
        if (!both_const) die("engine 'const' requires constant curves");
        check(sw_price_const(well.ptr, cfg.strike, cfg.tau, sw_curve_eval(r.ptr, 0.0),
                             sw_curve_eval(sig.ptr, 0.0), x, cfg.max_terms, &info),
              "price");
    } else if (which == "td") {
        const sw_eigen_mode mode =
            cfg.eigen_mode == "approx" ? SW_EIGEN_APPROX : SW_EIGEN_EXACT;
        const sw_td_gauge gauge =
            cfg.gauge == "raw" ? SW_GAUGE_RAW_LOG_PRICE : SW_GAUGE_CENTERED;
        check(sw_price_td(well.ptr, cfg.strike, cfg.tau, r.ptr, sig.ptr, x, cfg.n_steps, mode,
                          gauge, cfg.max_terms, &info),
              "price");
    } else {
        die("unknown engine '" + engine + "' (expected auto|const|td)");
    }
    return info;
}

sw_mc_estimate mc_price(const RunConfig& cfg, double s0) {
    const WellHandle well = make_well(cfg);
    const CurveHandle r = make_curve(cfg.r_curve, "curves.r");
    const CurveHandle sig = make_curve(cfg.sigma_curve, "curves.sigma");
    sw_mc_estimate est{};
    check(sw_mc_price(well.ptr, cfg.strike, cfg.tau, r.ptr, sig.ptr, s0, cfg.mc_paths,
                      cfg.mc_steps_per_year, cfg.mc_seed, cfg.mc_antithetic ? 1 : 0, &est),
          "mc");
    return est;
}

std::vector<CurveRow> sweep_rows(const RunConfig& cfg, const std::string& engine, bool with_mc) {
    std::vector<CurveRow> rows;
    for (double s0 : expand_s0_grid(cfg.s0)) {
        const sw_price_info info = spectral_price(cfg, s0, engine);
        CurveRow row;
        row.s0 = s0;
        row.price_spectral = info.price;
        row.n_terms = info.terms_used;
        row.dropped_terms = info.dropped_tails;
        if (with_mc) {
            const sw_mc_estimate est = mc_price(cfg, s0);
            row.price_mc = est.mean;
            row.mc_stderr = est.std_err;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die("cannot write '" + path + "'");
    out << content;
    if (!out) die("failed while writing '" + path + "'");
}

int cmd_spectrum(const RunConfig& cfg) {
    const WellHandle well = make_well(cfg);
    const CurveHandle sig = make_curve(cfg.sigma_curve, "curves.sigma");
    const double sigma0 = sw_curve_eval(sig.ptr, 0.0);

    sw_spectrum* sp = nullptr;
    check(sw_spectrum_solve(well.ptr, sigma0, &sp), "spectrum");
    const int count = sw_spectrum_count(sp);
    const double beta = sw_spectrum_beta(sp);

    std::printf("well: a=%s b=%s v0=%s sigma=%s beta=%s\n", format_double(cfg.well_a).c_str(),
                format_double(cfg.well_b).c_str(), format_double(cfg.well_v0).c_str(),
                format_double(sigma0).c_str(), format_double(beta).c_str());
    if (count == 0) {
        std::printf("no bound states\n");
        sw_spectrum_destroy(sp);
        return 0;
    }
    std::printf("%4s %14s %14s %6s %12s %12s\n", "n", "k1", "k2", "parity", "a1", "a2");
    for (int n = 1; n <= count; ++n) {
        sw_level lv{};
        check(sw_spectrum_level(sp, n, &lv), "level");
        std::printf("%4d %14.6f %14.6f %6s %12.6f %12.6f\n", lv.n, lv.k1, lv.k2,
                    lv.is_even_function ? "even" : "odd", lv.a1, lv.a2);
    }
    for (const ReferenceLevelRow& ref : reference_levels()) {
        if (std::abs(ref.v0 - cfg.well_v0) > 1e-9 || std::abs(cfg.well_a - 4.5) > 1e-12 ||
            std::abs(cfg.well_b - 4.867) > 1e-12 || std::abs(sigma0 - 0.3) > 1e-12)
            continue;
        if (ref.n > count)
            std::printf("note: reference table lists n=%d with k1=%s, which exceeds the "
                        "admissible bound beta=%s; level rejected (not normalizable)\n",
                        ref.n, format_double(ref.k1).c_str(), format_double(beta).c_str());
    }
    sw_spectrum_destroy(sp);
    return 0;
}

int cmd_price(const RunConfig& cfg, const std::string& engine, bool with_mc) {
    const std::vector<double> grid = expand_s0_grid(cfg.s0);
    if (grid.size() != 1) die("price expects a single s0 (use sweep for grids)");
    const std::vector<CurveRow> rows = sweep_rows(cfg, engine, with_mc || cfg.mc_enabled);
    std::fputs(rows_to_csv(rows).c_str(), stdout);
    return 0;
}

int cmd_sweep(const RunConfig& base, const std::string& preset_name, const std::string& engine,
              bool with_mc, const std::string& out_arg, bool emit_svg) {
    if (preset_name.empty() || preset_name == "custom") {
        const RunConfig& cfg = base;
        const std::string out_csv = !out_arg.empty() ? out_arg : cfg.out_csv;
        if (out_csv.empty()) die("sweep requires an output CSV path (--out or output.csv)");
        const std::vector<CurveRow> rows = sweep_rows(cfg, engine, with_mc || cfg.mc_enabled);
        write_file(out_csv, rows_to_csv(rows));
        std::printf("wrote %s (%zu rows)\n", out_csv.c_str(), rows.size());
        std::string svg_path = cfg.out_svg;
        if (svg_path.empty() && emit_svg) svg_path = out_csv + ".svg";
        if (!svg_path.empty()) {
            SvgSeries series;
            series.label = "spectral";
            for (const CurveRow& r : rows) series.points.push_back({r.s0, r.price_spectral});
            write_file(svg_path, render_svg("price sweep", {series}));
            std::printf("wrote %s\n", svg_path.c_str());
        }
        return 0;
    }

    const Preset* preset = find_preset(preset_name);
    if (!preset) die("unknown preset '" + preset_name + "'");
    const std::string out_dir = !out_arg.empty() ? out_arg : ".";
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) die("cannot create output directory '" + out_dir + "'");

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c"};
    std::vector<SvgSeries> all_series;
    int color_idx = 0;
    for (double v0 : preset->v0_set) {
        RunConfig td = preset->config;
        td.well_v0 = v0;
        RunConfig fixed = td;
        fixed.r_curve = preset->fixed_r_curve;
        fixed.sigma_curve = preset->fixed_sigma_curve;

        const std::vector<CurveRow> td_rows = sweep_rows(td, "td", with_mc);
        const std::vector<CurveRow> fixed_rows = sweep_rows(fixed, "const", with_mc);

        const std::string tag = format_double(v0);
        const std::string td_path = out_dir + "/" + preset->name + "_v0_" + tag + "_td.csv";
        const std::string fixed_path = out_dir + "/" + preset->name + "_v0_" + tag + "_fixed.csv";
        write_file(td_path, rows_to_csv(td_rows));
        write_file(fixed_path, rows_to_csv(fixed_rows));
        std::printf("wrote %s\nwrote %s\n", td_path.c_str(), fixed_path.c_str());

        SvgSeries solid, dashed;
        solid.label = "V0=" + tag + " td";
        solid.color = kColors[color_idx % 3];
        for (const CurveRow& r : td_rows) solid.points.push_back({r.s0, r.price_spectral});
        dashed.label = "V0=" + tag + " fixed";
        dashed.color = kColors[color_idx % 3];
        dashed.dashed = true;
        for (const CurveRow& r : fixed_rows) dashed.points.push_back({r.s0, r.price_spectral});
        all_series.push_back(std::move(solid));
        all_series.push_back(std::move(dashed));
        ++color_idx;
    }
    if (emit_svg) {
        const std::string svg_path = out_dir + "/" + preset->name + ".svg";
        write_file(svg_path, render_svg(preset->name + " price curves", all_series));
        std::printf("wrote %s\n", svg_path.c_str());
    }
    return 0;
}

int cmd_validate(const std::string& report_path, const std::string& only, int corrupt,
                 long long mc_paths, int mc_steps, long long mc_vanilla_paths) {
    nlohmann::json opts = nlohmann::json::object();
    if (!only.empty()) {
        std::istringstream in(only);
        std::string item;
        auto ids = nlohmann::json::array();
        while (std::getline(in, item, ',')) ids.push_back(std::atoi(item.c_str()));
        opts["only"] = ids;
    }
    if (corrupt > 0) opts["corrupt"] = corrupt;
    if (mc_paths > 0) opts["mc_paths"] = mc_paths;
    if (mc_steps > 0) opts["mc_steps_per_year"] = mc_steps;
    if (mc_vanilla_paths > 0) opts["mc_vanilla_paths"] = mc_vanilla_paths;

    char* report = nullptr;
    int all_passed = 0;
    check(sw_validate(opts.dump().c_str(), &report, &all_passed), "validate");
    const std::string report_text = report;
    sw_free(report);

    const nlohmann::json j = nlohmann::json::parse(report_text);
    for (const auto& c : j["checks"])
        std::printf("[%s] %d %s: %s\n", c["passed"].get<bool>() ? "PASS" : "FAIL",
                    c["id"].get<int>(), c["name"].get<std::string>().c_str(),
                    c["details"].get<std::string>().c_str());
    for (const auto& d : j["dropped_tails"])
        std::printf("dropped tail: %s level=%d k2=%g\n",
                    d["context"].get<std::string>().c_str(), d["level"].get<int>(),
                    d["k2"].get<double>());
    if (!report_path.empty()) write_file(report_path, report_text);
    std::printf("%s\n", all_passed ? "validation passed" : "validation FAILED");
    return all_passed ? 0 : kExitValidation;
}

std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    // Config file first, explicit flags on top.
    const std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) {
        try {
            cfg = load_config(config_path);
        } catch (const std::exception& e) {
            die(e.what());
        }
    }

    CLI::App app{"stepwell: spectral pricer for proportional double-barrier step calls"};
    app.require_subcommand(1);

    std::string config_sink, engine = "auto", preset, out_arg;
    bool with_mc = false, emit_svg = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_sink, "key=value config file");
        sub->add_option("--a", cfg.well_a, "lower barrier (log-price)");
        sub->add_option("--b", cfg.well_b, "upper barrier (log-price)");
        sub->add_option("--v0", cfg.well_v0, "step intensity (well depth)");
        sub->add_option("--strike,-K", cfg.strike, "strike");
        sub->add_option("--tau", cfg.tau, "years to maturity");
        sub->add_option("--r", cfg.r_curve, "rate curve (const:x | affine:x,y | expdecay:x,y)");
        sub->add_option("--sigma", cfg.sigma_curve, "volatility curve");
        sub->add_option("--s0", cfg.s0, "underlying price(s): value, list, or lo:hi:n");
        sub->add_option("--n-steps", cfg.n_steps, "time slices for curve coefficients");
        sub->add_option("--eigen-mode", cfg.eigen_mode, "exact|approx");
        sub->add_option("--td-gauge", cfg.gauge, "centered|raw");
        sub->add_option("--terms", cfg.max_terms, "truncate the expansion (0 = all)");
        sub->add_option("--paths", cfg.mc_paths, "Monte Carlo paths");
        sub->add_option("--steps-per-year", cfg.mc_steps_per_year, "Monte Carlo step density");
        sub->add_option("--seed", cfg.mc_seed, "Monte Carlo seed");
        sub->add_flag("--antithetic,!--no-antithetic", cfg.mc_antithetic, "antithetic variates");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "print the bound-state table");
    add_common(spectrum);

    CLI::App* price = app.add_subcommand("price", "price at a single underlying level");
    add_common(price);
    price->add_option("--engine", engine, "auto|const|td");
    price->add_flag("--mc", with_mc, "add the Monte Carlo estimate");

    CLI::App* sweep = app.add_subcommand("sweep", "price across an s0 grid; write CSV/SVG");
    add_common(sweep);
    sweep->add_option("--engine", engine, "auto|const|td");
    sweep->add_option("--preset", preset, "fig1|fig2|fig3|custom");
    sweep->add_option("--out", out_arg, "output CSV path (custom) or directory (presets)");
    sweep->add_flag("--mc", with_mc, "add Monte Carlo columns");
    sweep->add_flag("--svg", emit_svg, "also render an SVG chart");

    CLI::App* validate = app.add_subcommand("validate", "run the validation suite");
    std::string report_path, only;
    int corrupt = 0;
    long long mc_paths_override = 0, mc_vanilla_override = 0;
    int mc_steps_override = 0;
    validate->add_option("--report", report_path, "write the JSON report here");
    validate->add_option("--only", only, "comma-separated check ids (testing)");
    validate->add_option("--corrupt-check", corrupt,
                         "test hook: force the given check's tolerance to zero")
        ->group("");
    validate->add_option("--mc-paths", mc_paths_override, "override MC paths (testing)");
    validate->add_option("--mc-steps", mc_steps_override, "override MC steps/year (testing)");
    validate->add_option("--mc-vanilla-paths", mc_vanilla_override,
                         "override vanilla-check paths (testing)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(cfg);
        if (price->parsed()) return cmd_price(cfg, engine, with_mc);
        if (sweep->parsed()) return cmd_sweep(cfg, preset, engine, with_mc, out_arg, emit_svg);
        if (validate->parsed())
            return cmd_validate(report_path, only, corrupt, mc_paths_override, mc_steps_override,
                                mc_vanilla_override);
    } catch (const std::exception& e) {
        die(e.what());
    }
    return kExitUsage;
}
