#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "monte_carlo.hpp"
#include "pricing_const.hpp"
#include "stepwell.h"
#include "well_spectrum.hpp"

namespace {

struct Well {
    sw_well* ptr = nullptr;
    ~Well() { sw_well_destroy(ptr); }
};
struct Curve {
    sw_curve* ptr = nullptr;
    ~Curve() { sw_curve_destroy(ptr); }
};

} // namespace

TEST_CASE("status names and version") {
    CHECK(std::string(sw_status_name(SW_OK)) == "ok");
    CHECK(std::string(sw_status_name(SW_ERR_UNSUPPORTED_CONFIG)) == "unsupported-configuration");
    CHECK(std::string(sw_version()).size() > 0);
}

TEST_CASE("well creation validates its arguments") {
    Well w;
    CHECK(sw_well_create(4.5, 4.867, 55.7859, &w.ptr) == SW_OK);
    sw_well* bad = nullptr;
    CHECK(sw_well_create(5.0, 4.0, 1.0, &bad) == SW_ERR_INVALID_ARGUMENT);
    CHECK(std::string(sw_last_error()).find("a < b") != std::string::npos);
    CHECK(sw_well_create(4.5, 4.867, 0.0, &bad) == SW_ERR_INVALID_ARGUMENT);
    CHECK(sw_well_create(4.5, 4.867, 1.0, nullptr) == SW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("curves parse, format, and evaluate through the C surface") {
    Curve c;
    REQUIRE(sw_curve_parse("affine:0.05,0.01", &c.ptr) == SW_OK);
    CHECK(sw_curve_eval(c.ptr, 0.5) == doctest::Approx(0.055).epsilon(1e-15));
    char buf[64];
    REQUIRE(sw_curve_format(c.ptr, buf, sizeof(buf)) == SW_OK);
    CHECK(std::string(buf) == "affine:0.05,0.01");
    char tiny[4];
    CHECK(sw_curve_format(c.ptr, tiny, sizeof(tiny)) == SW_ERR_INVALID_ARGUMENT);
    sw_curve* bad = nullptr;
    CHECK(sw_curve_parse("triangle:1", &bad) == SW_ERR_PARSE);
}

TEST_CASE("spectrum handles mirror the core solver") {
    Well w;
    REQUIRE(sw_well_create(4.5, 4.867, 55.7859, &w.ptr) == SW_OK);
    sw_spectrum* sp = nullptr;
    REQUIRE(sw_spectrum_solve(w.ptr, 0.3, &sp) == SW_OK);
    CHECK(sw_spectrum_count(sp) == 5);

    const stepwell::Spectrum core = stepwell::solve_spectrum(stepwell::WellSpec(4.5, 4.867, 55.7859), 0.3);
    CHECK(sw_spectrum_beta(sp) == core.beta);
    for (int n = 1; n <= 5; ++n) {
        sw_level lv{};
        REQUIRE(sw_spectrum_level(sp, n, &lv) == SW_OK);
        CHECK(lv.k1 == core.levels[n - 1].k1);
        CHECK(lv.k2 == core.levels[n - 1].k2);
        CHECK(lv.a1 == core.levels[n - 1].a1);
        CHECK((lv.is_even_function == 1) == (n % 2 == 1));
        CHECK(sw_spectrum_wavefunction(sp, n, 4.7) ==
              eval_wavefunction(core.levels[n - 1], core.well, 4.7));
    }
    sw_level lv{};
    CHECK(sw_spectrum_level(sp, 6, &lv) == SW_ERR_LEVEL_INDEX);
    CHECK(sw_spectrum_level(sp, 0, &lv) == SW_ERR_LEVEL_INDEX);

    int count = 0;
    CHECK(sw_count_bound_states(w.ptr, 0.3, &count) == SW_OK);
    CHECK(count == 5);
    CHECK(sw_count_bound_states(w.ptr, -1.0, &count) == SW_ERR_DOMAIN);
    sw_spectrum_destroy(sp);
}

TEST_CASE("constant-parameter price matches the core exactly") {
    Well w;
    REQUIRE(sw_well_create(4.5, 4.867, 55.7859, &w.ptr) == SW_OK);
    sw_price_info info{};
    REQUIRE(sw_price_const(w.ptr, 100.0, 1.0, 0.05, 0.3, std::log(115.0), 0, &info) == SW_OK);

    const stepwell::PriceResult core =
        stepwell::price_const(stepwell::WellSpec(4.5, 4.867, 55.7859),
                              stepwell::Contract(100.0, 1.0), 0.05, 0.3, {std::log(115.0)});
    CHECK(info.price == core.price);
    CHECK(info.terms_used == 5);
    CHECK(info.dropped_tails == 0);
    CHECK(info.big_gamma == core.big_gamma);

    // strike outside the corridor
    CHECK(sw_price_const(w.ptr, 80.0, 1.0, 0.05, 0.3, 4.7, 0, &info) ==
          SW_ERR_UNSUPPORTED_CONFIG);

    double sdb = 0.0;
    REQUIRE(sw_price_sdb_limit(w.ptr, 100.0, 1.0, 0.05, 0.3, std::log(115.0), &sdb) == SW_OK);
    CHECK(sdb == doctest::Approx(0.35476084530855045).epsilon(1e-9));
}

TEST_CASE("td price collapses through the C surface") {
    Well w;
    REQUIRE(sw_well_create(4.5, 4.867, 55.7859, &w.ptr) == SW_OK);
    Curve r, sig;
    REQUIRE(sw_curve_parse("const:0.05", &r.ptr) == SW_OK);
    REQUIRE(sw_curve_parse("const:0.3", &sig.ptr) == SW_OK);

    sw_price_info td{}, cn{};
    REQUIRE(sw_price_td(w.ptr, 100.0, 1.0, r.ptr, sig.ptr, std::log(115.0), 1000,
                        SW_EIGEN_EXACT, SW_GAUGE_CENTERED, 0, &td) == SW_OK);
    REQUIRE(sw_price_const(w.ptr, 100.0, 1.0, 0.05, 0.3, std::log(115.0), 0, &cn) == SW_OK);
    CHECK(td.price == doctest::Approx(cn.price).epsilon(1e-12));

    Curve rlin;
    REQUIRE(sw_curve_parse("affine:0.05,0.01", &rlin.ptr) == SW_OK);
    sw_price_info raw{}, centered{};
    REQUIRE(sw_price_td(w.ptr, 100.0, 1.0, rlin.ptr, sig.ptr, std::log(115.0), 1000,
                        SW_EIGEN_EXACT, SW_GAUGE_CENTERED, 0, &centered) == SW_OK);
    REQUIRE(sw_price_td(w.ptr, 100.0, 1.0, rlin.ptr, sig.ptr, std::log(115.0), 1000,
                        SW_EIGEN_EXACT, SW_GAUGE_RAW_LOG_PRICE, 0, &raw) == SW_OK);
    CHECK(raw.price > centered.price); // the raw tilt inflates rising-rate prices
}

TEST_CASE("Monte Carlo estimates are deterministic through the C surface") {
    Well w;
    REQUIRE(sw_well_create(4.5, 4.867, 55.7859, &w.ptr) == SW_OK);
    Curve r, sig;
    REQUIRE(sw_curve_parse("const:0.05", &r.ptr) == SW_OK);
    REQUIRE(sw_curve_parse("const:0.3", &sig.ptr) == SW_OK);
    sw_mc_estimate a{}, b{};
    REQUIRE(sw_mc_price(w.ptr, 100.0, 1.0, r.ptr, sig.ptr, 115.0, 5000, 250, 42, 1, &a) == SW_OK);
    REQUIRE(sw_mc_price(w.ptr, 100.0, 1.0, r.ptr, sig.ptr, 115.0, 5000, 250, 42, 1, &b) == SW_OK);
    CHECK(a.mean == b.mean);
    CHECK(a.std_err == b.std_err);
    CHECK(a.paths_used == 5000);
    CHECK(sw_mc_price(w.ptr, 100.0, 1.0, r.ptr, sig.ptr, 115.0, 10, 250, 42, 1, &a) ==
          SW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("validation runs a subset and honors the corrupt hook") {
    char* report = nullptr;
    int ok = 0;
    REQUIRE(sw_validate(R"({"only":[2]})", &report, &ok) == SW_OK);
    REQUIRE(report != nullptr);
    const nlohmann::json j = nlohmann::json::parse(report);
    sw_free(report);
    CHECK(ok == 1);
    CHECK(j["all_passed"].get<bool>());
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["id"].get<int>() == 2);
    CHECK(j["checks"][0]["passed"].get<bool>());

    report = nullptr;
    REQUIRE(sw_validate(R"({"only":[2],"corrupt":2})", &report, &ok) == SW_OK);
    const nlohmann::json bad = nlohmann::json::parse(report);
    sw_free(report);
    CHECK(ok == 0);
    CHECK_FALSE(bad["checks"][0]["passed"].get<bool>());

    CHECK(sw_validate("{not json", &report, &ok) == SW_ERR_PARSE);
}
