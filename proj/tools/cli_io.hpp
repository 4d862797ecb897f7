#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stepwell::cli {

// A full run configuration; round-trips losslessly through the flat
// key-value config format (dotted section keys, '#' comments, UTF-8).
struct RunConfig {
    double well_a = 4.5;
    double well_b = 4.867;
    double well_v0 = 55.7859;
    double strike = 100.0;
    double tau = 1.0;
    std::string r_curve = "const:0.05";
    std::string sigma_curve = "const:0.3";
    std::string s0 = "115"; // single value, comma list, or lo:hi:n range
    int n_steps = 1000;
    std::string eigen_mode = "exact";  // exact | approx
    std::string gauge = "centered";    // centered | raw
    int max_terms = 0;                 // 0 = every bound state
    bool mc_enabled = false;
    long long mc_paths = 400000;
    int mc_steps_per_year = 4000;
    unsigned long long mc_seed = 42;
    bool mc_antithetic = true;
    std::string out_csv;
    std::string out_svg;

    bool operator==(const RunConfig&) const = default;
};

// Parse the key-value text; errors carry the offending line and field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Canonical serialization: fixed key order, shortest round-trip numbers.
std::string serialize_config(const RunConfig& config);

// Expand the s0 field into a strictly increasing grid.
std::vector<double> expand_s0_grid(const std::string& spec);

// One output row of a price sweep.
struct CurveRow {
    double s0 = 0.0;
    double price_spectral = 0.0;
    std::optional<double> price_mc;
    std::optional<double> mc_stderr;
    int n_terms = 0;
    int dropped_terms = 0;
};

// CSV header is fixed: s0,price_spectral,price_mc,mc_stderr,n_terms,dropped_terms
std::string rows_to_csv(const std::vector<CurveRow>& rows);
std::vector<CurveRow> csv_to_rows(const std::string& text);

// Minimal single-chart SVG: one polyline per series.
struct SvgSeries {
    std::string label;
    std::string color = "#1f77b4";
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};
std::string render_svg(const std::string& title, const std::vector<SvgSeries>& series);

// Shipped sweep presets (fig1..fig3 reproduce the reference figures).
struct Preset {
    std::string name;
    RunConfig config;                 // representative single-well config
    std::vector<double> v0_set;      // wells swept by the preset
    std::string fixed_r_curve;       // dashed-line counterpart curves
    std::string fixed_sigma_curve;
};
const Preset* find_preset(const std::string& name);
std::vector<std::string> preset_names();

// Reference bound-state table for the preset wells; rows the solver rejects
// (wavenumber at or above beta) are flagged by the spectrum command.
struct ReferenceLevelRow {
    double v0;
    int n;
    double k1;
};
const std::vector<ReferenceLevelRow>& reference_levels();

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

} // namespace stepwell::cli
