#include "cli_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stepwell::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(int line, const std::string& message) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + message);
}

double to_double(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') config_error(line, "field '" + key + "': bad number '" + v + "'");
    return d;
}

long long to_ll(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    const long long d = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        config_error(line, "field '" + key + "': bad integer '" + v + "'");
    return d;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    config_error(line, "field '" + key + "': expected true/false, got '" + v + "'");
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_error(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "well.a") c.well_a = to_double(val, line_no, key);
        else if (key == "well.b") c.well_b = to_double(val, line_no, key);
        else if (key == "well.v0") c.well_v0 = to_double(val, line_no, key);
        else if (key == "contract.strike") c.strike = to_double(val, line_no, key);
        else if (key == "contract.tau") c.tau = to_double(val, line_no, key);
        else if (key == "curves.r") c.r_curve = val;
        else if (key == "curves.sigma") c.sigma_curve = val;
        else if (key == "query.s0") c.s0 = val;
        else if (key == "engine.n_steps") c.n_steps = static_cast<int>(to_ll(val, line_no, key));
        else if (key == "engine.eigen_mode") {
            if (val != "exact" && val != "approx")
                config_error(line_no, "field 'engine.eigen_mode': expected exact|approx");
            c.eigen_mode = val;
        } else if (key == "engine.gauge") {
            if (val != "centered" && val != "raw")
                config_error(line_no, "field 'engine.gauge': expected centered|raw");
            c.gauge = val;
        } else if (key == "engine.max_terms") c.max_terms = static_cast<int>(to_ll(val, line_no, key));
        else if (key == "mc.enabled") c.mc_enabled = to_bool(val, line_no, key);
        else if (key == "mc.paths") c.mc_paths = to_ll(val, line_no, key);
        else if (key == "mc.steps_per_year") c.mc_steps_per_year = static_cast<int>(to_ll(val, line_no, key));
        else if (key == "mc.seed") c.mc_seed = static_cast<unsigned long long>(to_ll(val, line_no, key));
        else if (key == "mc.antithetic") c.mc_antithetic = to_bool(val, line_no, key);
        else if (key == "output.csv") c.out_csv = val;
        else if (key == "output.svg") c.out_svg = val;
        else config_error(line_no, "unknown key '" + key + "'");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "well.a = " << format_double(c.well_a) << "\n";
    out << "well.b = " << format_double(c.well_b) << "\n";
    out << "well.v0 = " << format_double(c.well_v0) << "\n";
    out << "contract.strike = " << format_double(c.strike) << "\n";
    out << "contract.tau = " << format_double(c.tau) << "\n";
    out << "curves.r = " << c.r_curve << "\n";
    out << "curves.sigma = " << c.sigma_curve << "\n";
    out << "query.s0 = " << c.s0 << "\n";
    out << "engine.n_steps = " << c.n_steps << "\n";
    out << "engine.eigen_mode = " << c.eigen_mode << "\n";
    out << "engine.gauge = " << c.gauge << "\n";
    out << "engine.max_terms = " << c.max_terms << "\n";
    out << "mc.enabled = " << (c.mc_enabled ? "true" : "false") << "\n";
    out << "mc.paths = " << c.mc_paths << "\n";
    out << "mc.steps_per_year = " << c.mc_steps_per_year << "\n";
    out << "mc.seed = " << c.mc_seed << "\n";
    out << "mc.antithetic = " << (c.mc_antithetic ? "true" : "false") << "\n";
    if (!c.out_csv.empty()) out << "output.csv = " << c.out_csv << "\n";
    if (!c.out_svg.empty()) out << "output.svg = " << c.out_svg << "\n";
    return out.str();
}

std::vector<double> expand_s0_grid(const std::string& spec) {
    std::vector<double> grid;
    const auto bad = [&](const std::string& why) {
        throw std::runtime_error("query.s0 '" + spec + "': " + why);
    };
    if (spec.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0;
        int n = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3)
            bad("expected lo:hi:count");
        if (n < 2 || !(hi > lo)) bad("range needs hi > lo and count >= 2");
        for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));
    } else {
        std::istringstream in(spec);
        std::string item;
        while (std::getline(in, item, ',')) {
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (end == item.c_str()) bad("bad number '" + item + "'");
            grid.push_back(v);
        }
        if (grid.empty()) bad("no values");
    }
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) bad("values must be strictly increasing");
    return grid;
}

namespace {

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

std::string rows_to_csv(const std::vector<CurveRow>& rows) {
    std::ostringstream out;
    out << "s0,price_spectral,price_mc,mc_stderr,n_terms,dropped_terms\n";
    for (const CurveRow& r : rows) {
        out << csv_number(r.s0) << ',' << csv_number(r.price_spectral) << ',';
        if (r.price_mc) out << csv_number(*r.price_mc);
        out << ',';
        if (r.mc_stderr) out << csv_number(*r.mc_stderr);
        out << ',' << r.n_terms << ',' << r.dropped_terms << "\n";
    }
    return out.str();
}

std::vector<CurveRow> csv_to_rows(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    if (trim(line) != "s0,price_spectral,price_mc,mc_stderr,n_terms,dropped_terms")
        throw std::runtime_error("csv: unexpected header '" + line + "'");
    std::vector<CurveRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 6)
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 6 fields");
        CurveRow r;
        r.s0 = std::strtod(fields[0].c_str(), nullptr);
        r.price_spectral = std::strtod(fields[1].c_str(), nullptr);
        if (!trim(fields[2]).empty()) r.price_mc = std::strtod(fields[2].c_str(), nullptr);
        if (!trim(fields[3]).empty()) r.mc_stderr = std::strtod(fields[3].c_str(), nullptr);
        r.n_terms = std::atoi(fields[4].c_str());
        r.dropped_terms = std::atoi(fields[5].c_str());
        if (!rows.empty() && !(r.s0 > rows.back().s0))
            throw std::runtime_error("csv line " + std::to_string(line_no) +
                                     ": s0 must be strictly increasing");
        rows.push_back(r);
    }
    return rows;
}

std::string render_svg(const std::string& title, const std::vector<SvgSeries>& series) {
    const double width = 800, height = 500, ml = 70, mr = 160, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) { xmin -= 1; xmax += 1; }
    if (!(ymax > ymin)) { ymin -= 1; ymax += 1; }
    const double yspan = ymax - ymin;
    ymin -= 0.05 * yspan;
    ymax += 0.05 * yspan;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << csv_number(xv) << "</text>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << csv_number(yv) << "</text>\n";
    }
    int legend_row = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"6,4\"";
        out << " points=\"";
        for (const auto& [x, y] : s.points) out << px(x) << ',' << py(y) << ' ';
        out << "\"/>\n";
        const double ly = mt + 16 * legend_row++;
        out << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
            << width - mr + 38 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
            << "/>\n";
        out << "<text x=\"" << width - mr + 44 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

namespace {

Preset make_preset(const std::string& name, const std::string& r_curve,
                   const std::string& sigma_curve, const std::string& fixed_r,
                   const std::string& fixed_sigma) {
    Preset p;
    p.name = name;
    p.config.r_curve = r_curve;
    p.config.sigma_curve = sigma_curve;
    p.config.s0 = "100:130:21";
    p.v0_set = {12.8233, 26.3401, 55.7859};
    p.fixed_r_curve = fixed_r;
    p.fixed_sigma_curve = fixed_sigma;
    return p;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {
        make_preset("fig1", "affine:0.05,0.01", "const:0.3", "const:0.05", "const:0.3"),
        make_preset("fig2", "expdecay:0.04,0.01", "const:0.3", "const:0.05", "const:0.3"),
        make_preset("fig3", "const:0.05", "affine:0.3,0.05", "const:0.05", "const:0.3"),
    };
    return all;
}

} // namespace

const Preset* find_preset(const std::string& name) {
    for (const Preset& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const Preset& p : presets()) names.push_back(p.name);
    return names;
}

const std::vector<ReferenceLevelRow>& reference_levels() {
    static const std::vector<ReferenceLevelRow> rows = {
        {55.7859, 1, 7.38515}, {55.7859, 2, 14.7215}, {55.7859, 3, 21.9384},
        {55.7859, 4, 28.8819}, {55.7859, 5, 34.4789}, {55.7859, 6, 42.1887},
        {26.3401, 1, 6.94708}, {26.3401, 2, 13.7663}, {26.3401, 3, 20.1958},
        {26.3401, 4, 25.0978}, {12.8233, 1, 6.41782}, {12.8233, 2, 12.527},
    };
    return rows;
}

} // namespace stepwell::cli
