// Acceptance suite runner: one pass/fail line per criterion; the exit code is
// the number of failed criteria. `--criterion N` runs a single check (the
// ctest registrations use this), `--json PATH` additionally writes the full
// machine-readable report.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "validation.hpp"

namespace {

struct Budget {
    int id;
    double seconds;
};
// Stated runtime budgets per criterion; exceeding one fails the criterion.
constexpr Budget kBudgets[] = {{1, 1.0},  {2, 1.0},  {3, 10.0}, {4, 120.0}, {5, 120.0},
                               {6, 30.0}, {7, 10.0}, {8, 5.0},  {9, 60.0}};

double budget_for(int id) {
    for (const Budget& b : kBudgets)
        if (b.id == id) return b.seconds;
    return 0.0;
}

} // namespace

int main(int argc, char** argv) {
    stepwell::validate::CheckOptions options;
    std::string json_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            options.only.push_back(std::atoi(argv[++i]));
        } else if (arg == "--json" && i + 1 < argc) {
            json_path = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]... [--json PATH]\n", argv[0]);
            return 64;
        }
    }

    const stepwell::validate::Report report = stepwell::validate::run_validation(options);

    int failed = 0;
    for (const auto& check : report.checks) {
        const double budget = budget_for(check.id);
        const bool in_budget = check.seconds <= budget;
        const bool ok = check.passed && in_budget;
        if (!ok) ++failed;
        std::printf("[%s] criterion %d (%s): %s [%.2fs of %.0fs budget%s]\n",
                    ok ? "PASS" : "FAIL", check.id, check.name.c_str(), check.details.c_str(),
                    check.seconds, budget, in_budget ? "" : " EXCEEDED");
    }
    for (const auto& d : report.dropped_tails)
        std::printf("dropped divergent tail: %s level=%d k2=%.6f\n", d.context.c_str(), d.level,
                    d.k2);

    if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << stepwell::validate::report_to_json(report);
    }

    std::printf("%d of %zu criteria passed\n", static_cast<int>(report.checks.size()) - failed,
                report.checks.size());
    return failed;
}
