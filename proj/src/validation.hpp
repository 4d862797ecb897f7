#pragma once

#include <string>
#include <vector>

namespace stepwell::validate {

struct CheckOptions {
    std::vector<int> only;            // check ids to run; empty = all
    int corrupt_id = 0;               // test hook: force this check's tolerance to 0
    long long mc_paths = 400000;      // price-comparison path count
    int mc_steps_per_year = 4000;
    long long mc_vanilla_paths = 400000;
};

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string details;
    double seconds = 0.0;
};

struct DroppedTailNote {
    std::string context;
    int level = 0;
    double k2 = 0.0;
};

struct Report {
    std::vector<CheckResult> checks;
    std::vector<DroppedTailNote> dropped_tails;
    bool all_passed = false;
};

// Runs the validation suite (all nine checks by default).
Report run_validation(const CheckOptions& options = {});

std::string report_to_json(const Report& report);

} // namespace stepwell::validate
