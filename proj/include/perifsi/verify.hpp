#pragma once

#include <functional>
#include <string>
#include <vector>

#include "perifsi/config.hpp"
#include "perifsi/csv.hpp"

namespace perifsi {

struct CheckResult {
    int group = 0;              // acceptance item the check belongs to, 1..11
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    std::vector<int> groups;    // empty runs every group
    std::function<void(const CheckResult&)> on_result;
};

inline constexpr int kCheckGroups = 11;
// Short title of each group, index 1..kCheckGroups.
std::string_view group_title(int group);

// Property suite at the resolution and forcing of `config` (the forcing must
// be nonzero and below the smallness bound). Randomized inputs follow config.seed.
std::vector<CheckResult> run_verification(const RunConfig& config, const VerifyOptions& options = {});

CsvTable report_table(const std::vector<CheckResult>& results);

}  // namespace perifsi
