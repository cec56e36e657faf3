#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncg {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<CriterionResult> criteria;
    bool all_passed = false;
    double total_seconds = 0.0;
};

struct VerifyOptions {
    std::ostream* progress = nullptr;  // per-criterion lines as they complete
};

// Runs the full acceptance suite, cache cold, one result per criterion.
VerifyReport run_acceptance(const VerifyOptions& opts = {});

void print_report(const VerifyReport& r, std::ostream& os);

}  // namespace ncg
