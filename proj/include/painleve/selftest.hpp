#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace painleve::selftest {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

// Runs the full acceptance suite; progress lines go to `out` when given.
std::vector<CriterionResult> run_all(std::ostream* out = nullptr);
bool all_pass(const std::vector<CriterionResult>& rs);

}  // namespace painleve::selftest
