#pragma once

#include <map>
#include <string>
#include <vector>

#include "vpmf/brakke.hpp"
#include "vpmf/config.hpp"

namespace vpmf {

struct SweepMemberResult {
    double epsilon = 0.0;
    int n = 0;
    double dt = 0.0;
    std::string csv_name;
    std::string csv_text;
    std::map<std::string, double> observables;
    std::vector<BrakkeReport> brakke;
};

struct SweepOutcome {
    bool all_pass = true;
    std::string report_json;
    std::vector<SweepMemberResult> members;
};

// Runs every (epsilon, n) member of the plan with a CFL-respecting step,
// evaluates the trend assertions in plan order, and renders the report.
// Member diagnostics CSVs are returned for the caller to write.
SweepOutcome run_sweep(const RunConfig& cfg);

}  // namespace vpmf
