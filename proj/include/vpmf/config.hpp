#pragma once

#include <string>
#include <vector>

#include "vpmf/brakke.hpp"
#include "vpmf/region.hpp"
#include "vpmf/solver.hpp"

namespace vpmf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrendAssertion {
    std::string observable;
    bool decreasing = true;  // otherwise a uniform-bound assertion
    double factor = 1.2;
};

// Parsed, fully validated run description. Flat INI sections: [solver],
// [region], [output], [brakke], [sweep]; unknown keys and sections are
// rejected outright.
struct RunConfig {
    SolverParams params;  // grid carries n and dim
    Region region;
    std::string output_dir = "out";
    int record_stride = 1;
    int snapshot_stride = 0;  // 0: only the final state is written
    bool cheap_observables = false;
    double oracle_dt = 1e-5;

    std::vector<BrakkeTest> brakke_tests;
    double brakke_C = 0.0;             // 0: use 2x the largest observed C_emp
    double brakke_max_residual = 0.0;  // 0: residual is reported, not asserted

    bool has_sweep = false;
    std::vector<double> sweep_epsilons;  // descending
    std::vector<int> sweep_ns;           // aligned with sweep_epsilons
    std::vector<TrendAssertion> sweep_asserts;
};

bool operator==(const TrendAssertion& a, const TrendAssertion& b);
bool operator==(const RunConfig& a, const RunConfig& b);

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

// Observable names valid in sweep assertions.
const std::vector<std::string>& sweep_observable_names();

}  // namespace vpmf
