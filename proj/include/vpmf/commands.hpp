#pragma once

#include <stdexcept>
#include <string>

#include "vpmf/config.hpp"

namespace vpmf {

// A run completed and its artifacts were written, but a configured assertion
// (trend, identity residual, weak margin) did not hold.
struct AssertionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evolves the configured scenario, writing diagnostics.csv, run_meta.json,
// periodic snapshots, and final_state.vpmf into cfg.output_dir.
int cmd_run(const RunConfig& cfg);

// Replays the snapshots of a finished run through the identity checker and
// writes brakke_reports.json next to them. `dir` defaults to cfg.output_dir.
int cmd_check_brakke(const RunConfig& cfg, const std::string& dir);

// Fits circles to the snapshots of a finished run and compares them with the
// sharp-interface system; ball and two_balls regions only.
int cmd_oracle_compare(const RunConfig& cfg, const std::string& dir);

// Runs every sweep member and writes sweep_report.json plus per-member CSVs.
int cmd_sweep(const RunConfig& cfg);

}  // namespace vpmf
