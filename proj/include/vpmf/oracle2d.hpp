#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "vpmf/interface_extract.hpp"
#include "vpmf/snapshot.hpp"

namespace vpmf {

// Disjoint circles on the torus evolving by r_i' = kbar - 1/r_i, kbar = N / sum r_j.
// Centers are fixed; they matter only when comparing against a phase field.
struct CircleSystem {
    std::vector<double> radii;
    std::vector<std::array<double, 3>> centers;
};

struct ExtinctionEvent {
    double time = 0.0;
    std::size_t index = 0;  // slot in the original radii list
    double radius = 0.0;    // last value before removal
};

struct CircleTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> radii;  // row per time, extinct slots hold 0
    std::vector<ExtinctionEvent> events;
};

struct StepSizeError : std::runtime_error {
    explicit StepSizeError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time;
};

std::vector<double> circle_rhs(const std::vector<double>& radii);

// Fixed-step RK4. A circle is removed once its radius reaches 1e-4, or earlier
// when the per-step guard min r > 5 dt max|r'| fails while it is already below
// 0.01; a guard failure on a larger circle is a genuine step-size violation.
CircleTrajectory evolve_circles(const CircleSystem& sys, double dt, double t_final);

std::string trajectory_csv(const CircleTrajectory& traj);

struct CompareResult {
    double max_radius_error = 0.0;
    std::size_t snapshots_compared = 0;
    bool topology_event = false;
    double event_time = 0.0;  // first snapshot whose loop structure stopped matching
    std::vector<std::array<double, 4>> rows;  // t, circle slot, fitted radius, oracle radius
};

// Fits a circle to every interface loop of every snapshot and matches the fits
// against the trajectory radii (linearly interpolated in time). Comparison
// stops, without failing, at the first topology mismatch.
CompareResult compare_phase_field(const std::vector<Snapshot>& snaps, const CircleSystem& sys,
                                  const CircleTrajectory& traj);

}  // namespace vpmf
