#pragma once
// Measure-theoretic observables of a PhaseState: energies, diffuse surface
// measure, discrepancy, approximate velocity/curvature, density ratios, and
// level-set geometry, plus their CSV row form.

#include <string>
#include <utility>
#include <vector>

#include "vpmf/energy.hpp"
#include "vpmf/interface_extract.hpp"
#include "vpmf/solver.hpp"

namespace vpmf {

struct DiagnosticsRecord {
    double t = 0.0;
    double E_S = 0.0;
    double E_P = 0.0;
    double E_total = 0.0;
    double lambda = 0.0;
    double vol_k = 0.0;     // integral of k(phi)
    double vol_psi = 0.0;   // integral of (phi+1)/2
    double xi_total = 0.0;  // total variation of the discrepancy
    double mu_total = 0.0;  // diffuse measure of the whole torus
    double density_ratio_sup = 0.0;
    std::vector<std::array<double, 3>> interface_points;
};

double penalty_energy(const PhaseState& s, const SolverParams& p);

// (1/sigma) integral of phi_test * (eps |grad phi|^2/2 + W(phi)/eps).
// Signed tests are allowed (the identity checker uses them); measure
// semantics need phi_test >= 0.
double mu_measure(const PhaseState& s, const ScalarField& phi_test, double eps);

// Discrepancy density (1/sigma)(eps |grad|^2/2 - W/eps) and its total
// variation over the torus.
std::pair<ScalarField, double> discrepancy(const PhaseState& s, double eps);

// v = (-phi_t/|grad phi|) grad phi/|grad phi| with phi_t the instantaneous
// right-hand side; zero where |grad phi| < 1e-12/h.
VectorField approx_velocity(const PhaseState& s, const SolverParams& p);

// h = lap phi - W'(phi)/eps^2.
ScalarField approx_curvature(const PhaseState& s, const SolverParams& p);

double density_ratio(const PhaseState& s, double eps, const std::array<double, 3>& x0, double r);
double density_ratio_sup(const PhaseState& s, double eps, const std::vector<double>& radii,
                         const std::vector<std::array<double, 3>>& samples);

// Sample-set design for the density sup: four radii spanning the interface
// scale, eight fixed off-center probe points, and up to 16 points tracked on
// the current zero level set.
std::vector<double> density_default_radii();
std::vector<std::array<double, 3>> density_fixed_points(int dim);
std::vector<std::array<double, 3>> density_sample_points(const PhaseState& s);

// cheap = true skips the density sup and interface extraction (their fields
// read 0 / empty); everything else is always computed.
DiagnosticsRecord make_record(const PhaseState& s, const SolverParams& p, bool cheap = false);

// Fixed CSV column order; rows print with %.17g so parsing returns the exact
// doubles.
std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

}  // namespace vpmf
