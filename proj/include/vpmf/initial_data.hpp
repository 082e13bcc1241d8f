#pragma once
// Well-prepared initial data: phi0 = tanh(sd/eps) clipped to +-(1 - 1e-15).
// The tanh ansatz satisfies continuum equipartition eps|grad|^2/2 = W/eps
// exactly, so the discrepancy starts near zero.

#include <vector>

#include "vpmf/grid.hpp"
#include "vpmf/region.hpp"

namespace vpmf {

struct InitialProfile {
    double epsilon = 0.0;
    ScalarField phi0;
    double volume_target = 0.0;  // integral of k(phi0), conserved by the flow
};

// Rejects under-resolved interfaces: requires eps * n >= 2 (eps >= 4h is the
// comfortable regime; the hard floor admits eps = 2.56 h style configs while
// still refusing eps < 2h).
InitialProfile build_phi0(const Region& region, double epsilon, const TorusGrid& grid);

// sup over (x, r) of mu0(B_r(x)) / (omega_{d-1} r^{d-1}), omega_1 = 2,
// omega_2 = pi. radii must lie in (0, 1/2); samples must be nonempty.
double density_ratio_sup(const InitialProfile& profile, const std::vector<double>& radii,
                         const std::vector<std::array<double, 3>>& samples);

}  // namespace vpmf
