#pragma once
// Pointwise energy and measure densities shared by initial data, solver
// diagnostics, and the identity checker.
//   e      = eps |grad phi|^2 / 2 + W(phi)/eps        (surface energy density)
//   xi     = eps |grad phi|^2 / 2 - W(phi)/eps        (discrepancy density)
//   mu     = e / sigma                                (diffuse surface measure)
// sigma = 4/3 normalizes one flat interface to unit mass.

#include "vpmf/calculus.hpp"
#include "vpmf/potential.hpp"

namespace vpmf {

inline ScalarField energy_density(const ScalarField& phi, double eps) {
    ScalarField e(phi.grid);
    auto g2 = norm_sq(gradient(phi));
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = 0.5 * eps * g2[i] + well(phi[i]) / eps;
    return e;
}

inline ScalarField discrepancy_density(const ScalarField& phi, double eps) {
    ScalarField xi(phi.grid);
    auto g2 = norm_sq(gradient(phi));
    for (std::size_t i = 0; i < xi.size(); ++i)
        xi[i] = 0.5 * eps * g2[i] - well(phi[i]) / eps;
    return xi;
}

inline double surface_energy(const ScalarField& phi, double eps) {
    return integrate(energy_density(phi, eps));
}

// Diffuse measure of the ball B_r(x0), using a precomputed density.
inline double measure_ball(const ScalarField& density, const std::array<double, 3>& x0, double r) {
    return ball_integral(density, x0, r) / sigma_tension;
}

// k(phi) integrated over the torus; the conserved quantity of the flow.
inline double phase_volume(const ScalarField& phi) {
    ScalarField k(phi.grid);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = well_antiderivative(phi[i]);
    return integrate(k);
}

// psi = (phi + 1)/2 integrated; tracks the geometric volume of the region.
inline double indicator_volume(const ScalarField& phi) {
    ScalarField p(phi.grid);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.5 * (phi[i] + 1.0);
    return integrate(p);
}

}  // namespace vpmf
