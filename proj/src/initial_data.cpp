#include "vpmf/initial_data.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vpmf/energy.hpp"

namespace vpmf {

InitialProfile build_phi0(const Region& region, double epsilon, const TorusGrid& grid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_phi0: epsilon must be positive");
    if (epsilon * grid.n < 2.0) {
        std::ostringstream os;
        os << "build_phi0: under-resolved interface, epsilon >= 4h recommended and"
              " epsilon >= 2h required; got epsilon=" << epsilon << ", h=" << grid.h;
        throw std::invalid_argument(os.str());
    }
    region.validate(grid.dim, epsilon);

    constexpr double cap = 1.0 - 1e-15;
    InitialProfile p;
    p.epsilon = epsilon;
    p.phi0 = ScalarField(grid);
    const std::size_t nc = grid.cells();
    for (std::size_t i = 0; i < nc; ++i) {
        const auto x = grid.center(grid.coords(i));
        double v = std::tanh(signed_distance(region, x, grid.dim) / epsilon);
        if (v > cap) v = cap;
        if (v < -cap) v = -cap;
        p.phi0[i] = v;
    }
    p.volume_target = phase_volume(p.phi0);
    return p;
}

double density_ratio_sup(const InitialProfile& profile, const std::vector<double>& radii,
                         const std::vector<std::array<double, 3>>& samples) {
    if (samples.empty()) throw std::invalid_argument("density_ratio_sup: samples must be nonempty");
    for (double r : radii)
        if (!(r > 0.0) || r >= 0.5)
            throw std::invalid_argument("density_ratio_sup: radii must lie in (0, 1/2)");
    const int d = profile.phi0.grid.dim;
    const ScalarField dens = energy_density(profile.phi0, profile.epsilon);
    double sup = 0.0;
    for (const auto& x : samples)
        for (double r : radii) {
            double denom = d == 2 ? 2.0 * r : M_PI * r * r;
            sup = std::max(sup, measure_ball(dens, x, r) / denom);
        }
    return sup;
}

}  // namespace vpmf
