#pragma once
// Shared test utilities: deterministic random smooth fields built from a few
// low-wavenumber Fourier modes, so derivatives stay O(1) and seeds pin values.

#include <array>
#include <cmath>
#include <random>

#include "vpmf/grid.hpp"

namespace testutil {

inline vpmf::ScalarField random_smooth_field(const vpmf::TorusGrid& g, unsigned seed,
                                             int max_wavenumber = 4, int modes = 6) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> kd(-max_wavenumber, max_wavenumber);
    std::uniform_real_distribution<double> ad(-1.0, 1.0);
    struct Mode {
        std::array<int, 3> k;
        double amp, phase;
    };
    std::vector<Mode> ms;
    for (int m = 0; m < modes; ++m) {
        Mode mo;
        for (int a = 0; a < 3; ++a) mo.k[a] = a < g.dim ? kd(rng) : 0;
        mo.amp = ad(rng);
        mo.phase = 3.0 * ad(rng);
        ms.push_back(mo);
    }
    return vpmf::sample(g, [&](const std::array<double, 3>& x) {
        double s = 0.0;
        for (const auto& mo : ms) {
            double arg = mo.phase;
            for (int a = 0; a < g.dim; ++a) arg += 2.0 * M_PI * mo.k[a] * x[a];
            s += mo.amp * std::cos(arg);
        }
        return s;
    });
}

}  // namespace testutil
