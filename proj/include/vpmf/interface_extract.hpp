#pragma once
// Zero level set extraction on the periodic cell-center lattice.
// d=2: marching squares with linear interpolation, segments chained into
// closed loops. phi == 0 counts as positive, saddles split by the cell mean.
// d=3: interpolated edge-crossing point cloud, no connectivity.

#include <array>
#include <vector>

#include "vpmf/grid.hpp"

namespace vpmf {

struct InterfaceLoop {
    // ordered boundary points; the last connects back to the first. Coordinates
    // may leave [0,1) so consecutive points stay close (unwrapped on the walk).
    std::vector<std::array<double, 3>> pts;
};

std::vector<InterfaceLoop> extract_interface_2d(const ScalarField& phi);

std::vector<std::array<double, 3>> extract_interface_cloud(const ScalarField& phi);

// Shoelace area of the unwrapped loop (absolute value).
double loop_area(const InterfaceLoop& loop);

double loop_perimeter(const InterfaceLoop& loop);

struct CircleFit {
    std::array<double, 3> center{0.5, 0.5, 0.0};  // folded into [0,1)
    double radius = 0.0;
    double rms = 0.0;  // radial scatter of the fit
};

// Algebraic least-squares circle through the loop points.
CircleFit fit_circle(const InterfaceLoop& loop);

}  // namespace vpmf
