#pragma once
// Analytic regions on the torus with exact (ball/two_balls/stripe) or
// root-finder (ellipse) signed distances. Sign convention: positive inside.

#include <array>
#include <string>
#include <vector>

#include "vpmf/grid.hpp"

namespace vpmf {

enum class RegionKind { ball, two_balls, ellipse, stripe };

std::string region_kind_name(RegionKind k);
RegionKind region_kind_from_name(const std::string& s);

struct Region {
    RegionKind kind = RegionKind::ball;
    std::vector<std::array<double, 3>> centers;
    std::vector<double> radii;
    std::array<double, 2> semi_axes{0.0, 0.0};  // ellipse: axis 0, axis 1
    double half_width = 0.0;                    // stripe about x0 = 1/2

    static Region ball(const std::array<double, 3>& c, double r);
    static Region two_balls(const std::array<double, 3>& c1, double r1,
                            const std::array<double, 3>& c2, double r2);
    static Region ellipse(const std::array<double, 3>& c, double a, double b);
    static Region stripe(double half_width);

    // Shape fits simply on the torus; two_balls separation >= 4 eps.
    void validate(int dim, double eps) const;
};

// Positive inside, negative outside. Exact for ball/two_balls/stripe; the
// ellipse distance comes from a bracketed root solve on the boundary
// parameter, accurate well below 1e-10. Ellipse requires dim == 2.
double signed_distance(const Region& r, const std::array<double, 3>& x, int dim);

}  // namespace vpmf
