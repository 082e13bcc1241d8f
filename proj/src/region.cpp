#include "vpmf/region.hpp"

#include <cmath>
#include <stdexcept>

namespace vpmf {

std::string region_kind_name(RegionKind k) {
    switch (k) {
        case RegionKind::ball: return "ball";
        case RegionKind::two_balls: return "two_balls";
        case RegionKind::ellipse: return "ellipse";
        case RegionKind::stripe: return "stripe";
    }
    return "?";
}

RegionKind region_kind_from_name(const std::string& s) {
    if (s == "ball") return RegionKind::ball;
    if (s == "two_balls") return RegionKind::two_balls;
    if (s == "ellipse") return RegionKind::ellipse;
    if (s == "stripe") return RegionKind::stripe;
    throw std::invalid_argument("unknown region kind: " + s);
}

Region Region::ball(const std::array<double, 3>& c, double r) {
    Region rg;
    rg.kind = RegionKind::ball;
    rg.centers = {c};
    rg.radii = {r};
    return rg;
}

Region Region::two_balls(const std::array<double, 3>& c1, double r1,
                         const std::array<double, 3>& c2, double r2) {
    Region rg;
    rg.kind = RegionKind::two_balls;
    rg.centers = {c1, c2};
    rg.radii = {r1, r2};
    return rg;
}

Region Region::ellipse(const std::array<double, 3>& c, double a, double b) {
    Region rg;
    rg.kind = RegionKind::ellipse;
    rg.centers = {c};
    rg.semi_axes = {a, b};
    return rg;
}

Region Region::stripe(double half_width) {
    Region rg;
    rg.kind = RegionKind::stripe;
    rg.half_width = half_width;
    return rg;
}

void Region::validate(int dim, double eps) const {
    switch (kind) {
        case RegionKind::ball:
            if (centers.size() != 1 || radii.size() != 1)
                throw std::invalid_argument("ball region needs one center and one radius");
            if (!(radii[0] > 0.0) || radii[0] >= 0.5)
                throw std::invalid_argument("ball radius must lie in (0, 1/2)");
            break;
        case RegionKind::two_balls: {
            if (centers.size() != 2 || radii.size() != 2)
                throw std::invalid_argument("two_balls region needs two centers and two radii");
            for (double r : radii)
                if (!(r > 0.0) || r >= 0.5)
                    throw std::invalid_argument("two_balls radii must lie in (0, 1/2)");
            double d = torus_distance(centers[0], centers[1], dim);
            if (d - radii[0] - radii[1] < 4.0 * eps)
                throw std::invalid_argument("two_balls components must be separated by >= 4 eps");
            // both balls inside a common half-ball: midpoint covers them
            if (0.5 * d + std::max(radii[0], radii[1]) >= 0.5)
                throw std::invalid_argument("two_balls union does not fit in a ball of radius 1/2");
            break;
        }
        case RegionKind::ellipse:
            if (dim != 2) throw std::invalid_argument("ellipse region requires dim == 2");
            if (centers.size() != 1)
                throw std::invalid_argument("ellipse region needs one center");
            if (!(semi_axes[0] > 0.0) || !(semi_axes[1] > 0.0) ||
                std::max(semi_axes[0], semi_axes[1]) >= 0.5)
                throw std::invalid_argument("ellipse semi-axes must lie in (0, 1/2)");
            break;
        case RegionKind::stripe:
            if (!(half_width > 0.0) || half_width >= 0.5)
                throw std::invalid_argument("stripe half-width must lie in (0, 1/2)");
            break;
    }
}

namespace {

// Distance from a first-quadrant point (px, py) >= 0 to the ellipse arc
// {(A cos t, B sin t) : t in [0, pi/2]}. The derivative of half the squared
// distance, g(t) = (A cos t - px)(-A sin t) + (B sin t - py)(B cos t), has
// g(0) = -B py <= 0 and g(pi/2) = A px >= 0; a coarse scan picks the bracket
// around the nearest arc sample so bisection lands on the global minimum even
// for points inside the evolute where g has several roots.
double ellipse_quadrant_distance(double px, double py, double A, double B) {
    auto dist2 = [&](double t) {
        double dx = A * std::cos(t) - px;
        double dy = B * std::sin(t) - py;
        return dx * dx + dy * dy;
    };
    auto g = [&](double t) {
        double c = std::cos(t), s = std::sin(t);
        return (A * c - px) * (-A * s) + (B * s - py) * (B * c);
    };
    constexpr int kScan = 32;
    const double half_pi = 0.5 * M_PI;
    int best = 0;
    double best_d = dist2(0.0);
    for (int i = 1; i <= kScan; ++i) {
        double d = dist2(half_pi * i / kScan);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    double lo = half_pi * std::max(0, best - 1) / kScan;
    double hi = half_pi * std::min(kScan, best + 1) / kScan;
    double glo = g(lo), ghi = g(hi);
    if (glo > 0.0 && ghi > 0.0) return std::sqrt(dist2(lo));
    if (glo < 0.0 && ghi < 0.0) return std::sqrt(dist2(hi));
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(dist2(0.5 * (lo + hi)));
}

double ball_sd(const std::array<double, 3>& c, double r, const std::array<double, 3>& x, int dim) {
    return r - torus_distance(x, c, dim);
}

}  // namespace

double signed_distance(const Region& r, const std::array<double, 3>& x, int dim) {
    switch (r.kind) {
        case RegionKind::ball:
            return ball_sd(r.centers[0], r.radii[0], x, dim);
        case RegionKind::two_balls:
            // disjoint union: sign and magnitude both come out of the max
            return std::max(ball_sd(r.centers[0], r.radii[0], x, dim),
                            ball_sd(r.centers[1], r.radii[1], x, dim));
        case RegionKind::ellipse: {
            if (dim != 2) throw std::invalid_argument("ellipse region requires dim == 2");
            const double A = r.semi_axes[0], B = r.semi_axes[1];
            const double px = std::fabs(wrap_delta(x[0] - r.centers[0][0]));
            const double py = std::fabs(wrap_delta(x[1] - r.centers[0][1]));
            const double d = ellipse_quadrant_distance(px, py, A, B);
            const double q = (px / A) * (px / A) + (py / B) * (py / B);
            return q < 1.0 ? d : -d;
        }
        case RegionKind::stripe:
            return r.half_width - std::fabs(wrap_delta(x[0] - 0.5));
    }
    throw std::logic_error("unreachable region kind");
}

}  // namespace vpmf
