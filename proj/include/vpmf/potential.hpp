#pragma once
// Double-well potential and derived pointwise quantities.
//   W(s)  = (1 - s^2)^2 / 2
//   W'(s) = -2 s (1 - s^2)
//   sqrt(2 W(s)) = |1 - s^2|
//   k(s)  = s - s^3/3            (primitive of sqrt(2W) on [-1,1])
// sigma = k(1) - k(-1) = 4/3 is the surface tension constant.

#include <cmath>

namespace vpmf {

inline double well(double s) {
    double u = 1.0 - s * s;
    return 0.5 * u * u;
}

inline double well_prime(double s) { return -2.0 * s * (1.0 - s * s); }

inline double sqrt_two_well(double s) { return std::fabs(1.0 - s * s); }

inline double well_antiderivative(double s) { return s - s * s * s / 3.0; }

inline constexpr double sigma_tension = 4.0 / 3.0;

}  // namespace vpmf
