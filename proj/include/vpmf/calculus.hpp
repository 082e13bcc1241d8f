#pragma once
// Finite-difference calculus on the periodic cell lattice.
//
// laplacian is the compact 3-point-per-axis stencil sum_a D-_a D+_a; together
// with the midpoint-rule integrate it satisfies the exact summation-by-parts
// identity  integrate(f * laplacian(g)) = -sum_a h^d sum_cells (D+_a f)(D+_a g)
// up to roundoff, which the dissipation and balance checks rely on.

#include "vpmf/grid.hpp"

namespace vpmf {

// Midpoint quadrature h^d * sum. Fixed summation order (flat index ascending),
// serial, so results are bit-reproducible.
double integrate(const ScalarField& f);

// Compact Laplacian, second order.
ScalarField laplacian(const ScalarField& f);

// Centered first differences (f(x+h e_a) - f(x-h e_a)) / (2h), all axes.
VectorField gradient(const ScalarField& f);

// Forward difference along one axis, (f(x+h e_a) - f(x)) / h.
ScalarField forward_diff(const ScalarField& f, int axis);

// Pointwise dot product of two vector fields.
ScalarField dot(const VectorField& a, const VectorField& b);

// Pointwise |g|^2.
ScalarField norm_sq(const VectorField& g);

// Solves (a I - b laplacian) u = f exactly in the discrete Fourier basis,
// using the stencil symbol mu_k = sum_a (2 - 2 cos(2 pi k_a / n)) / h^2 so the
// residual of the *discrete* operator vanishes to roundoff. Requires a > 0 and
// b >= 0 (a + b mu_k > 0 for every mode).
ScalarField helmholtz_solve(const ScalarField& f, double a, double b);

// max |f_i|
double max_abs(const ScalarField& f);

// Sum of f over cells whose centers lie within min-image distance r of x0,
// times h^d. r must be < 1/2 so the ball is unambiguous on the torus.
double ball_integral(const ScalarField& f, const std::array<double, 3>& x0, double r);

}  // namespace vpmf
