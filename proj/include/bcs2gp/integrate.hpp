#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace bcs2gp {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimate of the absolute quadrature error
};

// Adaptive Simpson on [a,b].  Deterministic: fixed bisection order, no randomness.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-10, double rel_tol = 1e-8,
                              int max_depth = 48);

// \int_a^\infty f, via the substitution q = a + s/(1-s) on [0,1).
// The integrand must decay at least like q^{-2}.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double a = 0.0,
                                   double abs_tol = 1e-10, double rel_tol = 1e-8);

// Composite Simpson for samples on a uniform grid (odd or even count handled).
double simpson_uniform(std::span<const double> f, double dx);

// Trapezoid on an arbitrary grid.
double trapezoid(std::span<const double> x, std::span<const double> f);

// Filon-type quadrature for \int f(x) sin(q x) dx and \int f(x) cos(q x) dx with f
// sampled on a uniform grid x_i = x0 + i dx.  Quadratic interpolation of f per
// panel with exact oscillatory moments, so the accuracy does not degrade when
// q dx = O(1).  Falls back to plain Simpson weights for small q dx where the
// closed-form moment expressions lose precision.
double filon_sin(std::span<const double> f, double x0, double dx, double q);
double filon_cos(std::span<const double> f, double x0, double dx, double q);

}  // namespace bcs2gp
