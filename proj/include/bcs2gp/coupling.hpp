#pragma once

#include <array>
#include <functional>

#include "bcs2gp/twobody.hpp"

namespace bcs2gp {

/// Momentum-space coefficient integrals of the semiclassical expansion,
/// all with the measure dq/(2pi)^d:
///   I1  = \int t^2/(q^2-mu),  I2 = \int t^2/(q^2-mu)^2,
///   I3  = \int t^4/(q^2-mu)^3,
///   Ijk = \int t (d_j d_k t)/(q^2-mu)  (diagonal for radial t).
struct CoefficientSet {
    double g = 0.0;        // GP coupling (only filled by the BoundState overload)
    double g_error = 0.0;  // quadrature error estimate for g
    double I1 = 0.0;
    double I2 = 0.0;
    double I3 = 0.0;
    std::array<std::array<double, 3>, 3> Ijk{};  // top-left d x d block is used
    double mu = 0.0;
    int d = 3;
    // discrepancies of the exact identities I2 = 4, I3 = 16 g; only meaningful
    // when evaluated at mu = -E_b with the bound-state kernel
    double identity_I2_error = 0.0;
    double identity_I3_error = 0.0;
};

/// GP coupling g = \int |alpha0_hat|^4 (q^2+E_b) dq/(2pi)^d.  `scale` replaces
/// alpha0_hat by scale*alpha0_hat (test hook: g scales exactly like scale^4).
double compute_g(const BoundState& bs, double* error = nullptr, double scale = 1.0);

/// A radial kernel given by callables, for synthetic t(q) profiles.
struct RadialKernel {
    int d = 1;
    std::function<double(double)> t;    // t(q), even in q
    std::function<double(double)> tp;   // t'(q)
    std::function<double(double)> tpp;  // t''(q)
    // integration cutoff: beyond q_cut the kernel is treated as zero
    // (0 means integrate the full half line)
    double q_cut = 0.0;
};

CoefficientSet coefficient_integrals(const RadialKernel& k, double mu);

/// BoundState overload; at mu = -E_b the exact identities I2 = 4 and
/// I3 = 16 g are checked and their residuals recorded.
CoefficientSet coefficient_integrals(const BoundState& bs, double mu);

}  // namespace bcs2gp
