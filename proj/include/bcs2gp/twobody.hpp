#pragma once

#include <memory>
#include <vector>

#include "bcs2gp/potential.hpp"

namespace bcs2gp {

namespace detail {
struct RadialTransform;
}

struct GridSpec {
    int points = 8000;        // radial grid points (<= 10^4)
    double radius = 0.0;      // 0 = choose automatically from the decay rate
    int q_points = 1024;      // stored momentum samples
    double q_max = 0.0;       // 0 = choose from the decay of t
};

/// Ground state of -laplace + V: binding energy, radial profile, momentum
/// representation and the gap kernel t(q) = 2 (q^2 + E_b) alpha0_hat(q).
///
/// The momentum-space evaluators work at arbitrary q (oscillatory quadrature
/// over the stored radial profile), the q_grid arrays are cached samples.
struct BoundState {
    int d = 3;
    double E_b = 0.0;                 // binding energy, > 0
    double eigenvalue_residual = 0.0; // residual of the discrete eigenpair

    std::vector<double> r_grid;       // uniform radial grid (d=3: r>0, d=1: x>=0)
    std::vector<double> alpha0;       // alpha0 on r_grid, normalized, >= 0 at origin
    std::vector<double> q_grid;       // log near 0 + uniform tail
    std::vector<double> alpha0_hat;   // samples of the momentum representation
    std::vector<double> t_vals;       // samples of t(q)

    bool analytic_point = false;      // point-interaction reference (d=3)

    bool normalized = false;
    double normalization_error = 0.0;

    double alpha0_hat_at(double q) const;
    double t_at(double q) const;        // 2 (q^2 + E_b) alpha0_hat(q)
    double t_prime_at(double q) const;
    double t_second_at(double q) const;
    /// Independent route t = -2 F[V alpha0]; used for the cross-check only.
    double t_from_potential_at(double q, const PotentialSpec& V) const;

    double dr() const { return r_grid.size() > 1 ? r_grid[1] - r_grid[0] : 0.0; }

  private:
    friend BoundState momentum_representation(BoundState bs);
    friend BoundState solve_ground_state(const PotentialSpec& V, const GridSpec& grid);
    // precomputed oscillatory-transform workspace (moments, weighted profiles)
    std::shared_ptr<const detail::RadialTransform> transform_;
};

BoundState solve_ground_state(const PotentialSpec& V, const GridSpec& grid = {});

/// Fill in / refresh alpha0_hat, t and rescale so that
/// \int |alpha0_hat|^2 dq/(2pi)^d = 1.
BoundState momentum_representation(BoundState bs);

/// t(q) on the stored q_grid plus the sup-norm discrepancy against the
/// independent -2 F[V alpha0] route.
struct GapKernelResult {
    std::vector<double> t;
    double cross_check_sup = 0.0;  // sup_q |t + 2 F[V alpha0]|
};
GapKernelResult gap_kernel_t(const BoundState& bs, const PotentialSpec& V);

/// Analytic point-interaction reference state (d=3): E_b = 1/a_s^2,
/// alpha0_hat = sqrt(8 pi) E_b^{1/4} / (q^2 + E_b).
BoundState point_interaction_reference(double a_s);

}  // namespace bcs2gp
