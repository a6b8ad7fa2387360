#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bcs2gp/coupling.hpp"
#include "bcs2gp/field.hpp"
#include "bcs2gp/potential.hpp"
#include "bcs2gp/twobody.hpp"

namespace bcs2gp {

/// Radial kernel of a bound state, truncated to zero beyond the stored q-grid
/// so that mode windows of the lattice below are exact.
RadialKernel kernel_from_bound_state(const BoundState& bs);

/// Synthetic kernel t(q) = amplitude * exp(-(q/width)^4) with analytic
/// derivatives, truncated where it falls below 1e-30 of its peak.
RadialKernel truncated_flat_kernel(double amplitude, double width, int d = 1);

/// One Floquet fiber of the Bogoliubov-de Gennes operator
///   H = [[ (-ih grad + hA)^2 - mu + h^2 W,  Delta ],
///        [ Delta^dagger, -((ih grad + hA)^2 - mu + h^2 W) ]]
/// with Delta = -(h/2)(psi t(-ih grad) + t(-ih grad) psi), discretized in the
/// plane-wave basis e^{i (2 pi n + theta) x}, |n| <= N, on the unit cell.
///
/// When A and W are constant and the kernel carries a cutoff, the stored
/// blocks cover only the window of modes where t(h q_n) can be nonzero
/// (inflated by the psi bandwidth); the remaining modes are diagonal and
/// identical in H_Delta and H_0, so they drop out of every trace difference
/// and carry a zero pairing block exactly.  Their count and one-body values
/// are recorded.
struct BdgLattice {
    double h = 0.0;
    double mu = 0.0;
    double theta = 0.0;
    int N = 0;                  // nominal basis cutoff |n| <= N
    std::vector<int> modes;     // stored (windowed) modes, ascending
    std::vector<double> q;      // q_n = 2 pi n + theta for stored modes

    Eigen::MatrixXcd K;         // upper-left block on the stored modes
    Eigen::MatrixXcd Kminus;    // magnitude of the lower-right block (H has -Kminus)
    Eigen::MatrixXcd Delta;     // upper-right block
    Eigen::MatrixXcd H;         // assembled 2m x 2m Hermitian matrix

    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::MatrixXcd eigenvectors;  // columns matching eigenvalues

    double hermiticity_defect = 0.0;
    double smallest_abs_eigenvalue = 0.0;

    int passthrough_count = 0;              // modes outside the window
    std::vector<double> passthrough_k;      // their (hq + hA0)^2 - mu + h^2 W0
    std::vector<double> passthrough_kminus; // their (hq - hA0)^2 - mu + h^2 W0
};

BdgLattice build_bdg_operator(const PeriodicField& psi, const ExternalFields& fields,
                              const RadialKernel& ker, double mu, double h, int N,
                              double theta, bool reduce_window = true);
BdgLattice build_bdg_operator(const PeriodicField& psi, const ExternalFields& fields,
                              const BoundState& bs, double mu, double h, int N,
                              double theta, bool reduce_window = true);

/// Spectral projector onto the negative subspace of the stored block.
Eigen::MatrixXcd negative_projector(const BdgLattice& lat);

/// Upper-right (pairing) block of the negative spectral projector.
Eigen::MatrixXcd alpha_delta_block(const BdgLattice& lat);

/// Max mismatch between spec(a) and -spec(b); exact particle-hole partners
/// are fibers built at theta and -theta (for real psi, A, W).
double particle_hole_defect(const BdgLattice& a, const BdgLattice& b);

/// Trace per unit volume of [H_Delta]_- - [H_0]_-  (both negative parts are
/// positive operators; the value is >= 0 for an energy-lowering pairing).
/// Averaged over theta_samples uniform Floquet points; negative eigenvalues
/// are summed in ascending-magnitude order for determinism.
double negative_part_trace_difference(const PeriodicField& psi, const ExternalFields& fields,
                                      const RadialKernel& ker, double mu, double h, int N,
                                      int theta_samples, bool reduce_window = true);

struct SemiclassicalPrediction {
    double E1 = 0.0;  // -1/2 ||psi||^2 I1
    double E2 = 0.0;  // gradient, field and quartic terms with I2, I3, Ijk
};

/// Leading coefficients of the trace expansion
///   Trs([H_Delta]_- - [H_0]_-) = -h^{2-d} E1 - h^{4-d} E2 + O(h^{6-d});
/// all unit-cell integrals evaluated spectrally from the Fourier data.
SemiclassicalPrediction semiclassical_prediction(const PeriodicField& psi,
                                                 const ExternalFields& fields,
                                                 const CoefficientSet& coeffs);

/// Periodic operator stored as Floquet fibers over a common mode set.
struct LatticeOperator {
    double h = 0.0;
    std::vector<int> modes;
    std::vector<double> thetas;
    std::vector<Eigen::MatrixXcd> fibers;  // one per theta, size m x m
};

/// Pairing blocks of theta(-H_Delta) across a uniform Floquet grid.
LatticeOperator alpha_delta_operator(const PeriodicField& psi, const ExternalFields& fields,
                                     const RadialKernel& ker, double mu, double h, int N,
                                     int theta_samples, bool reduce_window = true);

/// Operator H^1 norm: sqrt of the theta-average of
///   sum_{nm} (1 + h^2 q_n^2) |O_nm|^2
/// (the weight acts on the left index; the norm of O and O^dagger differ).
double operator_h1_norm(const LatticeOperator& O);

/// Plain L^2 (Hilbert-Schmidt per unit volume) norm squared.
double operator_l2_norm_sq(const LatticeOperator& O);

/// H^1 distance of alpha_Delta from the semiclassical ansatz
///   (h/2)(psi phi(-ih grad) + phi(-ih grad) psi),  phi(q) = t(q)/(2(q^2-mu)).
double alpha_comparison_residual(const PeriodicField& psi, const ExternalFields& fields,
                                 const RadialKernel& ker, double mu, double h, int N,
                                 int theta_samples);

/// V-weighted quadratic form  int_{C x R} V((x-y)/h) |O(x,y)|^2 dx dy
/// of a periodic operator given by Floquet fibers (d = 1).
double v_weighted_form(const LatticeOperator& O, const PotentialSpec& V);

struct TrialStateEnergy {
    double total = 0.0;
    double trace_term = 0.0;            // -1/2 Trs([H_Delta]_- - [H_0]_-)
    double projected_interaction = 0.0; // pair-kernel p-sum, cancels the trace leading order
    double residual_term = 0.0;         // V-weighted square of alpha_Delta minus the ansatz
};

/// Energy of the projector trial state at mu = -E_b:
///   F(Gamma_Delta) = -1/2 Trs([H_Delta]_- - [H_0]_-)
///                    + h^{2-d}/16 sum_p |psi_hat(p)|^2
///                        int t(q)/(q^2+E_b) (2t(q)+t(q-hp)+t(q+hp)) dq/(2pi)^d
///                    + int V((x-y)/h) |alpha_Delta - alpha_ansatz|^2,
/// an exact identity; the last term is <= 0 for V <= 0.
TrialStateEnergy trial_state_energy(const PeriodicField& psi, const ExternalFields& fields,
                                    const BoundState& bs, const PotentialSpec& V, double h,
                                    int N, int theta_samples);

struct SemiclassicalReport {
    double h = 0.0;
    double trace_diff = 0.0;
    double prediction = 0.0;  // -h^{2-d} E1 - h^{4-d} E2
    double residual = 0.0;
    double E1 = 0.0;
    double E2 = 0.0;
    double alpha_block_H1_residual = 0.0;
    double trial_energy = 0.0;  // filled only by trial_state_energy callers
};

/// Convenience bundle: trace difference, its two-term prediction and the
/// pairing-block residual for one (h, N) point.
SemiclassicalReport semiclassical_report(const PeriodicField& psi, const ExternalFields& fields,
                                         const RadialKernel& ker, double mu, double h, int N,
                                         int theta_samples);

}  // namespace bcs2gp
