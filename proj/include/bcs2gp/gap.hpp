#pragma once

#include <vector>

#include "bcs2gp/potential.hpp"
#include "bcs2gp/twobody.hpp"

namespace bcs2gp {

struct GapOptions {
    int p_points = 480;      // radial momentum nodes (uniform grid)
    double p_max = 0.0;      // 0 = take the tail-ruled cutoff of the bound state
    int r_points = 600;      // radial nodes over the support of V
    double mixing = 0.5;     // linear-mixing weight of the fixed-point update
    int max_iter = 20000;
    double tol_factor = 1e-10;  // converged when sup|step| <= tol_factor (E_b + sup|Delta|)
    double init_eps = 0.0;      // amplitude of Delta_0 = eps t; 0 = max(mu + E_b, 0.01 E_b)
    unsigned seed = 20240902;   // stationarity-check directions / oracle multistart
};

/// Self-consistent zero-temperature pairing state on a radial momentum grid.
struct GapState {
    int d = 3;
    double mu = 0.0;
    double E_b = 0.0;
    std::vector<double> p;          // radial momentum grid
    std::vector<double> Delta;      // gap function on p
    std::vector<double> gamma_hat;  // occupation, 1/2 (1 - (p^2-mu)/E)
    std::vector<double> alpha_hat;  // pairing function, Delta/(2E)
    double energy_density = 0.0;    // reduced energy of the state
    double rho = 0.0;               // particle density 2 \int gamma dp/(2pi)^d
    bool collapsed_to_normal = false;  // Delta iterated to zero (mu <= -E_b)
    int iterations = 0;
    int projections = 0;               // admissibility projections applied
    double stationarity_defect = 0.0;  // max |directional derivative| over random checks
};

/// Translation-invariant pairing problem for a fixed potential: radial
/// momentum/space grids and the precomputed pairing operator
///   (B f)(p) = unitary FT of V * (unitary inverse FT of f),
/// discretized so that it is exactly the gradient of the discrete pairing
/// energy (2pi)^{-d} \int V |inverse(alpha)|^2 dx.
class GapProblem {
  public:
    GapProblem(const PotentialSpec& V, const BoundState& bs, const GapOptions& opts = {});

    int d() const { return d_; }
    double binding_energy() const { return E_b_; }
    const std::vector<double>& p_grid() const { return p_; }

    /// Reduced energy density
    ///   \int (p^2 - mu) gamma dp/(2pi)^d + (2pi)^{-d} \int V |alpha_check|^2 dx
    /// of an admissible (gamma, alpha) pair on the momentum grid.
    /// Throws AdmissibilityViolation unless 0 <= gamma <= 1 and
    /// alpha^2 <= gamma (1 - gamma) (up to roundoff slack).
    double reduced_energy(const std::vector<double>& gamma_hat,
                          const std::vector<double>& alpha_hat, double mu) const;

    /// Pairing operator B applied to a momentum-grid vector.
    std::vector<double> apply_pairing(const std::vector<double>& alpha_hat) const;

    /// sup_p |(p^2 + E_b) alpha0_hat + (B alpha0_hat)(p)| / sup|t| — the
    /// discrete residual of the two-body equation; pins the Fourier constants.
    double linearization_defect() const;

    /// Normal-state energy at mu (gamma = indicator(p^2 < mu), alpha = 0).
    double normal_state_energy(double mu) const;

    /// Fixed-point solution of Delta = -B[Delta/E], E = sqrt((p^2-mu)^2 + Delta^2).
    GapState solve(double mu, const GapOptions& opts = {}) const;

    /// Direct minimization of reduced_energy over gamma = sin^2 phi,
    /// alpha = 1/2 sin 2 phi (admissible by construction) with multistart
    /// descent; ground truth for solve().
    double direct_minimum(double mu, unsigned seed = 20240902) const;

  private:
    int d_ = 3;
    double E_b_ = 0.0;
    std::vector<double> p_, wp_;       // momentum nodes and measure weights
    std::vector<double> alpha0_, t_;   // bound-state data on p_
    std::vector<double> B_;            // dense pairing matrix, row-major
    double sup_t_ = 0.0;

    std::vector<double> bcs_gamma(const std::vector<double>& Delta, double mu) const;
    std::vector<double> bcs_alpha(const std::vector<double>& Delta, double mu) const;
};

/// Convenience wrapper: solves the two-body problem for V internally.
GapState solve_gap_equation(const PotentialSpec& V, double mu, const GapOptions& opts = {});

/// Direct minimization on a coarse grid (<= 60 points) as an independent
/// ground-truth energy density for the same discrete problem.
double brute_force_oracle(const PotentialSpec& V, double mu, int coarse_points = 60);

struct GapObservables {
    double rho = 0.0;
    double energy_per_particle = 0.0;  // energy_density/rho + mu/2
    double predicted_epp = 0.0;        // -E_b/2 + g rho / 4 (leading-order law)
};
/// Throws ZeroDensity when the state carries no particles.
GapObservables observables(const GapState& gs, double g, double E_b);

struct LowDensityRow {
    double eps = 0.0;             // mu + E_b
    double energy_density = 0.0;
    double rho = 0.0;
};
struct LowDensityScan {
    std::vector<LowDensityRow> rows;
    double c = 0.0;            // least-squares coefficient in energy ~ -c eps^2
    double g = 0.0;            // quartic coupling of the same potential
    double four_g_c_dev = 0.0; // |4 g c - 1|
};
/// eps_list must have >= 2 positive, strictly decreasing entries <= 0.05 E_b.
LowDensityScan low_density_scan(const PotentialSpec& V, const std::vector<double>& eps_list,
                                const GapOptions& opts = {});

}  // namespace bcs2gp
