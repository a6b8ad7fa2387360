#pragma once

#include <string>
#include <vector>

#include "bcs2gp/field.hpp"
#include "bcs2gp/gap.hpp"
#include "bcs2gp/potential.hpp"
#include "bcs2gp/semiclassics.hpp"
#include "bcs2gp/twobody.hpp"

namespace bcs2gp {

/// Project a lattice pairing kernel onto the two-body ground state:
///   psi(y) = (2 pi)^{-1/2} h^{-1} \int alpha0(h^{-1}(x-y)) alpha(x, y) dx,
/// returned as truncated Fourier coefficients (cutoff < 0 keeps every
/// coefficient above 1e-10 of the largest).  Throws WindowTooSmall when the
/// mode window of the kernel misses more than 1e-8 of the alpha0 mass.
PeriodicField extract_order_parameter(const LatticeOperator& alpha, const BoundState& bs,
                                      int cutoff = -1);

struct AlphaDecomposition {
    double sigma_norm_sq = 0.0;    // ||alpha - leading||_2^2 per unit volume
    double leading_norm_sq = 0.0;  // ||(h/2)(psi a0hat + a0hat psi)||_2^2
};

/// Split a pairing kernel into the symmetrized psi alpha0 leading term and
/// the remainder sigma of the ground-state decomposition.
AlphaDecomposition decompose_alpha(const LatticeOperator& alpha, const PeriodicField& psi,
                                   const BoundState& bs);

struct CrossoverRow {
    double h = 0.0;
    double e_bcs_scaled = 0.0;  // (h^{-d} F_ti(-E_b + h^2 dmu)) / h^{4-d} = F_ti / h^4
    double e_gp = 0.0;          // -delta_mu^2 / (4g)
    double error = 0.0;         // e(h) = e_bcs_scaled - e_gp
    double eps = 0.0;           // h^2 delta_mu, the chemical-potential offset
    int gap_iterations = 0;     // convergence diagnostics of the producing solve
    double gap_stationarity = 0.0;
};

struct DensityRow {
    double h = 0.0;
    double N = 0.0;    // particles per unit cell
    double rho = 0.0;  // particles per unit microscopic volume
};

struct CrossoverReport {
    std::vector<CrossoverRow> rows;  // sorted by decreasing h
    double decay_exponent = 0.0;     // log-log slope of |e(h)|; 0 when all e vanish
    std::vector<DensityRow> density;
    std::string provenance;
};

/// Translation-invariant crossover scan: for each h, solve the gap equation
/// at mu = -E_b + h^2 delta_mu, bridge to the macroscopic energy per unit
/// volume E_bcs = h^{-d} F_ti, normalize by the semiclassical power h^{4-d}
/// and compare with the GP value -delta_mu^2/(4g).  |e(h)| must shrink as h
/// does (NotConverged otherwise).
CrossoverReport crossover_scan(const PotentialSpec& V, double delta_mu,
                               const std::vector<double>& h_list,
                               const GapOptions& opts = {});

struct DensityReport {
    double N = 0.0;    // (2/h) \int_C |psi|^2
    double rho = 0.0;  // h^d N
};
DensityReport density_report(const PeriodicField& psi_gp, double h);

}  // namespace bcs2gp
