#pragma once

#include "bcs2gp/field.hpp"

namespace bcs2gp {

/// Periodic magnetic Gross-Pitaevskii functional on the unit cell,
///   E(psi) = \int [ 1/4 |(-i grad + 2A) psi|^2 + W |psi|^2 + g |psi|^4 ] dx,
/// evaluated spectrally with a dealiased real-space grid for the quartic term.
double gp_energy(const PeriodicField& psi, const ExternalFields& fields, double g);

/// L^2 gradient G with the convention
///   E(psi + eps h) = E(psi) + eps Re<G, h> + O(eps^2),
/// i.e. G = 1/2 (-i grad + 2A)^2 psi + 2 W psi + 4 g |psi|^2 psi, truncated to
/// the cutoff of psi.
PeriodicField gp_gradient(const PeriodicField& psi, const ExternalFields& fields, double g);

struct MinimizeOptions {
    double tol = 1e-8;       // L^2 norm of the spectral gradient
    int max_iter = 50000;
    unsigned seed = 20240901;  // seeding for the random restart
    int cutoff = 0;            // psi mode cutoff; 0 = choose from the fields
};

struct MinimizeResult {
    PeriodicField psi;
    double energy = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
};

/// Deterministic multistart first-order descent (Barzilai-Borwein steps with
/// a backtracking safeguard), starting from the translation-invariant
/// candidate and from a seeded random field; returns the lower minimum.
MinimizeResult gp_minimize(const ExternalFields& fields, double g,
                           const MinimizeOptions& opts = {});

struct TranslationInvariantGp {
    double density = 0.0;  // |psi|^2 = delta_mu/(2g)
    double energy = 0.0;   // -delta_mu^2/(4g)
};
TranslationInvariantGp translation_invariant_gp(double delta_mu, double g);

/// psi' = exp(-2 i chi) psi (re-truncated at an enlarged cutoff),
/// A' = A + grad chi, W' = W.  chi must be real.
struct GaugeResult {
    PeriodicField psi;
    ExternalFields fields;
};
GaugeResult gauge_transform(const PeriodicField& psi, const ExternalFields& fields,
                            const PeriodicField& chi);

}  // namespace bcs2gp
