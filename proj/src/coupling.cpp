#include "bcs2gp/coupling.hpp"

#include <cmath>

#include "bcs2gp/errors.hpp"
#include "bcs2gp/integrate.hpp"

namespace bcs2gp {

namespace {

// \int f(q) dq/(2pi)^d for radial (even) f: d=3 picks up 4 pi q^2/(2 pi)^3,
// d=1 integrates both half lines.
QuadResult radial_integral(const std::function<double(double)>& f, int d, double q_cut = 0.0) {
    auto integrand = [&](double q) {
        const double v = f(q);
        if (d == 3) return v * q * q / (2.0 * M_PI * M_PI);
        return v / M_PI;
    };
    if (q_cut > 0.0) return integrate_adaptive(integrand, 0.0, q_cut, 1e-10, 1e-8);
    return integrate_semi_infinite(integrand, 0.0, 1e-10, 1e-8);
}

}  // namespace

double compute_g(const BoundState& bs, double* error, double scale) {
    if (!bs.normalized) throw InvalidParameter("compute_g requires a normalized state");
    const double s4 = scale * scale * scale * scale;
    QuadResult r = radial_integral(
        [&](double q) {
            const double a = bs.alpha0_hat_at(q);
            return s4 * a * a * a * a * (q * q + bs.E_b);
        },
        bs.d);
    if (!std::isfinite(r.value) || r.value <= 0.0)
        throw QuadratureFailure("coupling integral not finite");
    if (error) *error = r.error;
    return r.value;
}

CoefficientSet coefficient_integrals(const RadialKernel& k, double mu) {
    if (!(mu < 0.0)) throw InvalidParameter("coefficient integrals require mu < 0");
    if (k.d != 1 && k.d != 3) throw InvalidParameter("radial kernels support d in {1,3}");
    CoefficientSet cs;
    cs.d = k.d;
    cs.mu = mu;
    cs.I1 = radial_integral([&](double q) { return k.t(q) * k.t(q) / (q * q - mu); }, k.d,
                            k.q_cut)
                .value;
    cs.I2 = radial_integral(
                [&](double q) {
                    const double den = q * q - mu;
                    return k.t(q) * k.t(q) / (den * den);
                },
                k.d, k.q_cut)
                .value;
    cs.I3 = radial_integral(
                [&](double q) {
                    const double t = k.t(q);
                    const double den = q * q - mu;
                    return t * t * t * t / (den * den * den);
                },
                k.d, k.q_cut)
                .value;
    // radial Hessian decomposition: d_j d_k t = (delta_jk - n_j n_k) t'/q + n_j n_k t'';
    // averaging n_j n_k over the sphere gives delta_jk/d, so Ijk is diagonal.
    double diag;
    if (k.d == 3) {
        diag = radial_integral(
                   [&](double q) {
                       const double lap_part =
                           (q > 1e-9) ? (2.0 / 3.0) * k.tp(q) / q + (1.0 / 3.0) * k.tpp(q)
                                      : k.tpp(q);  // t'(q)/q -> t''(0) as q -> 0
                       return k.t(q) * lap_part / (q * q - mu);
                   },
                   3, k.q_cut)
                   .value;
    } else {
        diag = radial_integral([&](double q) { return k.t(q) * k.tpp(q) / (q * q - mu); },
                               1, k.q_cut)
                   .value;
    }
    for (int j = 0; j < k.d; ++j) cs.Ijk[j][j] = diag;
    if (!std::isfinite(cs.I1) || !std::isfinite(cs.I2) || !std::isfinite(cs.I3) ||
        !std::isfinite(diag))
        throw QuadratureFailure("coefficient integral not finite");
    return cs;
}

CoefficientSet coefficient_integrals(const BoundState& bs, double mu) {
    if (!bs.normalized) throw InvalidParameter("coefficient_integrals needs a normalized state");
    RadialKernel k;
    k.d = bs.d;
    k.t = [&bs](double q) { return bs.t_at(q); };
    k.tp = [&bs](double q) { return bs.t_prime_at(q); };
    k.tpp = [&bs](double q) { return bs.t_second_at(q); };
    if (!bs.q_grid.empty()) k.q_cut = bs.q_grid.back();
    CoefficientSet cs = coefficient_integrals(k, mu);
    cs.g = compute_g(bs, &cs.g_error);
    if (std::abs(mu + bs.E_b) <= 1e-10 * bs.E_b) {
        // exact identities at mu = -E_b for the pair kernel
        cs.identity_I2_error = std::abs(cs.I2 - 4.0);
        cs.identity_I3_error = std::abs(cs.I3 - 16.0 * cs.g);
        if (cs.identity_I2_error > 1e-4 || cs.identity_I3_error > 1e-3 * 16.0 * cs.g)
            throw QuadratureFailure("coefficient identities violated beyond tolerance");
    }
    return cs;
}

}  // namespace bcs2gp
