#include "bcs2gp/gap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "bcs2gp/coupling.hpp"
#include "bcs2gp/errors.hpp"

namespace bcs2gp {

namespace {

// Composite Simpson weights (plain, without dx) for an odd-sized grid.
std::vector<double> simpson_weights(int n) {
    std::vector<double> w(n, 0.0);
    w[0] = w[n - 1] = 1.0 / 3.0;
    for (int i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) / 3.0;
    return w;
}

int force_odd(int n) { return n % 2 == 0 ? n + 1 : n; }

double sup_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

GapProblem::GapProblem(const PotentialSpec& V, const BoundState& bs, const GapOptions& opts) {
    if (V.kind() == PotentialSpec::Kind::PointInteractionReference)
        throw InvalidParameter("pairing operator needs a real-space potential profile");
    if (V.dim() != bs.d) throw InvalidParameter("potential/bound-state dimension mismatch");
    d_ = bs.d;
    E_b_ = bs.E_b;

    const int n = force_odd(std::max(3, opts.p_points));
    const double p_max = opts.p_max > 0.0 ? opts.p_max : bs.q_grid.back();
    if (!(p_max > 0.0)) throw InvalidGrid("momentum cutoff must be positive");
    const double dp = p_max / (n - 1);
    const auto wsimp = simpson_weights(n);
    p_.resize(n);
    wp_.resize(n);
    alpha0_.resize(n);
    t_.resize(n);
    for (int i = 0; i < n; ++i) {
        p_[i] = i * dp;
        const double meas = d_ == 3 ? p_[i] * p_[i] / (2.0 * M_PI * M_PI) : 1.0 / M_PI;
        wp_[i] = wsimp[i] * dp * meas;
        alpha0_[i] = bs.alpha0_hat_at(p_[i]);
        t_[i] = bs.t_at(p_[i]);
    }
    sup_t_ = sup_abs(t_);

    // Pairing matrix B = (unitary FT) V (unitary inverse FT) on radial grids.
    // The r-side quadrature makes B simultaneously the exact gradient operator
    // of the discrete pairing energy (2pi)^{-d} \int V |inverse(alpha)|^2 dx.
    const int nr = force_odd(std::max(9, opts.r_points));
    const double R = V.support_radius();
    if (!(R > 0.0)) throw InvalidGrid("potential support radius must be positive");
    const double drr = R / (nr - 1);
    const auto wr = simpson_weights(nr);
    const double pref = std::sqrt(2.0 / M_PI);

    // inverse transform rows: g_j = sum_k invS[j*n + k] alpha_k
    std::vector<double> invS(static_cast<std::size_t>(nr) * n);
    for (int j = 0; j < nr; ++j) {
        const double r = j * drr;
        for (int k = 0; k < n; ++k) {
            double ker;
            if (d_ == 3)
                ker = r > 0.0 ? p_[k] * std::sin(p_[k] * r) / r : p_[k] * p_[k];
            else
                ker = std::cos(p_[k] * r);
            invS[static_cast<std::size_t>(j) * n + k] = pref * wsimp[k] * dp * ker;
        }
    }
    B_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < nr; ++j) {
        const double r = j * drr;
        const double vw = pref * wr[j] * drr * V.cell_average(r, drr);
        if (vw == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            double ker;
            if (d_ == 3)
                ker = p_[i] > 0.0 ? r * std::sin(p_[i] * r) / p_[i] : r * r;
            else
                ker = std::cos(p_[i] * r);
            const double row = vw * ker;
            const double* src = &invS[static_cast<std::size_t>(j) * n];
            double* dst = &B_[static_cast<std::size_t>(i) * n];
            for (int k = 0; k < n; ++k) dst[k] += row * src[k];
        }
    }
}

std::vector<double> GapProblem::apply_pairing(const std::vector<double>& alpha_hat) const {
    const int n = static_cast<int>(p_.size());
    if (static_cast<int>(alpha_hat.size()) != n)
        throw InvalidGrid("pairing operand does not match the momentum grid");
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = &B_[static_cast<std::size_t>(i) * n];
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += row[k] * alpha_hat[k];
        out[i] = s;
    }
    return out;
}

double GapProblem::reduced_energy(const std::vector<double>& gamma_hat,
                                  const std::vector<double>& alpha_hat, double mu) const {
    const int n = static_cast<int>(p_.size());
    if (static_cast<int>(gamma_hat.size()) != n || static_cast<int>(alpha_hat.size()) != n)
        throw InvalidGrid("state arrays do not match the momentum grid");
    const double slack = 1e-10;
    for (int i = 0; i < n; ++i) {
        const double g = gamma_hat[i], a = alpha_hat[i];
        if (g < -slack || g > 1.0 + slack)
            throw AdmissibilityViolation("occupation outside [0,1]");
        if (a * a > g * (1.0 - g) + slack)
            throw AdmissibilityViolation("pairing exceeds gamma (1 - gamma)");
    }
    double kin = 0.0;
    for (int i = 0; i < n; ++i) kin += wp_[i] * (p_[i] * p_[i] - mu) * gamma_hat[i];
    const auto Ba = apply_pairing(alpha_hat);
    double pair = 0.0;
    for (int i = 0; i < n; ++i) pair += wp_[i] * alpha_hat[i] * Ba[i];
    return kin + pair;
}

double GapProblem::linearization_defect() const {
    const auto Ba = apply_pairing(alpha0_);
    double worst = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        const double res = (p_[i] * p_[i] + E_b_) * alpha0_[i] + Ba[i];
        worst = std::max(worst, std::abs(res));
    }
    return worst / sup_t_;
}

double GapProblem::normal_state_energy(double mu) const {
    double e = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i)
        e += wp_[i] * std::min(p_[i] * p_[i] - mu, 0.0);
    return e;
}

std::vector<double> GapProblem::bcs_gamma(const std::vector<double>& Delta, double mu) const {
    std::vector<double> g(Delta.size());
    for (std::size_t i = 0; i < Delta.size(); ++i) {
        const double xi = p_[i] * p_[i] - mu;
        const double E = std::max(std::hypot(xi, Delta[i]), 1e-300);
        g[i] = 0.5 * (1.0 - xi / E);
    }
    return g;
}

std::vector<double> GapProblem::bcs_alpha(const std::vector<double>& Delta, double mu) const {
    std::vector<double> a(Delta.size());
    for (std::size_t i = 0; i < Delta.size(); ++i) {
        const double xi = p_[i] * p_[i] - mu;
        const double E = std::max(std::hypot(xi, Delta[i]), 1e-300);
        a[i] = 0.5 * Delta[i] / E;
    }
    return a;
}

GapState GapProblem::solve(double mu, const GapOptions& opts) const {
    const int n = static_cast<int>(p_.size());
    GapState out;
    out.d = d_;
    out.mu = mu;
    out.E_b = E_b_;
    out.p = p_;

    const double eps = mu + E_b_;
    const double eps0 =
        opts.init_eps != 0.0 ? opts.init_eps : std::max(eps, 0.01 * E_b_) / E_b_;
    std::vector<double> Delta(n);
    for (int i = 0; i < n; ++i) Delta[i] = eps0 * t_[i];

    double m = opts.mixing;
    int shrink_streak = 0;
    double prev_step = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iter = 0;
    const int max_iter = eps <= 0.0 ? std::min(opts.max_iter, 500) : opts.max_iter;
    for (; iter < max_iter; ++iter) {
        const auto alpha = bcs_alpha(Delta, mu);
        auto G = apply_pairing(alpha);
        double step_sup = 0.0, delta_sup = 0.0;
        for (int i = 0; i < n; ++i) {
            const double step = -2.0 * G[i] - Delta[i];
            G[i] = step;
            step_sup = std::max(step_sup, std::abs(step));
            delta_sup = std::max(delta_sup, std::abs(Delta[i]));
        }
        if (m * step_sup <= opts.tol_factor * (E_b_ + delta_sup)) {
            converged = true;
            break;
        }
        // adaptive damping: speed up steady contraction, damp oscillation
        if (step_sup < prev_step) {
            if (++shrink_streak >= 30) {
                m = std::min(0.95, 1.2 * m);
                shrink_streak = 0;
            }
        } else {
            m = std::max(0.05, 0.5 * m);
            shrink_streak = 0;
        }
        prev_step = step_sup;
        for (int i = 0; i < n; ++i) Delta[i] += m * G[i];
        if (sup_abs(Delta) < 1e-9 * E_b_) {
            converged = true;
            break;
        }
    }
    out.iterations = iter;

    if (eps <= 0.0 || sup_abs(Delta) < 1e-9 * E_b_) {
        // vacuum is the exact minimizer for mu <= -E_b; report the collapse
        out.collapsed_to_normal = true;
        out.Delta.assign(n, 0.0);
        out.gamma_hat.assign(n, 0.0);
        out.alpha_hat.assign(n, 0.0);
        out.energy_density = 0.0;
        out.rho = 0.0;
        return out;
    }
    if (!converged) throw NotConverged("gap fixed point did not converge");

    out.Delta = Delta;
    out.gamma_hat = bcs_gamma(Delta, mu);
    out.alpha_hat = bcs_alpha(Delta, mu);
    out.energy_density = reduced_energy(out.gamma_hat, out.alpha_hat, mu);
    out.rho = 0.0;
    for (int i = 0; i < n; ++i) out.rho += 2.0 * wp_[i] * out.gamma_hat[i];

    const double normal = normal_state_energy(mu);
    if (out.energy_density > normal + 1e-10 * (E_b_ * E_b_ + std::abs(normal)))
        throw NotConverged("pairing state above the normal state energy");

    // certify stationarity along random admissible directions in the
    // angle parametrization gamma = sin^2 phi, alpha = 1/2 sin 2 phi
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i)
        phi[i] = 0.5 * std::atan2(2.0 * out.alpha_hat[i], 1.0 - 2.0 * out.gamma_hat[i]);
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double s = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> dir(n);
        for (int i = 0; i < n; ++i) dir[i] = uni(rng);
        const double dn = sup_abs(dir);
        for (int i = 0; i < n; ++i) dir[i] /= dn;
        std::vector<double> gp(n), ap(n), gm(n), am(n);
        for (int i = 0; i < n; ++i) {
            const double fp = phi[i] + s * dir[i], fm = phi[i] - s * dir[i];
            gp[i] = std::sin(fp) * std::sin(fp);
            ap[i] = 0.5 * std::sin(2.0 * fp);
            gm[i] = std::sin(fm) * std::sin(fm);
            am[i] = 0.5 * std::sin(2.0 * fm);
        }
        const double d1 =
            (reduced_energy(gp, ap, mu) - reduced_energy(gm, am, mu)) / (2.0 * s);
        worst = std::max(worst, std::abs(d1));
    }
    out.stationarity_defect = worst;
    return out;
}

double GapProblem::direct_minimum(double mu, unsigned seed) const {
    const int n = static_cast<int>(p_.size());
    const double eps = mu + E_b_;

    auto energy = [&](const std::vector<double>& phi) {
        std::vector<double> g(n), a(n);
        for (int i = 0; i < n; ++i) {
            g[i] = std::sin(phi[i]) * std::sin(phi[i]);
            a[i] = 0.5 * std::sin(2.0 * phi[i]);
        }
        return reduced_energy(g, a, mu);
    };
    // weighted gradient plus a diagonally preconditioned descent direction:
    // the stationarity residual divided by the local curvature scale ~ 2|xi|,
    // which keeps the search well conditioned across the momentum range
    auto gradient = [&](const std::vector<double>& phi, std::vector<double>& grad,
                        std::vector<double>& dir) {
        std::vector<double> a(n);
        for (int i = 0; i < n; ++i) a[i] = 0.5 * std::sin(2.0 * phi[i]);
        const auto Ba = apply_pairing(a);
        for (int i = 0; i < n; ++i) {
            const double xi = p_[i] * p_[i] - mu;
            const double raw =
                xi * std::sin(2.0 * phi[i]) + 2.0 * Ba[i] * std::cos(2.0 * phi[i]);
            grad[i] = wp_[i] * raw;
            dir[i] = raw / (E_b_ + 2.0 * std::abs(xi));
        }
    };

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int start = 0; start < 4; ++start) {
        std::vector<double> phi(n);
        if (start == 0) {
            const double e0 = std::max(eps, 0.01 * E_b_) / E_b_;
            for (int i = 0; i < n; ++i)
                phi[i] = 0.5 * std::atan2(e0 * t_[i], p_[i] * p_[i] - mu);
        } else {
            const double amp = start == 1 ? 0.01 : (start == 2 ? 0.1 : 0.3);
            for (int i = 0; i < n; ++i) phi[i] = amp * uni(rng);
        }
        std::vector<double> grad(n), dir(n), dir_old(n), phi_old(n);
        gradient(phi, grad, dir);
        double f = energy(phi);
        double step = 1.0 / (E_b_ + 1.0);
        const double gtol = 1e-15 * (E_b_ * (1.0 + sup_t_) + 1.0);
        // nonmonotone Armijo reference: max of the recent energies (plain
        // monotone backtracking defeats the Barzilai-Borwein steps on this
        // badly conditioned landscape)
        std::array<double, 10> recent;
        recent.fill(f);
        std::size_t recent_pos = 0;
        for (int it = 0; it < 100000; ++it) {
            double gsup = sup_abs(grad);
            if (gsup <= gtol) break;
            phi_old = phi;
            dir_old = dir;
            double slope = 0.0;
            for (int i = 0; i < n; ++i) slope += grad[i] * dir[i];
            const double f_ref = *std::max_element(recent.begin(), recent.end());
            double st = step;
            bool accepted = false;
            for (int bt = 0; bt < 60; ++bt) {
                for (int i = 0; i < n; ++i) phi[i] = phi_old[i] - st * dir_old[i];
                const double ft = energy(phi);
                if (ft <= f_ref - 1e-4 * st * slope) {
                    f = ft;
                    accepted = true;
                    break;
                }
                st *= 0.5;
            }
            if (!accepted) {
                phi = phi_old;  // keep phi and f consistent
                break;
            }
            recent[recent_pos] = f;
            recent_pos = (recent_pos + 1) % recent.size();
            gradient(phi, grad, dir);
            // Barzilai-Borwein step for the next iteration
            double ss = 0.0, sy = 0.0;
            for (int i = 0; i < n; ++i) {
                const double sd = phi[i] - phi_old[i];
                const double yd = dir[i] - dir_old[i];
                ss += sd * sd;
                sy += sd * yd;
            }
            step = sy > 0.0 ? std::clamp(ss / sy, 1e-8, 1e8) : st;
        }
        best = std::min(best, f);
    }
    if (!std::isfinite(best)) throw NotConverged("direct gap minimization failed");
    return best;
}

GapState solve_gap_equation(const PotentialSpec& V, double mu, const GapOptions& opts) {
    const BoundState bs = solve_ground_state(V);
    return GapProblem(V, bs, opts).solve(mu, opts);
}

double brute_force_oracle(const PotentialSpec& V, double mu, int coarse_points) {
    if (coarse_points < 3 || coarse_points > 60)
        throw InvalidParameter("oracle grid must have between 3 and 60 points");
    const BoundState bs = solve_ground_state(V);
    GapOptions o;
    o.p_points = coarse_points;
    return GapProblem(V, bs, o).direct_minimum(mu);
}

GapObservables observables(const GapState& gs, double g, double E_b) {
    if (gs.collapsed_to_normal || !(gs.rho > 0.0))
        throw ZeroDensity("no particles in the pairing state");
    GapObservables out;
    out.rho = gs.rho;
    out.energy_per_particle = gs.energy_density / gs.rho + 0.5 * gs.mu;
    out.predicted_epp = -0.5 * E_b + 0.25 * g * gs.rho;
    return out;
}

LowDensityScan low_density_scan(const PotentialSpec& V, const std::vector<double>& eps_list,
                                const GapOptions& opts) {
    if (eps_list.size() < 2)
        throw InvalidParameter("low-density fit needs at least two eps values");
    const BoundState bs = solve_ground_state(V);
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0) || eps_list[i] > 0.05 * bs.E_b + 1e-12)
            throw InvalidParameter("eps values must be in (0, 0.05 E_b]");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw InvalidParameter("eps values must be strictly decreasing");
    }
    const GapProblem prob(V, bs, opts);
    LowDensityScan out;
    double num = 0.0, den = 0.0;
    for (double eps : eps_list) {
        const GapState gs = prob.solve(-bs.E_b + eps, opts);
        out.rows.push_back({eps, gs.energy_density, gs.rho});
        num -= gs.energy_density * eps * eps;
        den += eps * eps * eps * eps;
    }
    out.c = num / den;
    out.g = compute_g(bs);
    out.four_g_c_dev = std::abs(4.0 * out.g * out.c - 1.0);
    return out;
}

}  // namespace bcs2gp
