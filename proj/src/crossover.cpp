#include "bcs2gp/crossover.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "bcs2gp/coupling.hpp"
#include "bcs2gp/errors.hpp"

namespace bcs2gp {

namespace {

using cd = std::complex<double>;

std::vector<double> alpha0_on_modes(const LatticeOperator& op, const BoundState& bs,
                                    double theta) {
    std::vector<double> a(op.modes.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double q = op.h * (2.0 * M_PI * op.modes[i] + theta);
        a[i] = bs.alpha0_hat_at(q);
    }
    return a;
}

void check_window(const LatticeOperator& op, const BoundState& bs) {
    if (bs.d != 1) throw InvalidParameter("lattice kernels are one-dimensional");
    if (op.fibers.empty() || op.modes.empty())
        throw InvalidParameter("empty lattice kernel");
    // \int |alpha0_hat|^2 dq / (2 pi) = 1; the mode window must carry it
    double mass = 0.0;
    for (std::size_t f = 0; f < op.fibers.size(); ++f) {
        const auto a = alpha0_on_modes(op, bs, op.thetas[f]);
        for (double v : a) mass += v * v;
    }
    mass *= op.h / static_cast<double>(op.fibers.size());
    if (std::abs(mass - 1.0) > 1e-8)
        throw WindowTooSmall("mode window misses pair-state mass: " + std::to_string(mass));
}

}  // namespace

PeriodicField extract_order_parameter(const LatticeOperator& alpha, const BoundState& bs,
                                      int cutoff) {
    check_window(alpha, bs);
    const int m = static_cast<int>(alpha.modes.size());
    const int nth = static_cast<int>(alpha.fibers.size());
    std::vector<cd> psi_hat(2 * m - 1, cd{0.0, 0.0});
    for (int f = 0; f < nth; ++f) {
        const auto a0 = alpha0_on_modes(alpha, bs, alpha.thetas[f]);
        const auto& M = alpha.fibers[f];
        for (int k = -(m - 1); k <= m - 1; ++k) {
            cd s{0.0, 0.0};
            for (int i = 0; i < m; ++i) {
                const int r = i + k;
                if (r < 0 || r >= m) continue;
                s += M(r, i) * a0[r];
            }
            psi_hat[k + m - 1] += s;
        }
    }
    for (auto& v : psi_hat) v /= static_cast<double>(nth);

    int M = 0;
    if (cutoff >= 0) {
        M = std::min(cutoff, m - 1);
    } else {
        double peak = 0.0;
        for (const auto& v : psi_hat) peak = std::max(peak, std::abs(v));
        for (int k = 0; k <= m - 1; ++k)
            if (std::abs(psi_hat[k + m - 1]) > 1e-10 * peak ||
                std::abs(psi_hat[-k + m - 1]) > 1e-10 * peak)
                M = k;
    }
    PeriodicField psi(1, M);
    for (int k = -M; k <= M; ++k) psi.at({k, 0, 0}) = psi_hat[k + m - 1];
    return psi;
}

AlphaDecomposition decompose_alpha(const LatticeOperator& alpha, const PeriodicField& psi,
                                   const BoundState& bs) {
    check_window(alpha, bs);
    if (psi.dim() != 1) throw CutoffMismatch("order parameter must be one-dimensional");
    const int m = static_cast<int>(alpha.modes.size());
    LatticeOperator sigma = alpha;
    LatticeOperator lead = alpha;
    for (std::size_t f = 0; f < alpha.fibers.size(); ++f) {
        const auto a0 = alpha0_on_modes(alpha, bs, alpha.thetas[f]);
        Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const int diff = alpha.modes[i] - alpha.modes[j];
                if (std::abs(diff) > psi.cutoff()) continue;
                const cd ps = psi.at({diff, 0, 0});
                if (ps != cd{0.0, 0.0}) L(i, j) = 0.5 * alpha.h * ps * (a0[i] + a0[j]);
            }
        lead.fibers[f] = L;
        sigma.fibers[f] = alpha.fibers[f] - L;
    }
    AlphaDecomposition out;
    out.sigma_norm_sq = operator_l2_norm_sq(sigma);
    out.leading_norm_sq = operator_l2_norm_sq(lead);
    return out;
}

CrossoverReport crossover_scan(const PotentialSpec& V, double delta_mu,
                               const std::vector<double>& h_list, const GapOptions& opts) {
    if (delta_mu < 0.0) throw InvalidParameter("delta_mu must be nonnegative");
    if (h_list.size() < 2) throw InvalidParameter("crossover scan needs at least two h values");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1]))
            throw InvalidParameter("h values must be strictly decreasing");
    if (!(h_list.front() < 1.0) || !(h_list.back() > 0.0))
        throw InvalidParameter("h values must lie in (0, 1)");

    const BoundState bs = solve_ground_state(V);
    const double g = compute_g(bs);
    const int d = bs.d;
    const GapProblem prob(V, bs, opts);
    const double e_gp = -delta_mu * delta_mu / (4.0 * g);

    CrossoverReport rep;
    for (double h : h_list) {
        CrossoverRow row;
        row.h = h;
        row.eps = h * h * delta_mu;
        row.e_gp = e_gp;
        if (delta_mu == 0.0) {
            row.e_bcs_scaled = 0.0;
            row.error = 0.0;
        } else {
            const GapState gs = prob.solve(-bs.E_b + row.eps, opts);
            // E_bcs = h^{-d} F_ti; semiclassical normalization divides h^{4-d}
            row.e_bcs_scaled = gs.energy_density / (h * h * h * h);
            row.error = row.e_bcs_scaled - row.e_gp;
            row.gap_iterations = gs.iterations;
            row.gap_stationarity = gs.stationarity_defect;
        }
        rep.rows.push_back(row);

        DensityRow dr;
        dr.h = h;
        dr.N = delta_mu / (g * h);  // (2/h) |psi_gp|^2 with |psi_gp|^2 = dmu/(2g)
        dr.rho = std::pow(h, d) * dr.N;
        rep.density.push_back(dr);
    }

    bool all_zero = true;
    for (const auto& r : rep.rows)
        if (r.error != 0.0) all_zero = false;
    if (all_zero) {
        rep.decay_exponent = 0.0;
    } else {
        for (std::size_t i = 1; i < rep.rows.size(); ++i)
            if (!(std::abs(rep.rows[i].error) < std::abs(rep.rows[i - 1].error)))
                throw NotConverged("crossover error |e(h)| failed to shrink with h");
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(rep.rows.size());
        for (const auto& r : rep.rows) {
            const double x = std::log(r.h), y = std::log(std::abs(r.error));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.decay_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (!(rep.decay_exponent > 0.0))
            throw NotConverged("crossover error decay exponent is not positive");
    }

    std::ostringstream prov;
    prov << V.describe() << "; delta_mu=" << delta_mu << "; g=" << g << "; E_b=" << bs.E_b
         << "; p_points=" << opts.p_points << "; r_points=" << opts.r_points
         << "; seed=" << opts.seed;
    rep.provenance = prov.str();
    return rep;
}

DensityReport density_report(const PeriodicField& psi_gp, double h) {
    if (!(h > 0.0)) throw InvalidParameter("h must be positive");
    DensityReport out;
    double l2 = 0.0;
    for (const auto& v : psi_gp.data()) l2 += std::norm(v);
    out.N = 2.0 / h * l2;
    out.rho = std::pow(h, psi_gp.dim()) * out.N;
    return out;
}

}  // namespace bcs2gp
