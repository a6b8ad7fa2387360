#include "bcs2gp/gp.hpp"

#include <cmath>
#include <random>

namespace bcs2gp {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * M_PI;

// ---------------------------------------------------------------------------
// Separable spectral transforms between mode cubes and uniform L^d grids.
// Tensor layout: axis 0 has stride 1 (same as PeriodicField::index).
// ---------------------------------------------------------------------------

// out(o,k,i) = sum_m mat(k,m) in(o,m,i); mat is row-major n_out x n_in
std::vector<cd> apply_axis(const std::vector<cd>& in, int inner, int n_in, int outer,
                           const std::vector<cd>& mat, int n_out) {
    std::vector<cd> out(static_cast<std::size_t>(inner) * n_out * outer, cd{0.0, 0.0});
    for (int o = 0; o < outer; ++o)
        for (int k = 0; k < n_out; ++k) {
            cd* dst = &out[(static_cast<std::size_t>(o) * n_out + k) * inner];
            for (int m = 0; m < n_in; ++m) {
                const cd w = mat[static_cast<std::size_t>(k) * n_in + m];
                if (w == cd{0.0, 0.0}) continue;
                const cd* src = &in[(static_cast<std::size_t>(o) * n_in + m) * inner];
                for (int i = 0; i < inner; ++i) dst[i] += w * src[i];
            }
        }
    return out;
}

// f(x_k) on the uniform grid x_k = k/L per axis
std::vector<cd> to_grid(const PeriodicField& f, int L) {
    const int side = f.side(), M = f.cutoff(), d = f.dim();
    std::vector<cd> mat(static_cast<std::size_t>(L) * side);
    for (int k = 0; k < L; ++k)
        for (int m = 0; m < side; ++m)
            mat[static_cast<std::size_t>(k) * side + m] =
                std::polar(1.0, kTwoPi * (m - M) * k / double(L));
    std::vector<cd> cur = f.data();
    std::array<int, 3> dims{side, side, side};
    for (int axis = 0; axis < d; ++axis) {
        int inner = 1, outer = 1;
        for (int j = 0; j < axis; ++j) inner *= dims[j];
        for (int j = axis + 1; j < d; ++j) outer *= dims[j];
        cur = apply_axis(cur, inner, dims[axis], outer, mat, L);
        dims[axis] = L;
    }
    return cur;
}

// exact band-limited analysis back to a mode cube with the given cutoff
PeriodicField from_grid(const std::vector<cd>& grid, int d, int L, int cutoff,
                        bool real_flag = false) {
    PeriodicField out(d, cutoff, real_flag);
    const int side = out.side();
    std::vector<cd> mat(static_cast<std::size_t>(side) * L);
    for (int n = 0; n < side; ++n)
        for (int k = 0; k < L; ++k)
            mat[static_cast<std::size_t>(n) * L + k] =
                std::polar(1.0 / L, -kTwoPi * (n - cutoff) * k / double(L));
    std::vector<cd> cur = grid;
    std::array<int, 3> dims{L, L, L};
    for (int axis = 0; axis < d; ++axis) {
        int inner = 1, outer = 1;
        for (int j = 0; j < axis; ++j) inner *= dims[j];
        for (int j = axis + 1; j < d; ++j) outer *= dims[j];
        cur = apply_axis(cur, inner, dims[axis], outer, mat, side);
        dims[axis] = side;
    }
    out.data() = std::move(cur);
    return out;
}

// coefficients of -i d_j f: multiply by p_j = 2 pi n_j
PeriodicField spectral_momentum(const PeriodicField& f, int j) {
    PeriodicField out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] *= kTwoPi * f.mode(i)[static_cast<std::size_t>(j)];
    return out;
}

struct Workspace {
    int d = 1;
    int L = 1;
    std::size_t n_grid = 1;
    std::vector<cd> psi;
    std::vector<std::vector<cd>> dpsi;  // (-i d_j) psi on the grid
    std::vector<std::vector<cd>> A;     // A_j on the grid (empty if A = 0)
    std::vector<double> W;
};

int dealias_grid_size(const PeriodicField& psi, const ExternalFields& f) {
    int m = std::max(psi.cutoff(), f.W.cutoff());
    for (const auto& a : f.A) m = std::max(m, a.cutoff());
    return 4 * m + 1;
}

Workspace make_workspace(const PeriodicField& psi, const ExternalFields& f) {
    f.validate();
    if (psi.dim() != f.dim()) throw CutoffMismatch("psi/fields dimension mismatch");
    Workspace ws;
    ws.d = psi.dim();
    ws.L = dealias_grid_size(psi, f);
    ws.n_grid = 1;
    for (int j = 0; j < ws.d; ++j) ws.n_grid *= ws.L;
    ws.psi = to_grid(psi, ws.L);
    ws.dpsi.resize(ws.d);
    for (int j = 0; j < ws.d; ++j) ws.dpsi[j] = to_grid(spectral_momentum(psi, j), ws.L);
    if (!f.A.empty()) {
        ws.A.resize(ws.d);
        for (int j = 0; j < ws.d; ++j) ws.A[j] = to_grid(f.A[j], ws.L);
    }
    auto wg = to_grid(f.W, ws.L);
    ws.W.resize(ws.n_grid);
    for (std::size_t i = 0; i < ws.n_grid; ++i) ws.W[i] = wg[i].real();
    return ws;
}

}  // namespace

double gp_energy(const PeriodicField& psi, const ExternalFields& fields, double g) {
    if (g < 0.0) throw InvalidParameter("coupling g must be >= 0");
    Workspace ws = make_workspace(psi, fields);
    double acc = 0.0;
    for (std::size_t i = 0; i < ws.n_grid; ++i) {
        double kin = 0.0;
        for (int j = 0; j < ws.d; ++j) {
            cd phi = ws.dpsi[j][i];
            if (!ws.A.empty()) phi += 2.0 * ws.A[j][i] * ws.psi[i];
            kin += std::norm(phi);
        }
        const double dens = std::norm(ws.psi[i]);
        acc += 0.25 * kin + ws.W[i] * dens + g * dens * dens;
    }
    return acc / static_cast<double>(ws.n_grid);
}

PeriodicField gp_gradient(const PeriodicField& psi, const ExternalFields& fields, double g) {
    if (g < 0.0) throw InvalidParameter("coupling g must be >= 0");
    Workspace ws = make_workspace(psi, fields);
    int m_a = 0;
    for (const auto& a : fields.A) m_a = std::max(m_a, a.cutoff());
    const int m_phi = psi.cutoff() + m_a;

    // G = 1/2 sum_j D_j phi_j + 2 W psi + 4 g |psi|^2 psi,  phi_j = D_j psi
    std::vector<cd> grad(ws.n_grid, cd{0.0, 0.0});
    for (int j = 0; j < ws.d; ++j) {
        std::vector<cd> phi(ws.n_grid);
        for (std::size_t i = 0; i < ws.n_grid; ++i) {
            phi[i] = ws.dpsi[j][i];
            if (!ws.A.empty()) phi[i] += 2.0 * ws.A[j][i] * ws.psi[i];
        }
        PeriodicField phi_modes = from_grid(phi, ws.d, ws.L, m_phi);
        auto dphi = to_grid(spectral_momentum(phi_modes, j), ws.L);
        for (std::size_t i = 0; i < ws.n_grid; ++i) {
            cd v = dphi[i];
            if (!ws.A.empty()) v += 2.0 * ws.A[j][i] * phi[i];
            grad[i] += 0.5 * v;
        }
    }
    for (std::size_t i = 0; i < ws.n_grid; ++i)
        grad[i] += (2.0 * ws.W[i] + 4.0 * g * std::norm(ws.psi[i])) * ws.psi[i];
    return from_grid(grad, ws.d, ws.L, psi.cutoff());
}

TranslationInvariantGp translation_invariant_gp(double delta_mu, double g) {
    if (delta_mu < 0.0) throw InvalidParameter("delta_mu must be >= 0");
    if (!(g > 0.0)) throw InvalidParameter("coupling g must be > 0");
    TranslationInvariantGp out;
    out.density = delta_mu / (2.0 * g);
    out.energy = -delta_mu * delta_mu / (4.0 * g);
    return out;
}

namespace {

// Deterministic descent on the coefficient vector; Barzilai-Borwein step with
// Armijo backtracking.  Returns true on gradient-norm convergence.
bool descend(PeriodicField& psi, const ExternalFields& fields, double g,
             const MinimizeOptions& opts, double& energy, double& gnorm, int& iters) {
    auto dot_re = [](const std::vector<cd>& a, const std::vector<cd>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        return s;
    };
    // diagonal kinetic preconditioner: the spectral Hessian is dominated by
    // the 1/2 |p|^2 term, which makes plain descent stall at large cutoffs
    std::vector<double> precond(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const auto n = psi.mode(i);
        const double p2 = kTwoPi * kTwoPi *
                          double(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        precond[i] = 1.0 / (0.5 * p2 + 2.0);
    }
    PeriodicField grad = gp_gradient(psi, fields, g);
    energy = gp_energy(psi, fields, g);
    gnorm = grad.l2_norm();
    double step = 1.0;
    for (iters = 0; iters < opts.max_iter; ++iters) {
        if (gnorm <= opts.tol) return true;
        // descent direction d = -P grad; Armijo decrease on <grad, d>
        std::vector<cd> dir(psi.size());
        double slope = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            dir[i] = -precond[i] * grad.data()[i];
            slope += precond[i] * std::norm(grad.data()[i]);
        }
        double t = std::clamp(step, 1e-14, 1e6);
        PeriodicField trial = psi;
        double e_new = 0.0;
        bool ok = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < psi.size(); ++i)
                trial.data()[i] = psi.data()[i] + t * dir[i];
            e_new = gp_energy(trial, fields, g);
            if (e_new <= energy - 1e-4 * t * slope) {
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if (!ok) return gnorm <= opts.tol;
        PeriodicField grad_new = gp_gradient(trial, fields, g);
        // BB1 step from the secant pair in the preconditioned metric
        std::vector<cd> s(psi.size()), y(psi.size());
        for (std::size_t i = 0; i < psi.size(); ++i) {
            s[i] = trial.data()[i] - psi.data()[i];
            y[i] = precond[i] * (grad_new.data()[i] - grad.data()[i]);
        }
        const double sy = dot_re(s, y);
        const double ss = dot_re(s, s);
        step = (sy > 1e-300) ? std::clamp(ss / sy, 1e-6, 1e4) : t * 2.0;
        psi = std::move(trial);
        grad = std::move(grad_new);
        energy = e_new;
        gnorm = grad.l2_norm();
    }
    return gnorm <= opts.tol;
}

}  // namespace

MinimizeResult gp_minimize(const ExternalFields& fields, double g,
                           const MinimizeOptions& opts) {
    fields.validate();
    if (!(g > 0.0)) throw InvalidParameter("gp_minimize requires g > 0 (boundedness below)");
    int m_fields = fields.W.cutoff();
    for (const auto& a : fields.A) m_fields = std::max(m_fields, a.cutoff());
    const int m_psi = opts.cutoff > 0 ? opts.cutoff : std::max(4, 2 * m_fields);
    const int d = fields.dim();

    std::vector<PeriodicField> starts;
    // translation-invariant candidate |psi|^2 = max(0, -mean W)/(2g)
    {
        PeriodicField ti(d, m_psi);
        const double mw = fields.mean_W();
        ti.at({0, 0, 0}) = (mw < 0.0) ? std::sqrt(-mw / (2.0 * g)) : 0.0;
        starts.push_back(std::move(ti));
    }
    // seeded random start with decaying mode amplitudes
    {
        PeriodicField rnd(d, m_psi);
        std::mt19937 rng(opts.seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (std::size_t i = 0; i < rnd.size(); ++i) {
            const auto n = rnd.mode(i);
            const double n2 = double(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
            rnd.data()[i] = 0.3 / (1.0 + n2) * cd{uni(rng), uni(rng)};
        }
        starts.push_back(std::move(rnd));
    }

    MinimizeResult best;
    bool have = false;
    for (auto& s : starts) {
        double e, gn;
        int it;
        PeriodicField psi = s;
        if (descend(psi, fields, g, opts, e, gn, it)) {
            if (!have || e < best.energy) {
                best.psi = std::move(psi);
                best.energy = e;
                best.grad_norm = gn;
                best.iterations = it;
                have = true;
            }
        }
    }
    if (!have) throw NotConverged("gp_minimize: no start reached the gradient tolerance");
    return best;
}

GaugeResult gauge_transform(const PeriodicField& psi, const ExternalFields& fields,
                            const PeriodicField& chi) {
    fields.validate();
    if (chi.dim() != psi.dim()) throw CutoffMismatch("chi dimension mismatch");
    if (chi.conj_symmetry_defect() > 1e-12)
        throw InvalidParameter("chi must be real (conjugate-symmetric coefficients)");

    // enlarge the cutoff enough to absorb the (analytic) factor exp(-2 i chi)
    double l1 = 0.0;
    for (const auto& c : chi.data()) l1 += std::abs(c);
    const int growth =
        std::max(1, chi.cutoff()) * (8 + static_cast<int>(std::ceil(6.0 * l1)));
    const int m_out = psi.cutoff() + growth;
    const int L = 4 * m_out + 1;
    auto psi_g = to_grid(psi, L);
    auto chi_g = to_grid(chi, L);
    for (std::size_t i = 0; i < psi_g.size(); ++i)
        psi_g[i] *= std::polar(1.0, -2.0 * chi_g[i].real());

    GaugeResult out;
    out.psi = from_grid(psi_g, psi.dim(), L, m_out);
    out.fields.W = fields.W;
    const int d = psi.dim();
    int m_a = chi.cutoff();
    for (const auto& a : fields.A) m_a = std::max(m_a, a.cutoff());
    out.fields.A.clear();
    for (int j = 0; j < d; ++j) {
        PeriodicField aj = fields.A.empty() ? PeriodicField(d, m_a, true)
                                            : fields.A[j].embedded(m_a);
        // grad chi: coefficient 2 pi i n_j chi_n (stays real-symmetric)
        for (std::size_t i = 0; i < chi.data().size(); ++i) {
            const auto n = chi.mode(i);
            aj.at(n) += cd{0.0, kTwoPi * n[static_cast<std::size_t>(j)]} * chi.data()[i];
        }
        aj.set_real_flag(true);
        out.fields.A.push_back(std::move(aj));
    }
    return out;
}

}  // namespace bcs2gp
