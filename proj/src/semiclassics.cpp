#include "bcs2gp/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <unordered_map>

#include "bcs2gp/errors.hpp"
#include "bcs2gp/integrate.hpp"

namespace bcs2gp {

namespace {

using cd = std::complex<double>;

double kernel_eval(const RadialKernel& k, double q) {
    q = std::abs(q);
    if (k.q_cut > 0.0 && q > k.q_cut) return 0.0;
    return k.t(q);
}

bool field_is_constant(const PeriodicField& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto n = f.mode(i);
        if (n[0] == 0 && n[1] == 0 && n[2] == 0) continue;
        if (f.data()[i] != cd{0.0, 0.0}) return false;
    }
    return true;
}

bool vector_potential_is_constant(const std::vector<PeriodicField>& A) {
    for (const auto& a : A)
        if (!field_is_constant(a)) return false;
    return true;
}

cd coeff_or_zero(const PeriodicField& f, int k) {
    if (std::abs(k) > f.cutoff()) return cd{0.0, 0.0};
    return f.at({k, 0, 0});
}

/// Sum of |lambda| over negative lambda, ascending-magnitude order.
double negative_sum(const Eigen::VectorXd& eig) {
    std::vector<double> mags;
    mags.reserve(eig.size());
    for (Eigen::Index i = 0; i < eig.size(); ++i)
        if (eig[i] < 0.0) mags.push_back(-eig[i]);
    std::sort(mags.begin(), mags.end());
    double s = 0.0;
    for (double v : mags) s += v;
    return s;
}

/// Same ordering rule applied to the analytic eigenvalues of a diagonal
/// one-body fiber: the block spectrum is {k_i} u {-kminus_i}.
double negative_sum_diagonal(const std::vector<double>& k, const std::vector<double>& kminus) {
    std::vector<double> mags;
    mags.reserve(k.size() + kminus.size());
    for (double v : k)
        if (v < 0.0) mags.push_back(-v);
    for (double v : kminus)
        if (-v < 0.0) mags.push_back(v);
    std::sort(mags.begin(), mags.end());
    double s = 0.0;
    for (double v : mags) s += v;
    return s;
}

bool field_is_zero(const PeriodicField& f) {
    for (const auto& v : f.data())
        if (v != cd{0.0, 0.0}) return false;
    return true;
}

struct BuildContext {
    bool windowed = false;   // constant A, W and kernel cutoff available
    double A0 = 0.0;         // constant vector potential (windowed path)
    double W0 = 0.0;         // constant scalar potential (windowed path)
    int n_win = 0;           // window half width in mode index
};

BuildContext analyze(const PeriodicField& psi, const ExternalFields& fields,
                     const RadialKernel& ker, double h, int N, bool reduce_window) {
    BuildContext ctx;
    const bool const_fields =
        field_is_constant(fields.W) && vector_potential_is_constant(fields.A);
    if (reduce_window && const_fields && ker.q_cut > 0.0) {
        const int nt = static_cast<int>(std::ceil(ker.q_cut / (2.0 * M_PI * h))) + 1;
        const int nwin = nt + psi.cutoff() + 2;
        if (nwin < N) {
            ctx.windowed = true;
            ctx.n_win = nwin;
        }
    }
    if (const_fields) {
        ctx.W0 = fields.W.at({0, 0, 0}).real();
        ctx.A0 = fields.A.empty() ? 0.0 : fields.A[0].at({0, 0, 0}).real();
    }
    return ctx;
}

void validate_inputs(const PeriodicField& psi, const ExternalFields& fields,
                     const RadialKernel& ker, double mu, double h, int N) {
    if (ker.d != 1)
        throw InvalidParameter("lattice diagonalization supports d = 1 kernels only");
    if (psi.dim() != 1) throw CutoffMismatch("order parameter must be one-dimensional");
    if (fields.dim() != 1) throw CutoffMismatch("external fields must be one-dimensional");
    fields.validate();
    if (!(mu < 0.0)) throw InvalidParameter("lattice requires mu < 0");
    if (!(h > 0.0 && h < 1.0)) throw InvalidParameter("h must lie in (0, 1)");
    if (N < 1) throw InvalidParameter("basis cutoff N must be positive");
    if (2 * psi.cutoff() > N) throw CutoffMismatch("psi bandwidth exceeds N/2");
    if (2 * fields.W.cutoff() > N) throw CutoffMismatch("W bandwidth exceeds N/2");
    for (const auto& a : fields.A)
        if (2 * a.cutoff() > N) throw CutoffMismatch("A bandwidth exceeds N/2");
}

}  // namespace

RadialKernel kernel_from_bound_state(const BoundState& bs) {
    if (!bs.normalized)
        throw InvalidParameter("kernel_from_bound_state requires a normalized state");
    auto sp = std::make_shared<BoundState>(bs);
    RadialKernel k;
    k.d = bs.d;
    k.q_cut = bs.q_grid.empty() ? 0.0 : bs.q_grid.back();
    const double qc = k.q_cut;
    k.t = [sp, qc](double q) {
        q = std::abs(q);
        return (qc > 0.0 && q > qc) ? 0.0 : sp->t_at(q);
    };
    k.tp = [sp, qc](double q) {
        q = std::abs(q);
        return (qc > 0.0 && q > qc) ? 0.0 : sp->t_prime_at(q);
    };
    k.tpp = [sp, qc](double q) {
        q = std::abs(q);
        return (qc > 0.0 && q > qc) ? 0.0 : sp->t_second_at(q);
    };
    return k;
}

RadialKernel truncated_flat_kernel(double amplitude, double width, int d) {
    if (!(width > 0.0)) throw InvalidParameter("kernel width must be positive");
    RadialKernel k;
    k.d = d;
    // e^{-(q/width)^4} = 1e-30 at (q/width)^4 = 30 ln 10
    k.q_cut = width * std::pow(30.0 * std::log(10.0), 0.25);
    const double a = amplitude, w = width;
    k.t = [a, w](double q) {
        const double u = (q / w) * (q / w);
        return a * std::exp(-u * u);
    };
    k.tp = [a, w](double q) {
        const double w4 = w * w * w * w;
        const double u = (q / w) * (q / w);
        return a * std::exp(-u * u) * (-4.0 * q * q * q / w4);
    };
    k.tpp = [a, w](double q) {
        const double w4 = w * w * w * w;
        const double u = (q / w) * (q / w);
        return a * std::exp(-u * u) *
               (16.0 * std::pow(q, 6) / (w4 * w4) - 12.0 * q * q / w4);
    };
    return k;
}

BdgLattice build_bdg_operator(const PeriodicField& psi, const ExternalFields& fields,
                              const RadialKernel& ker, double mu, double h, int N,
                              double theta, bool reduce_window) {
    validate_inputs(psi, fields, ker, mu, h, N);
    const BuildContext ctx = analyze(psi, fields, ker, h, N, reduce_window);

    BdgLattice lat;
    lat.h = h;
    lat.mu = mu;
    lat.theta = theta;
    lat.N = N;

    const int lo = ctx.windowed ? -ctx.n_win : -N;
    const int hi = ctx.windowed ? ctx.n_win : N;
    const int m = hi - lo + 1;
    lat.modes.resize(m);
    lat.q.resize(m);
    std::vector<double> tv(m);
    for (int i = 0; i < m; ++i) {
        lat.modes[i] = lo + i;
        lat.q[i] = 2.0 * M_PI * lat.modes[i] + theta;
        tv[i] = kernel_eval(ker, h * lat.q[i]);
    }
    for (int n = -N; n <= N; ++n) {
        if (n >= lo && n <= hi) continue;
        const double q = 2.0 * M_PI * n + theta;
        lat.passthrough_k.push_back((h * q + h * ctx.A0) * (h * q + h * ctx.A0) - mu +
                                    h * h * ctx.W0);
        lat.passthrough_kminus.push_back((h * q - h * ctx.A0) * (h * q - h * ctx.A0) - mu +
                                         h * h * ctx.W0);
    }
    lat.passthrough_count = static_cast<int>(lat.passthrough_k.size());

    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) P(i, i) = h * lat.q[i];
    Eigen::MatrixXcd Aop = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXcd Wop = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const int diff = lat.modes[i] - lat.modes[j];
            if (!fields.A.empty()) Aop(i, j) = coeff_or_zero(fields.A[0], diff);
            Wop(i, j) = coeff_or_zero(fields.W, diff);
        }

    const Eigen::MatrixXcd Mplus = P + h * Aop;
    const Eigen::MatrixXcd Mminus = P - h * Aop;
    lat.K = Mplus * Mplus + h * h * Wop;
    lat.Kminus = Mminus * Mminus + h * h * Wop;
    for (int i = 0; i < m; ++i) {
        lat.K(i, i) -= mu;
        lat.Kminus(i, i) -= mu;
    }
    lat.Delta = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const cd ps = coeff_or_zero(psi, lat.modes[i] - lat.modes[j]);
            if (ps != cd{0.0, 0.0}) lat.Delta(i, j) = -0.5 * h * ps * (tv[i] + tv[j]);
        }

    lat.H = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    lat.H.topLeftCorner(m, m) = lat.K;
    lat.H.topRightCorner(m, m) = lat.Delta;
    lat.H.bottomLeftCorner(m, m) = lat.Delta.adjoint();
    lat.H.bottomRightCorner(m, m) = -lat.Kminus;

    lat.hermiticity_defect = (lat.H - lat.H.adjoint()).cwiseAbs().maxCoeff();
    const double scale = lat.H.cwiseAbs().maxCoeff();
    if (lat.hermiticity_defect > 1e-12 * std::max(scale, 1.0))
        throw NumericalError("assembled lattice operator lost Hermiticity");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lat.H);
    if (es.info() != Eigen::Success) throw NotConverged("lattice eigensolve failed");
    lat.eigenvalues = es.eigenvalues();
    lat.eigenvectors = es.eigenvectors();
    lat.smallest_abs_eigenvalue = lat.eigenvalues.cwiseAbs().minCoeff();
    for (double v : lat.passthrough_k)
        lat.smallest_abs_eigenvalue = std::min(lat.smallest_abs_eigenvalue, std::abs(v));
    for (double v : lat.passthrough_kminus)
        lat.smallest_abs_eigenvalue = std::min(lat.smallest_abs_eigenvalue, std::abs(v));
    if (lat.smallest_abs_eigenvalue < 1e-8)
        throw GapClosed("lattice spectrum reaches zero; h too large for this mu");
    return lat;
}

BdgLattice build_bdg_operator(const PeriodicField& psi, const ExternalFields& fields,
                              const BoundState& bs, double mu, double h, int N,
                              double theta, bool reduce_window) {
    return build_bdg_operator(psi, fields, kernel_from_bound_state(bs), mu, h, N, theta,
                              reduce_window);
}

Eigen::MatrixXcd negative_projector(const BdgLattice& lat) {
    const Eigen::Index n = lat.eigenvalues.size();
    Eigen::Index nneg = 0;
    while (nneg < n && lat.eigenvalues[nneg] < 0.0) ++nneg;
    const Eigen::MatrixXcd Vneg = lat.eigenvectors.leftCols(nneg);
    return Vneg * Vneg.adjoint();
}

Eigen::MatrixXcd alpha_delta_block(const BdgLattice& lat) {
    const int m = static_cast<int>(lat.modes.size());
    if (lat.Delta.cwiseAbs().maxCoeff() == 0.0) return Eigen::MatrixXcd::Zero(m, m);
    return negative_projector(lat).topRightCorner(m, m);
}

double particle_hole_defect(const BdgLattice& a, const BdgLattice& b) {
    if (a.eigenvalues.size() != b.eigenvalues.size())
        throw CutoffMismatch("particle-hole partners must share the basis size");
    const Eigen::Index n = a.eigenvalues.size();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(a.eigenvalues[i] + b.eigenvalues[n - 1 - i]));
    return worst;
}

double negative_part_trace_difference(const PeriodicField& psi, const ExternalFields& fields,
                                      const RadialKernel& ker, double mu, double h, int N,
                                      int theta_samples, bool reduce_window) {
    if (theta_samples < 1) throw InvalidParameter("need at least one Floquet sample");
    if (field_is_zero(psi)) return 0.0;  // H_Delta == H_0 identically
    const bool const_fields =
        field_is_constant(fields.W) && vector_potential_is_constant(fields.A);
    const PeriodicField zero_psi(1, 0);

    double acc = 0.0;
    for (int j = 0; j < theta_samples; ++j) {
        const double theta = 2.0 * M_PI * j / theta_samples;
        const BdgLattice lat =
            build_bdg_operator(psi, fields, ker, mu, h, N, theta, reduce_window);
        const double nd = negative_sum(lat.eigenvalues);
        double n0;
        if (const_fields) {
            // one-body fiber is diagonal on the same stored modes
            const int m = static_cast<int>(lat.modes.size());
            std::vector<double> k(m), kminus(m);
            for (int i = 0; i < m; ++i) {
                k[i] = lat.K(i, i).real();
                kminus[i] = lat.Kminus(i, i).real();
            }
            n0 = negative_sum_diagonal(k, kminus);
        } else {
            const BdgLattice lat0 =
                build_bdg_operator(zero_psi, fields, ker, mu, h, N, theta, false);
            n0 = negative_sum(lat0.eigenvalues);
        }
        acc += nd - n0;
    }
    return acc / theta_samples;
}

namespace {

// unit-cell integrals of the coefficient formulas, all spectral

double l2_norm_sq(const PeriodicField& f) {
    double s = 0.0;
    for (const auto& v : f.data()) s += std::norm(v);
    return s;
}

std::array<std::array<double, 3>, 3> gradient_gram(const PeriodicField& f) {
    std::array<std::array<double, 3>, 3> g{};
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto n = f.mode(i);
        const double w = std::norm(f.data()[i]);
        for (int a = 0; a < f.dim(); ++a)
            for (int b = 0; b < f.dim(); ++b)
                g[a][b] += (2.0 * M_PI * n[a]) * (2.0 * M_PI * n[b]) * w;
    }
    return g;
}

double w_expectation(const PeriodicField& f, const PeriodicField& W) {
    cd s{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto ni = f.mode(i);
        if (f.data()[i] == cd{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const auto nj = f.mode(j);
            std::array<int, 3> diff{ni[0] - nj[0], ni[1] - nj[1], ni[2] - nj[2]};
            bool in = true;
            for (int a = 0; a < f.dim(); ++a)
                if (std::abs(diff[a]) > W.cutoff()) in = false;
            if (!in) continue;
            s += std::conj(f.data()[i]) * W.at(diff) * f.data()[j];
        }
    }
    return s.real();
}

double magnetic_kinetic(const PeriodicField& f, const std::vector<PeriodicField>& A) {
    int ma = 0;
    for (const auto& a : A) ma = std::max(ma, a.cutoff());
    const int M = f.cutoff() + ma;
    double total = 0.0;
    for (int comp = 0; comp < f.dim(); ++comp) {
        PeriodicField phi(f.dim(), M);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const auto n = phi.mode(i);
            cd v{0.0, 0.0};
            bool in = true;
            for (int a = 0; a < f.dim(); ++a)
                if (std::abs(n[a]) > f.cutoff()) in = false;
            if (in) v += cd{0.0, 2.0 * M_PI * n[comp]} * f.at(n);
            if (!A.empty()) {
                for (std::size_t j = 0; j < f.size(); ++j) {
                    const auto nj = f.mode(j);
                    std::array<int, 3> diff{n[0] - nj[0], n[1] - nj[1], n[2] - nj[2]};
                    bool ok = true;
                    for (int a = 0; a < f.dim(); ++a)
                        if (std::abs(diff[a]) > A[comp].cutoff()) ok = false;
                    if (!ok) continue;
                    v += cd{0.0, 2.0} * A[comp].at(diff) * f.data()[j];
                }
            }
            total += std::norm(v);
        }
    }
    return total;
}

double quartic_norm(const PeriodicField& f) {
    // ||f||_4^4 = sum_k |rho_k|^2 with rho_k = sum_m f_{m+k} conj(f_m)
    const PeriodicField rho(f.dim(), 2 * f.cutoff());
    std::vector<cd> r(rho.size(), cd{0.0, 0.0});
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.data()[i] == cd{0.0, 0.0}) continue;
        const auto ni = f.mode(i);
        for (std::size_t j = 0; j < f.size(); ++j) {
            const auto nj = f.mode(j);
            const std::array<int, 3> diff{ni[0] - nj[0], ni[1] - nj[1], ni[2] - nj[2]};
            r[rho.index(diff)] += f.data()[i] * std::conj(f.data()[j]);
        }
    }
    double s = 0.0;
    for (const auto& v : r) s += std::norm(v);
    return s;
}

}  // namespace

SemiclassicalPrediction semiclassical_prediction(const PeriodicField& psi,
                                                 const ExternalFields& fields,
                                                 const CoefficientSet& coeffs) {
    if (psi.dim() != coeffs.d)
        throw CutoffMismatch("order parameter dimension does not match the coefficients");
    if (fields.dim() != psi.dim())
        throw CutoffMismatch("external field dimension does not match the order parameter");
    fields.validate();

    SemiclassicalPrediction out;
    const double l2 = l2_norm_sq(psi);
    out.E1 = -0.5 * l2 * coeffs.I1;

    const auto gram = gradient_gram(psi);
    double hessian_term = 0.0;
    for (int a = 0; a < psi.dim(); ++a)
        for (int b = 0; b < psi.dim(); ++b) hessian_term += gram[a][b] * coeffs.Ijk[a][b];

    const double magkin = magnetic_kinetic(psi, fields.A);
    const double wexp = w_expectation(psi, fields.W);
    const double quart = quartic_norm(psi);

    out.E2 = -0.125 * hessian_term + (0.125 * magkin + 0.5 * wexp) * coeffs.I2 +
             0.125 * quart * coeffs.I3;
    return out;
}

LatticeOperator alpha_delta_operator(const PeriodicField& psi, const ExternalFields& fields,
                                     const RadialKernel& ker, double mu, double h, int N,
                                     int theta_samples, bool reduce_window) {
    if (theta_samples < 1) throw InvalidParameter("need at least one Floquet sample");
    LatticeOperator op;
    op.h = h;
    for (int j = 0; j < theta_samples; ++j) {
        const double theta = 2.0 * M_PI * j / theta_samples;
        const BdgLattice lat =
            build_bdg_operator(psi, fields, ker, mu, h, N, theta, reduce_window);
        if (j == 0) op.modes = lat.modes;
        op.thetas.push_back(theta);
        op.fibers.push_back(alpha_delta_block(lat));
    }
    return op;
}

double operator_h1_norm(const LatticeOperator& O) {
    if (O.fibers.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t f = 0; f < O.fibers.size(); ++f) {
        const auto& M = O.fibers[f];
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            const double q = 2.0 * M_PI * O.modes[i] + O.thetas[f];
            const double w = 1.0 + O.h * O.h * q * q;
            for (Eigen::Index j = 0; j < M.cols(); ++j) acc += w * std::norm(M(i, j));
        }
    }
    return std::sqrt(acc / O.fibers.size());
}

double operator_l2_norm_sq(const LatticeOperator& O) {
    if (O.fibers.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& M : O.fibers) acc += M.squaredNorm();
    return acc / O.fibers.size();
}

double alpha_comparison_residual(const PeriodicField& psi, const ExternalFields& fields,
                                 const RadialKernel& ker, double mu, double h, int N,
                                 int theta_samples) {
    LatticeOperator op = alpha_delta_operator(psi, fields, ker, mu, h, N, theta_samples);
    const int m = static_cast<int>(op.modes.size());
    for (std::size_t f = 0; f < op.fibers.size(); ++f) {
        std::vector<double> phi(m);
        for (int i = 0; i < m; ++i) {
            const double q = h * (2.0 * M_PI * op.modes[i] + op.thetas[f]);
            phi[i] = 0.5 * kernel_eval(ker, q) / (q * q - mu);
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const cd ps = coeff_or_zero(psi, op.modes[i] - op.modes[j]);
                if (ps != cd{0.0, 0.0}) op.fibers[f](i, j) -= 0.5 * h * ps * (phi[i] + phi[j]);
            }
    }
    return operator_h1_norm(op);
}

double v_weighted_form(const LatticeOperator& O, const PotentialSpec& V) {
    if (O.fibers.empty()) return 0.0;
    const int nth = static_cast<int>(O.fibers.size());
    const int m = static_cast<int>(O.modes.size());
    const int A = nth * m;

    Eigen::VectorXd qv(A);
    for (int f = 0; f < nth; ++f)
        for (int i = 0; i < m; ++i)
            qv[f * m + i] = 2.0 * M_PI * O.modes[i] + O.thetas[f];

    // the momentum differences repeat across fiber pairs; cache the transform
    // (distinct values are separated by at least the theta-grid spacing, far
    // above the 1e-12 quantization of the key)
    std::unordered_map<long long, double> vhat;
    Eigen::MatrixXd G(A, A);
    for (int a = 0; a < A; ++a)
        for (int b = 0; b <= a; ++b) {
            const double arg = std::abs(O.h * (qv[a] - qv[b]));
            const long long key = std::llround(arg * 1e12);
            auto it = vhat.find(key);
            if (it == vhat.end()) it = vhat.emplace(key, V.fourier_radial(arg)).first;
            G(a, b) = it->second;
            G(b, a) = it->second;
        }

    const int nk = 2 * m - 1;  // mode differences k = row - col
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(A, nk);
    for (int f = 0; f < nth; ++f)
        for (int k = -(m - 1); k <= m - 1; ++k)
            for (int i = 0; i < m; ++i) {
                const int r = i + k;
                if (r < 0 || r >= m) continue;
                C(f * m + i, k + m - 1) = O.fibers[f](r, i);
            }

    const Eigen::MatrixXcd GC = G * C;
    const double quad = C.conjugate().cwiseProduct(GC).sum().real();
    return O.h * std::sqrt(2.0 * M_PI) * quad / (static_cast<double>(nth) * nth);
}

TrialStateEnergy trial_state_energy(const PeriodicField& psi, const ExternalFields& fields,
                                    const BoundState& bs, const PotentialSpec& V, double h,
                                    int N, int theta_samples) {
    if (bs.d != 1) throw InvalidParameter("trial state evaluation supports d = 1");
    const RadialKernel ker = kernel_from_bound_state(bs);
    const double mu = -bs.E_b;

    TrialStateEnergy out;
    out.trace_term =
        -0.5 * negative_part_trace_difference(psi, fields, ker, mu, h, N, theta_samples);

    // pair-kernel p-sum over the psi modes (measure dq/(2 pi)^d, d = 1)
    const double qcut = ker.q_cut > 0.0 ? ker.q_cut : bs.q_grid.back();
    double psum = 0.0;
    for (int k = -psi.cutoff(); k <= psi.cutoff(); ++k) {
        const double w = std::norm(psi.at({k, 0, 0}));
        if (w == 0.0) continue;
        const double p = 2.0 * M_PI * std::abs(k);
        const auto f = [&](double q) {
            const double t0 = kernel_eval(ker, q);
            if (t0 == 0.0) return 0.0;
            return t0 / (q * q + bs.E_b) *
                   (2.0 * t0 + kernel_eval(ker, q - h * p) + kernel_eval(ker, q + h * p)) /
                   M_PI;
        };
        psum += w * integrate_adaptive(f, 0.0, qcut, 1e-12, 1e-10).value;
    }
    out.projected_interaction = h / 16.0 * psum;  // h^{2-d} with d = 1

    // V-weighted residual of alpha_Delta against the symmetrized psi alpha0 ansatz
    LatticeOperator op =
        alpha_delta_operator(psi, fields, ker, mu, h, N, theta_samples);
    const int m = static_cast<int>(op.modes.size());
    for (std::size_t f = 0; f < op.fibers.size(); ++f) {
        std::vector<double> phi(m);
        for (int i = 0; i < m; ++i) {
            const double q = h * (2.0 * M_PI * op.modes[i] + op.thetas[f]);
            phi[i] = 0.5 * kernel_eval(ker, q) / (q * q + bs.E_b);  // = alpha0_hat
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const cd ps = coeff_or_zero(psi, op.modes[i] - op.modes[j]);
                if (ps != cd{0.0, 0.0}) op.fibers[f](i, j) -= 0.5 * h * ps * (phi[i] + phi[j]);
            }
    }
    out.residual_term = v_weighted_form(op, V);

    out.total = out.trace_term + out.projected_interaction + out.residual_term;
    return out;
}

SemiclassicalReport semiclassical_report(const PeriodicField& psi, const ExternalFields& fields,
                                         const RadialKernel& ker, double mu, double h, int N,
                                         int theta_samples) {
    SemiclassicalReport rep;
    rep.h = h;
    rep.trace_diff =
        negative_part_trace_difference(psi, fields, ker, mu, h, N, theta_samples);
    const CoefficientSet coeffs = coefficient_integrals(ker, mu);
    const SemiclassicalPrediction pred = semiclassical_prediction(psi, fields, coeffs);
    rep.E1 = pred.E1;
    rep.E2 = pred.E2;
    const int d = ker.d;
    rep.prediction = -std::pow(h, 2 - d) * pred.E1 - std::pow(h, 4 - d) * pred.E2;
    rep.residual = std::abs(rep.trace_diff - rep.prediction);
    rep.alpha_block_H1_residual =
        alpha_comparison_residual(psi, fields, ker, mu, h, N, theta_samples);
    return rep;
}

}  // namespace bcs2gp
