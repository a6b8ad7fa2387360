#pragma once

#include <array>
#include <complex>
#include <vector>

#include "bcs2gp/errors.hpp"

namespace bcs2gp {

/// Complex periodic function on the unit cell [0,1)^d stored as Fourier
/// coefficients on the cube of lattice modes n in Z^d, |n_j| <= cutoff,
/// f(x) = sum_n c_n exp(2 pi i n.x).
class PeriodicField {
  public:
    using cd = std::complex<double>;

    PeriodicField() = default;
    PeriodicField(int dim, int cutoff, bool real_flag = false)
        : d_(dim), m_(cutoff), real_(real_flag) {
        if (dim < 1 || dim > 3) throw InvalidParameter("field dimension must be 1, 2 or 3");
        if (cutoff < 0) throw InvalidParameter("negative mode cutoff");
        std::size_t n = 1;
        for (int j = 0; j < dim; ++j) n *= side();
        c_.assign(n, cd{0.0, 0.0});
    }

    static PeriodicField constant(int dim, cd value, int cutoff = 0) {
        PeriodicField f(dim, cutoff, std::abs(value.imag()) == 0.0);
        f.at({0, 0, 0}) = value;
        return f;
    }

    int dim() const { return d_; }
    int cutoff() const { return m_; }
    int side() const { return 2 * m_ + 1; }
    bool real_flag() const { return real_; }
    void set_real_flag(bool v) { real_ = v; }
    std::size_t size() const { return c_.size(); }
    std::vector<cd>& data() { return c_; }
    const std::vector<cd>& data() const { return c_; }

    std::size_t index(const std::array<int, 3>& n) const {
        std::size_t idx = 0, stride = 1;
        for (int j = 0; j < d_; ++j) {
            if (n[j] < -m_ || n[j] > m_) throw InvalidParameter("mode outside cutoff");
            idx += static_cast<std::size_t>(n[j] + m_) * stride;
            stride *= side();
        }
        return idx;
    }
    cd& at(const std::array<int, 3>& n) { return c_[index(n)]; }
    const cd& at(const std::array<int, 3>& n) const { return c_[index(n)]; }

    /// mode vector for a flat index, entries in [-cutoff, cutoff]
    std::array<int, 3> mode(std::size_t idx) const {
        std::array<int, 3> n{0, 0, 0};
        for (int j = 0; j < d_; ++j) {
            n[j] = static_cast<int>(idx % side()) - m_;
            idx /= side();
        }
        return n;
    }

    double l2_norm() const {  // L^2 norm of the represented function
        double s = 0.0;
        for (const auto& v : c_) s += std::norm(v);
        return std::sqrt(s);
    }

    double conj_symmetry_defect() const {  // max |c_{-n} - conj(c_n)|
        double worst = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            auto n = mode(i);
            std::array<int, 3> neg{-n[0], -n[1], -n[2]};
            worst = std::max(worst, std::abs(c_[index(neg)] - std::conj(c_[i])));
        }
        return worst;
    }

    /// same coefficients embedded in a (possibly larger) cutoff
    PeriodicField embedded(int new_cutoff) const {
        if (new_cutoff < m_) throw InvalidParameter("embedding cannot shrink the cutoff");
        PeriodicField out(d_, new_cutoff, real_);
        for (std::size_t i = 0; i < c_.size(); ++i) out.at(mode(i)) = c_[i];
        return out;
    }

  private:
    int d_ = 1;
    int m_ = 0;
    bool real_ = false;
    std::vector<cd> c_{cd{0.0, 0.0}};
};

/// External one-body data of the GP functional: scalar potential W (with the
/// -delta_mu constant absorbed into its mean) and vector potential A.
struct ExternalFields {
    PeriodicField W;                // real scalar
    std::vector<PeriodicField> A;   // d real components; empty means A = 0

    int dim() const { return W.dim(); }
    void validate() const {
        if (W.conj_symmetry_defect() > 1e-12)
            throw InvalidParameter("W must be real (conjugate-symmetric coefficients)");
        if (!A.empty() && static_cast<int>(A.size()) != W.dim())
            throw CutoffMismatch("A must have one component per dimension");
        for (const auto& a : A) {
            if (a.dim() != W.dim()) throw CutoffMismatch("A component dimension mismatch");
            if (a.conj_symmetry_defect() > 1e-12)
                throw InvalidParameter("A must be real (conjugate-symmetric coefficients)");
        }
    }
    double mean_W() const { return W.at({0, 0, 0}).real(); }
};

}  // namespace bcs2gp
