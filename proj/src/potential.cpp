#include "bcs2gp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bcs2gp/errors.hpp"
#include "bcs2gp/integrate.hpp"

namespace bcs2gp {

PotentialSpec PotentialSpec::gaussian_well(double depth, double range, int dim) {
    PotentialSpec p;
    p.kind_ = Kind::GaussianWell;
    p.depth_ = depth;
    p.range_ = range;
    p.d_ = dim;
    p.validate();
    return p;
}

PotentialSpec PotentialSpec::square_well(double depth, double range, int dim) {
    PotentialSpec p;
    p.kind_ = Kind::SquareWell;
    p.depth_ = depth;
    p.range_ = range;
    p.d_ = dim;
    p.validate();
    return p;
}

PotentialSpec PotentialSpec::tabulated_radial(std::vector<double> r, std::vector<double> v,
                                              int dim) {
    PotentialSpec p;
    p.kind_ = Kind::TabulatedRadial;
    p.table_r_ = std::move(r);
    p.table_v_ = std::move(v);
    p.d_ = dim;
    p.validate();
    return p;
}

PotentialSpec PotentialSpec::point_interaction_reference(double scattering_length) {
    if (!(scattering_length > 0.0))
        throw InvalidParameter("point interaction requires a_s > 0");
    PotentialSpec p;
    p.kind_ = Kind::PointInteractionReference;
    p.a_s_ = scattering_length;
    p.d_ = 3;
    return p;
}

void PotentialSpec::validate() const {
    if (d_ != 1 && d_ != 2 && d_ != 3) throw InvalidParameter("dimension must be 1, 2 or 3");
    if (kind_ == Kind::TabulatedRadial) {
        if (table_r_.size() != table_v_.size() || table_r_.size() < 2)
            throw InvalidParameter("tabulated potential needs matching r/V columns");
        if (!std::is_sorted(table_r_.begin(), table_r_.end()))
            throw InvalidParameter("tabulated radii must be increasing");
        // d=3 decay condition: the tail of the table has to be negligible so the
        // discretized L^{3/2} norm is effectively finite.
        double scale = 0.0;
        for (double v : table_v_) scale = std::max(scale, std::abs(v));
        if (d_ == 3 && scale > 0.0 && std::abs(table_v_.back()) > 1e-6 * scale)
            throw InvalidParameter("tabulated potential does not decay within the table");
    } else {
        if (!(depth_ >= 0.0)) throw InvalidParameter("well depth must be >= 0");
        if (!(range_ > 0.0)) throw InvalidParameter("well range must be > 0");
    }
}

double PotentialSpec::value(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case Kind::GaussianWell: {
            const double x = r / range_;
            return -depth_ * std::exp(-x * x);
        }
        case Kind::SquareWell:
            return r < range_ ? -depth_ : 0.0;
        case Kind::TabulatedRadial: {
            if (r <= table_r_.front()) return table_v_.front();
            if (r >= table_r_.back()) return 0.0;
            auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
            const std::size_t i = static_cast<std::size_t>(it - table_r_.begin());
            const double w = (r - table_r_[i - 1]) / (table_r_[i] - table_r_[i - 1]);
            return (1.0 - w) * table_v_[i - 1] + w * table_v_[i];
        }
        case Kind::PointInteractionReference:
            throw InvalidParameter("point-interaction reference has no pointwise V");
    }
    return 0.0;
}

double PotentialSpec::cell_average(double r, double dr) const {
    if (kind_ != Kind::SquareWell || dr <= 0.0) return value(r);
    const double lo = r - 0.5 * dr, hi = r + 0.5 * dr;
    const double len = std::max(0.0, std::min(hi, range_) - std::max(lo, -range_));
    return -depth_ * len / dr;
}

double PotentialSpec::support_radius() const {
    switch (kind_) {
        case Kind::GaussianWell:
            return range_ * std::sqrt(std::log(std::max(depth_, 1.0) * 1e16));
        case Kind::SquareWell:
            return range_;
        case Kind::TabulatedRadial:
            return table_r_.back();
        case Kind::PointInteractionReference:
            return 0.0;
    }
    return 0.0;
}

double PotentialSpec::fourier_radial(double k) const {
    const double R = support_radius();
    const int n = 8193;
    const double dr = R / (n - 1);
    static thread_local std::vector<double> buf;
    buf.resize(n);
    const double two_pi = 2.0 * M_PI;
    if (d_ == 1) {
        for (int i = 0; i < n; ++i) buf[i] = value(i * dr);
        return 2.0 * filon_cos(buf, 0.0, dr, k) / std::sqrt(two_pi);
    }
    if (d_ == 3) {
        for (int i = 0; i < n; ++i) buf[i] = i * dr * value(i * dr);
        if (std::abs(k) < 1e-10) {
            for (int i = 0; i < n; ++i) buf[i] *= i * dr;
            return std::pow(two_pi, -1.5) * 4.0 * M_PI * simpson_uniform(buf, dr);
        }
        return std::pow(two_pi, -1.5) * (4.0 * M_PI / k) * filon_sin(buf, 0.0, dr, k);
    }
    throw InvalidParameter("fourier_radial: only d=1 and d=3 supported");
}

std::string PotentialSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::GaussianWell:
            os << "gaussian-well V0=" << depth_ << " s=" << range_ << " d=" << d_;
            break;
        case Kind::SquareWell:
            os << "square-well V0=" << depth_ << " s=" << range_ << " d=" << d_;
            break;
        case Kind::TabulatedRadial:
            os << "tabulated-radial n=" << table_r_.size() << " d=" << d_;
            break;
        case Kind::PointInteractionReference:
            os << "point-interaction a_s=" << a_s_;
            break;
    }
    return os.str();
}

}  // namespace bcs2gp
