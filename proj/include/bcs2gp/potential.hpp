#pragma once

#include <string>
#include <vector>

namespace bcs2gp {

/// Radial interaction potential V.  All kinds are reflection symmetric by
/// construction; tabulated kinds are radial tables with linear interpolation.
class PotentialSpec {
  public:
    enum class Kind { GaussianWell, SquareWell, TabulatedRadial, PointInteractionReference };

    static PotentialSpec gaussian_well(double depth, double range, int dim);
    static PotentialSpec square_well(double depth, double range, int dim);
    static PotentialSpec tabulated_radial(std::vector<double> r, std::vector<double> v, int dim);
    static PotentialSpec point_interaction_reference(double scattering_length);

    Kind kind() const { return kind_; }
    int dim() const { return d_; }
    double depth() const { return depth_; }
    double range() const { return range_; }
    double scattering_length() const { return a_s_; }

    double value(double r) const;

    /// Average of V over the cell [r-dr/2, r+dr/2].  Equals value(r) for the
    /// smooth kinds; the square well gets the exact overlap fraction so that
    /// finite-difference discretizations keep quadratic convergence at the edge.
    double cell_average(double r, double dr) const;

    /// Radius beyond which |V| is numerically negligible.
    double support_radius() const;

    /// Radial Fourier transform with the unitary convention,
    /// d=3: (2pi)^{-3/2} (4pi/k) \int r sin(kr) V(r) dr, d=1: cosine transform.
    double fourier_radial(double k) const;

    std::string describe() const;

  private:
    PotentialSpec() = default;
    void validate() const;

    Kind kind_ = Kind::GaussianWell;
    int d_ = 3;
    double depth_ = 0.0;   // V0 > 0, the well is -V0 * profile
    double range_ = 1.0;   // s
    double a_s_ = 0.0;     // point-interaction reference only
    std::vector<double> table_r_, table_v_;
};

}  // namespace bcs2gp
