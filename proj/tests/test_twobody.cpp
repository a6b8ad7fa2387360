#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcs2gp/errors.hpp"
#include "bcs2gp/integrate.hpp"
#include "bcs2gp/twobody.hpp"
#include "oracles.hpp"

using namespace bcs2gp;

namespace {
double real_space_norm(const BoundState& bs) {
    // Parseval check: \int alpha0^2 dx should equal (2 pi)^d
    std::vector<double> w(bs.r_grid.size());
    if (bs.d == 3) {
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = 4.0 * M_PI * bs.r_grid[i] * bs.r_grid[i] * bs.alpha0[i] * bs.alpha0[i];
    } else {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.0 * bs.alpha0[i] * bs.alpha0[i];
    }
    return simpson_uniform(w, bs.dr());
}
}  // namespace

TEST_CASE("gaussian well d=3: binding energy matches the shooting oracle") {
    auto V = PotentialSpec::gaussian_well(4.0, 1.0, 3);
    auto bs = solve_ground_state(V);
    const double ref = oracles::binding_energy_shooting(
        [&](double r) { return V.value(r); }, 3, 4.0);
    CHECK(bs.E_b == doctest::Approx(ref).epsilon(1e-8));
    CHECK(bs.eigenvalue_residual < 1e-9);
    CHECK(bs.normalization_error < 1e-8);
    CHECK(real_space_norm(bs) ==
          doctest::Approx(std::pow(2.0 * M_PI, 3)).epsilon(1e-6));
}

TEST_CASE("square well d=3: binding energy matches the transcendental equation") {
    auto V = PotentialSpec::square_well(5.0, 1.0, 3);
    auto bs = solve_ground_state(V);
    const double ref = oracles::square_well_binding_energy(5.0, 1.0);
    // V is discontinuous, so the finite-difference order degrades at the edge
    CHECK(bs.E_b == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("gaussian well d=1: full-line solve agrees with the shooting oracle") {
    auto V = PotentialSpec::gaussian_well(4.0, 1.0, 1);
    auto bs = solve_ground_state(V);
    const double ref = oracles::binding_energy_shooting(
        [&](double x) { return V.value(x); }, 1, 4.0);
    CHECK(bs.E_b == doctest::Approx(ref).epsilon(1e-8));
    CHECK(bs.normalization_error < 1e-8);
    CHECK(real_space_norm(bs) == doctest::Approx(2.0 * M_PI).epsilon(1e-6));
}

TEST_CASE("gap kernel: both routes to t agree") {
    auto V = PotentialSpec::gaussian_well(4.0, 1.0, 3);
    auto bs = solve_ground_state(V);
    auto gk = gap_kernel_t(bs, V);
    double sup_t = 0.0;
    for (double t : gk.t) sup_t = std::max(sup_t, std::abs(t));
    CHECK(sup_t > 0.0);
    CHECK(gk.cross_check_sup < 1e-6 * sup_t);
}

TEST_CASE("gap kernel routes agree for the square well too") {
    auto V = PotentialSpec::square_well(5.0, 1.0, 3);
    auto bs = solve_ground_state(V);
    auto gk = gap_kernel_t(bs, V);
    double sup_t = 0.0;
    for (double t : gk.t) sup_t = std::max(sup_t, std::abs(t));
    CHECK(gk.cross_check_sup < 1e-5 * sup_t);  // edge discontinuity costs accuracy
}

TEST_CASE("kernel derivatives match finite differences of t") {
    auto V = PotentialSpec::gaussian_well(4.0, 1.0, 3);
    auto bs = solve_ground_state(V);
    for (double q : {0.2, 0.7, 1.9}) {
        const double h = 1e-4;
        const double fd1 = (bs.t_at(q + h) - bs.t_at(q - h)) / (2.0 * h);
        const double fd2 = (bs.t_at(q + h) - 2.0 * bs.t_at(q) + bs.t_at(q - h)) / (h * h);
        CHECK(bs.t_prime_at(q) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(bs.t_second_at(q) == doctest::Approx(fd2).epsilon(1e-4));
    }
    // t is even, so t' must vanish at q = 0
    CHECK(std::abs(bs.t_prime_at(0.0)) < 1e-8 * std::abs(bs.t_at(0.0)));
}

TEST_CASE("point-interaction reference state") {
    const double a_s = 0.7;
    auto bs = point_interaction_reference(a_s);
    CHECK(bs.E_b == doctest::Approx(1.0 / (a_s * a_s)).epsilon(1e-15));
    const double t_want = 2.0 * std::sqrt(8.0 * M_PI) * std::pow(bs.E_b, 0.25);
    for (double q : {0.0, 0.5, 3.0, 20.0}) CHECK(bs.t_at(q) == doctest::Approx(t_want));
    // normalization of the closed-form momentum profile
    auto r = integrate_semi_infinite([&](double q) {
        const double a = bs.alpha0_hat_at(q);
        return q * q * a * a / (2.0 * M_PI * M_PI);
    });
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("shallow d=3 well has no bound state") {
    auto V = PotentialSpec::gaussian_well(0.5, 1.0, 3);
    CHECK_THROWS_AS(solve_ground_state(V), NoBoundState);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(solve_ground_state(PotentialSpec::gaussian_well(4.0, 1.0, 2)),
                    InvalidGrid);
    GridSpec tiny;
    tiny.points = 10;
    CHECK_THROWS_AS(solve_ground_state(PotentialSpec::gaussian_well(4.0, 1.0, 3), tiny),
                    InvalidGrid);
    CHECK_THROWS_AS(point_interaction_reference(-1.0), InvalidParameter);
}
