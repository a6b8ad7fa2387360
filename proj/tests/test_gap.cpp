#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bcs2gp/coupling.hpp"
#include "bcs2gp/errors.hpp"
#include "bcs2gp/gap.hpp"

using namespace bcs2gp;

namespace {

const PotentialSpec& gauss3() {
    static PotentialSpec V = PotentialSpec::gaussian_well(5.0, 1.0, 3);
    return V;
}

const BoundState& gauss3_bs() {
    static BoundState bs = solve_ground_state(gauss3());
    return bs;
}

const GapProblem& gauss3_problem() {
    static GapProblem prob(gauss3(), gauss3_bs());
    return prob;
}

}  // namespace

TEST_CASE("reduced energy closed forms") {
    const auto& prob = gauss3_problem();
    const int n = static_cast<int>(prob.p_grid().size());
    // vacuum
    std::vector<double> zero(n, 0.0);
    CHECK(prob.reduced_energy(zero, zero, -1.0) == 0.0);
    // free Fermi sea at mu > 0: closed form -mu^{5/2}/(15 pi^2) in d=3
    const double mu = 0.8;
    std::vector<double> gamma(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (prob.p_grid()[i] * prob.p_grid()[i] < mu) gamma[i] = 1.0;
    const double e = prob.reduced_energy(gamma, zero, mu);
    const double exact = -std::pow(mu, 2.5) / (15.0 * M_PI * M_PI);
    CHECK(e < 0.0);
    CHECK(e == doctest::Approx(exact).epsilon(2e-3));
    CHECK(e == doctest::Approx(prob.normal_state_energy(mu)).epsilon(1e-14));
}

TEST_CASE("two-body minimizer makes the quadratic term vanish") {
    const auto& prob = gauss3_problem();
    const auto& bs = gauss3_bs();
    const int n = static_cast<int>(prob.p_grid().size());
    const double mu = -bs.E_b;
    // energy of (gamma, alpha) = (sin^2, sin cos) built from eps * alpha0_hat
    auto energy_at = [&](double eps) {
        std::vector<double> gamma(n), alpha(n);
        for (int i = 0; i < n; ++i) {
            const double a = eps * bs.alpha0_hat_at(prob.p_grid()[i]);
            alpha[i] = a;
            gamma[i] = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * a * a)));
        }
        return prob.reduced_energy(gamma, alpha, mu);
    };
    const double f2 = energy_at(1e-2);
    const double f3 = energy_at(1e-3);
    const double exponent = std::log(f2 / f3) / std::log(10.0);
    CHECK(exponent == doctest::Approx(4.0).epsilon(0.05));
    // the quartic coefficient is the coupling constant itself
    const double g = compute_g(bs);
    CHECK(f3 / 1e-12 == doctest::Approx(g).epsilon(2e-3));
}

TEST_CASE("linearization residual of the pairing operator is tiny") {
    CHECK(gauss3_problem().linearization_defect() <= 1e-6);
}

TEST_CASE("admissibility is enforced") {
    const auto& prob = gauss3_problem();
    const int n = static_cast<int>(prob.p_grid().size());
    std::vector<double> gamma(n, 0.5), alpha(n, 0.0);
    gamma[0] = 1.5;
    CHECK_THROWS_AS(prob.reduced_energy(gamma, alpha, -1.0), AdmissibilityViolation);
    gamma[0] = 0.1;
    alpha[0] = 0.5;  // alpha^2 > gamma (1 - gamma)
    CHECK_THROWS_AS(prob.reduced_energy(gamma, alpha, -1.0), AdmissibilityViolation);
}

TEST_CASE("gap solution near the pairing threshold") {
    const auto& prob = gauss3_problem();
    const double E_b = prob.binding_energy();
    const double mu = -E_b + 0.01 * E_b;
    const GapState gs = prob.solve(mu);
    CHECK_FALSE(gs.collapsed_to_normal);
    CHECK(gs.rho > 0.0);
    CHECK(gs.energy_density < 0.0);
    CHECK(gs.energy_density <= prob.normal_state_energy(mu) + 1e-14);
    // BCS parametrization identity gamma(1-gamma) = alpha^2
    double worst = 0.0;
    for (std::size_t i = 0; i < gs.p.size(); ++i) {
        const double lhs = gs.gamma_hat[i] * (1.0 - gs.gamma_hat[i]);
        worst = std::max(worst, std::abs(lhs - gs.alpha_hat[i] * gs.alpha_hat[i]));
    }
    CHECK(worst <= 1e-8);
    // stationarity of the reduced energy at the fixed point
    CHECK(gs.stationarity_defect <= 1e-8 * E_b * E_b);
    CHECK(gs.projections == 0);
}

TEST_CASE("fixed point agrees with direct minimization on a 60-point grid") {
    GapOptions o;
    o.p_points = 59;
    const GapProblem coarse(gauss3(), gauss3_bs(), o);
    const double E_b = coarse.binding_energy();
    const double mu = -E_b + 0.01 * E_b;
    const double e_fp = coarse.solve(mu, o).energy_density;
    const double e_direct = coarse.direct_minimum(mu);
    CHECK(std::abs(e_fp - e_direct) <= 1e-4 * std::abs(e_direct));
    // forced alpha = 0 recovers the normal state exactly
    const int n = static_cast<int>(coarse.p_grid().size());
    std::vector<double> zero(n, 0.0);
    CHECK(coarse.reduced_energy(zero, zero, mu) == 0.0);
    // direct minimum at the threshold is zero within tolerance
    CHECK(std::abs(coarse.direct_minimum(-E_b)) <= 1e-6);
}

TEST_CASE("collapse to the normal state at and below the threshold") {
    const auto& prob = gauss3_problem();
    const double E_b = prob.binding_energy();
    for (double mu : {-E_b, -1.5 * E_b}) {
        const GapState gs = prob.solve(mu);
        CHECK(gs.collapsed_to_normal);
        CHECK(gs.energy_density == 0.0);
        CHECK(gs.rho == 0.0);
        CHECK_THROWS_AS(observables(gs, 1.0, E_b), ZeroDensity);
    }
}

TEST_CASE("grid convergence of the energy density") {
    const double E_b = gauss3_bs().E_b;
    const double mu = -E_b + 0.01 * E_b;
    GapOptions o2;
    o2.p_points = 960;
    o2.r_points = 1200;
    const GapProblem fine(gauss3(), gauss3_bs(), o2);
    const double e1 = gauss3_problem().solve(mu).energy_density;
    const double e2 = fine.solve(mu, o2).energy_density;
    CHECK(std::abs(e2 - e1) <= 1e-5 * std::abs(e1));
}

TEST_CASE("low density observables follow the leading-order laws") {
    const auto& prob = gauss3_problem();
    const auto& bs = gauss3_bs();
    const double E_b = bs.E_b;
    const double g = compute_g(bs);
    double prev_resid = 0.0;
    int k = 0;
    for (double frac : {0.02, 0.01}) {
        const double eps = frac * E_b;
        const GapState gs = prob.solve(-E_b + eps);
        const GapObservables obs = observables(gs, g, E_b);
        CHECK(obs.rho == doctest::Approx(eps / g).epsilon(0.2));
        CHECK(std::abs(obs.energy_per_particle - obs.predicted_epp) <= 0.1 * g * obs.rho);
        const double resid = std::abs(obs.energy_per_particle - obs.predicted_epp);
        if (k++ > 0) CHECK(resid < prev_resid);
        prev_resid = resid;
    }
}

TEST_CASE("quadratic energy law of the low density scan") {
    const double E_b = gauss3_bs().E_b;
    const std::vector<double> eps = {0.04 * E_b, 0.02 * E_b, 0.01 * E_b, 0.005 * E_b};
    const LowDensityScan scan = low_density_scan(gauss3(), eps);
    CHECK(scan.rows.size() == 4);
    CHECK(scan.four_g_c_dev <= 0.1);
    // relative error of -energy/eps^2 against 1/(4g) improves as eps shrinks
    const double target = 1.0 / (4.0 * scan.g);
    double prev = 1e300;
    for (const auto& row : scan.rows) {
        const double err = std::abs(-row.energy_density / (row.eps * row.eps) - target);
        CHECK(err < prev);
        prev = err;
    }
    CHECK_THROWS_AS(low_density_scan(gauss3(), {0.01 * E_b}), InvalidParameter);
    CHECK_THROWS_AS(low_density_scan(gauss3(), {0.01 * E_b, 0.02 * E_b}), InvalidParameter);
    CHECK_THROWS_AS(low_density_scan(gauss3(), {0.2 * E_b, 0.1 * E_b}), InvalidParameter);
}

TEST_CASE("one-dimensional pairing problem") {
    const PotentialSpec V = PotentialSpec::gaussian_well(1.0, 1.0, 1);
    const BoundState bs = solve_ground_state(V);
    const GapProblem prob(V, bs);
    CHECK(prob.linearization_defect() <= 1e-6);
    const double E_b = bs.E_b;
    const GapState gs = prob.solve(-E_b + 0.01 * E_b);
    CHECK_FALSE(gs.collapsed_to_normal);
    CHECK(gs.energy_density < 0.0);
    CHECK(gs.stationarity_defect <= 1e-8 * E_b * E_b);
    const double g = compute_g(bs);
    const GapObservables obs = observables(gs, g, E_b);
    CHECK(obs.rho == doctest::Approx(0.01 * E_b / g).epsilon(0.2));
}

TEST_CASE("pairing problem rejects unusable inputs") {
    const BoundState ref = point_interaction_reference(1.0);
    CHECK_THROWS_AS(GapProblem(PotentialSpec::point_interaction_reference(1.0), ref),
                    InvalidParameter);
    CHECK_THROWS_AS(brute_force_oracle(gauss3(), -1.0, 100), InvalidParameter);
}
