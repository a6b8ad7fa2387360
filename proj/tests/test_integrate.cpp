#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bcs2gp/integrate.hpp"

using namespace bcs2gp;

TEST_CASE("adaptive Simpson on smooth integrands") {
    auto r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-13,
                                1e-12);
    CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-11));

    auto p =
        integrate_adaptive([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-13, 1e-12);
    CHECK(p.value == doctest::Approx(M_PI / 4.0).epsilon(1e-11));
    CHECK(p.error < 1e-8);
}

TEST_CASE("semi-infinite transform") {
    auto r = integrate_semi_infinite([](double q) { return 1.0 / (1.0 + q * q); });
    CHECK(r.value == doctest::Approx(M_PI / 2.0).epsilon(1e-10));

    // integrand with a scale far from 1
    auto s = integrate_semi_infinite([](double q) { return std::exp(-q / 30.0); });
    CHECK(s.value == doctest::Approx(30.0).epsilon(1e-10));
}

TEST_CASE("composite Simpson handles even sample counts") {
    for (int n : {101, 100}) {
        std::vector<double> f(n);
        const double dx = 1.0 / (n - 1);
        for (int i = 0; i < n; ++i) f[i] = std::exp(i * dx);
        CHECK(simpson_uniform(f, dx) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-8));
    }
}

TEST_CASE("oscillatory quadrature stays accurate when q dx is order one") {
    // \int_0^X exp(-x) sin(qx) dx = q/(1+q^2) up to exp(-X)
    const double X = 45.0;
    const int n = 4501;  // dx = 0.01
    const double dx = X / (n - 1);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = std::exp(-i * dx);
    for (double q : {0.0, 1e-6, 0.3, 5.0, 60.0, 300.0}) {
        const double want_s = q / (1.0 + q * q);
        const double want_c = 1.0 / (1.0 + q * q);
        // absolute accuracy relative to the scale of f, not the (tiny) integral
        CHECK(std::abs(filon_sin(f, 0.0, dx, q) - want_s) < 1e-7);
        CHECK(std::abs(filon_cos(f, 0.0, dx, q) - want_c) < 1e-7);
    }
}

TEST_CASE("oscillatory quadrature with nonzero origin and even count") {
    const double x0 = 0.5, dx = 0.005;
    const int n = 2000;  // even
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        const double x = x0 + i * dx;
        f[i] = x * std::exp(-x);
    }
    const double a = x0, b = x0 + (n - 1) * dx;
    const double q = 40.0;
    // exact: \int x e^{-x} sin(qx) dx via antiderivative
    auto F = [&](double x) {
        const double d = 1.0 + q * q;
        const double s = std::sin(q * x), c = std::cos(q * x);
        // \int x e^{-x} e^{iqx} dx, imaginary part
        const double re = (-1.0 + q * q) / (d * d), im = -2.0 * q / (d * d);
        const double pre_re = -x / d, pre_im = -x * q / d;  // -(x)(1+iq)/d ... careful below
        // antiderivative of x e^{(-1+iq)x}: e^{(-1+iq)x} (x/(−1+iq) − 1/(−1+iq)^2)
        const double ar = -1.0, ai = q;  // a = -1 + iq
        const double inv_r = ar / d, inv_i = -ai / d;
        const double inv2_r = inv_r * inv_r - inv_i * inv_i, inv2_i = 2.0 * inv_r * inv_i;
        const double pr = x * inv_r - inv2_r, pi = x * inv_i - inv2_i;
        const double er = std::exp(-x) * c, ei = std::exp(-x) * s;
        (void)re;
        (void)im;
        (void)pre_re;
        (void)pre_im;
        return std::make_pair(er * pr - ei * pi, er * pi + ei * pr);
    };
    auto [r1, i1] = F(b);
    auto [r0, i0] = F(a);
    CHECK(filon_sin(f, x0, dx, q) == doctest::Approx(i1 - i0).epsilon(1e-9));
    CHECK(filon_cos(f, x0, dx, q) == doctest::Approx(r1 - r0).epsilon(1e-9));
}
