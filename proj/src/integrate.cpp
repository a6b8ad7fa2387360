#include "bcs2gp/integrate.hpp"

#include <cstddef>

#include "bcs2gp/errors.hpp"

namespace bcs2gp {

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    double err;
};

double adapt(SimpsonState& st, double a, double m, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        if (depth <= 0 && std::abs(delta) > 15.0 * tol)
            throw QuadratureFailure("adaptive Simpson: max depth reached");
        st.err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    const double l = adapt(st, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    const double r = adapt(st, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    return l + r;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, int max_depth) {
    if (!(b > a)) return {0.0, 0.0};
    SimpsonState st{&f, 0.0};
    // Fixed initial subdivision so narrow peaks cannot be skipped, plus a
    // coarse |f| estimate to anchor the relative target.
    const int n0 = 32;
    const double h = (b - a) / n0;
    std::vector<double> fs(2 * n0 + 1);
    for (int i = 0; i <= 2 * n0; ++i) fs[i] = f(a + 0.5 * i * h);
    double coarse = 0.0;
    for (int i = 0; i < 2 * n0; ++i)
        coarse += 0.25 * h * (std::abs(fs[i]) + std::abs(fs[i + 1]));
    const double tol = std::max(abs_tol, rel_tol * coarse) / n0;
    double v = 0.0;
    for (int i = 0; i < n0; ++i) {
        const double x0 = a + i * h, x1 = x0 + h, xm = x0 + 0.5 * h;
        const double f0 = fs[2 * i], fm = fs[2 * i + 1], f1 = fs[2 * i + 2];
        const double whole = h / 6.0 * (f0 + 4.0 * fm + f1);
        v += adapt(st, x0, xm, x1, f0, fm, f1, whole, tol, max_depth);
    }
    return {v, st.err};
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                   double abs_tol, double rel_tol) {
    auto g = [&](double s) {
        const double om = 1.0 - s;
        const double q = a + s / om;
        const double jac = 1.0 / (om * om);
        const double v = f(q) * jac;
        return std::isfinite(v) ? v : 0.0;
    };
    // Stop just short of s=1; the integrand must vanish there for convergence.
    return integrate_adaptive(g, 0.0, 1.0 - 1e-12, abs_tol, rel_tol);
}

double simpson_uniform(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * dx * (f[0] + f[1]);
    std::size_t m = n;
    double tail = 0.0;
    if (n % 2 == 0) {  // odd interval count: peel the last interval (3-point rule)
        tail = dx / 12.0 * (-f[n - 3] + 8.0 * f[n - 2] + 5.0 * f[n - 1]);
        m = n - 1;
    }
    double s = f[0] + f[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return dx / 3.0 * s + tail;
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
    return s;
}

namespace {

// Filon weights for the composite rule on panels of two intervals, theta = q*dx.
void filon_weights(double theta, double& alpha, double& beta, double& gamma) {
    if (std::abs(theta) < 0.05) {
        const double t2 = theta * theta;
        alpha = theta * t2 * (2.0 / 45.0 - t2 * (2.0 / 315.0 - t2 * (2.0 / 4725.0)));
        beta = 2.0 / 3.0 + t2 * (2.0 / 15.0 - t2 * (4.0 / 105.0 - t2 * (2.0 / 567.0)));
        gamma = 4.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * (1.0 / 210.0 - t2 * (1.0 / 11340.0)));
        return;
    }
    const double s = std::sin(theta), c = std::cos(theta);
    const double t3 = theta * theta * theta;
    alpha = (theta * theta + theta * s * c - 2.0 * s * s) / t3;
    beta = 2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3;
    gamma = 4.0 * (s - theta * c) / t3;
}

// Linear-interpolation Filon moment for one leftover interval.
double filon_lin_panel(double f0, double f1, double x0, double dx, double q, bool sine) {
    const double th = q * dx;
    double m0s, m1s, m0c, m1c;  // \int osc du and \int u*osc du (relative phase)
    if (std::abs(th) < 1e-4) {
        m0s = dx * (th / 2.0);
        m1s = dx * dx * (th / 3.0);
        m0c = dx * (1.0 - th * th / 6.0);
        m1c = dx * dx * (0.5 - th * th / 8.0);
    } else {
        const double s = std::sin(th), c = std::cos(th);
        m0s = dx * (1.0 - c) / th;
        m0c = dx * s / th;
        m1s = dx * dx * (s - th * c) / (th * th);
        m1c = dx * dx * (c - 1.0 + th * s) / (th * th);
    }
    const double a = f0, b = (f1 - f0) / dx;
    const double ps = std::sin(q * x0), pc = std::cos(q * x0);
    // sin(q(x0+u)) = sin(qx0)cos(qu) + cos(qx0)sin(qu), similarly cos.
    const double int_sin = ps * (a * m0c + b * m1c) + pc * (a * m0s + b * m1s);
    const double int_cos = pc * (a * m0c + b * m1c) - ps * (a * m0s + b * m1s);
    return sine ? int_sin : int_cos;
}

double filon(std::span<const double> f, double x0, double dx, double q, bool sine) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    std::size_t m = n;
    double tail = 0.0;
    if (n % 2 == 0) {
        tail = filon_lin_panel(f[n - 2], f[n - 1], x0 + (n - 2) * dx, dx, q, sine);
        m = n - 1;
    }
    if (m < 3) return tail + (m == 2 ? filon_lin_panel(f[0], f[1], x0, dx, q, sine) : 0.0);
    double alpha, beta, gamma;
    filon_weights(q * dx, alpha, beta, gamma);
    const double xa = x0, xb = x0 + (m - 1) * dx;
    double s_even = 0.0, s_odd = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double ph = q * (x0 + i * dx);
        const double w = sine ? std::sin(ph) : std::cos(ph);
        if (i % 2 == 0)
            s_even += f[i] * w;
        else
            s_odd += f[i] * w;
    }
    const double f_a = f[0], f_b = f[m - 1];
    double res;
    if (sine) {
        s_even -= 0.5 * (f_a * std::sin(q * xa) + f_b * std::sin(q * xb));
        res = dx * (-alpha * (f_b * std::cos(q * xb) - f_a * std::cos(q * xa)) + beta * s_even +
                    gamma * s_odd);
    } else {
        s_even -= 0.5 * (f_a * std::cos(q * xa) + f_b * std::cos(q * xb));
        res = dx * (alpha * (f_b * std::sin(q * xb) - f_a * std::sin(q * xa)) + beta * s_even +
                    gamma * s_odd);
    }
    return res + tail;
}

}  // namespace

double filon_sin(std::span<const double> f, double x0, double dx, double q) {
    return filon(f, x0, dx, q, true);
}

double filon_cos(std::span<const double> f, double x0, double dx, double q) {
    return filon(f, x0, dx, q, false);
}

}  // namespace bcs2gp
