#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Dense>

#include "boundform/errors.hpp"

namespace boundform {

/// Composite Simpson weights for `n` equally spaced points with spacing h.
/// An odd number of intervals closes with a Simpson 3/8 panel.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> simpson_weights(Eigen::Index n, Scalar h)
{
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    if (n < 2)
        throw ContractViolation("simpson_weights: need at least two points");
    Vec w = Vec::Zero(n);
    if (n == 2) {
        w.setConstant(h / 2);
        return w;
    }
    const Eigen::Index intervals = n - 1;
    const Eigen::Index simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    for (Eigen::Index i = 0; i < simpson_end; i += 2) {
        w[i] += h / 3;
        w[i + 1] += 4 * h / 3;
        w[i + 2] += h / 3;
    }
    if (simpson_end != intervals) {
        const Eigen::Index i = simpson_end;
        w[i] += 3 * h / 8;
        w[i + 1] += 9 * h / 8;
        w[i + 2] += 9 * h / 8;
        w[i + 3] += 3 * h / 8;
    }
    return w;
}

/// Simpson integral of f over [lo, hi] with `panels` (rounded up to even).
template <typename F>
double simpson_integrate(F&& f, double lo, double hi, long panels)
{
    if (panels < 2)
        panels = 2;
    if (panels % 2)
        ++panels;
    const double h = (hi - lo) / static_cast<double>(panels);
    double sum = f(lo) + f(hi);
    for (long i = 1; i < panels; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * f(lo + h * static_cast<double>(i));
    return sum * h / 3.0;
}

/// Brent's method on a sign-changing bracket [lo, hi]. Returns the root.
template <typename F>
double brent_root(F&& f, double lo, double hi, double xtol = 0.0, int max_iter = 200)
{
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if ((fa > 0) == (fb > 0))
        throw NumericalError("brent_root: bracket does not change sign");

    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0)
            return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0)
                q = -q;
            else
                p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
        fb = f(b);
    }
    throw NumericalError("brent_root: no convergence in bracket [" + std::to_string(lo) + ", "
                         + std::to_string(hi) + "]");
}

/// Fixed-step classic Runge-Kutta step for y' = f(t, y). Works for any
/// Eigen vector expression type.
template <typename F, typename Vector>
Vector rk4_step(F&& f, double t, const Vector& y, double dt)
{
    const Vector k1 = f(t, y);
    const Vector k2 = f(t + 0.5 * dt, (y + (0.5 * dt) * k1).eval());
    const Vector k3 = f(t + 0.5 * dt, (y + (0.5 * dt) * k2).eval());
    const Vector k4 = f(t + dt, (y + dt * k3).eval());
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace boundform
