#pragma once

#include <cmath>
#include <functional>

#include "mixedgraph/errors.hpp"

namespace mixedgraph::detail {

struct ScalarMaxResult {
    double x = 0.0;
    double fx = 0.0;
    bool converged = false;
};

/// Bounded scalar maximization by Brent's golden-section/parabolic
/// hybrid (run on -f). Derivative-free; x-tolerance semantics.
inline ScalarMaxResult maximize_scalar(const std::function<double(double)>& f,
                                       double lo, double hi, double tol,
                                       int max_iter) {
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a);
    double w = x, v = x;
    double fx = -f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    ScalarMaxResult res;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::fabs(x) + 1e-12;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) {
            res.converged = true;
            break;
        }
        double p = 0.0, q = 0.0, r = 0.0;
        bool parabolic = false;
        if (std::fabs(e) > tol1) {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double e_old = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                parabolic = true;
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        const double u = (std::fabs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = -f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    res.x = x;
    res.fx = -fx;
    return res;
}

/// Drives |grad| below g_tol near x0 by safeguarded secant/bisection on a
/// sign-changing bracket. Returns x0 untouched when no bracket exists
/// inside [lo,hi] (clamped optimum).
inline double polish_gradient_root(const std::function<double(double)>& grad,
                                   double x0, double lo, double hi,
                                   double g_tol, int max_iter) {
    double g0 = grad(x0);
    if (!std::isfinite(g0)) throw NumericError("gradient is not finite");
    if (std::fabs(g0) <= g_tol) return x0;

    // Expand a bracket around x0.
    double step = 1e-6;
    double a = x0, b = x0, ga = g0, gb = g0;
    for (int k = 0; k < 60 && ga * gb > 0.0; ++k) {
        a = std::max(lo, x0 - step);
        b = std::min(hi, x0 + step);
        ga = grad(a);
        gb = grad(b);
        if (ga * g0 < 0.0) { b = x0; gb = g0; break; }
        if (gb * g0 < 0.0) { a = x0; ga = g0; break; }
        if (a == lo && b == hi) break;
        step *= 4.0;
    }
    if (ga * gb > 0.0) return x0;  // no interior root: boundary optimum

    double x = x0;
    for (int it = 0; it < max_iter; ++it) {
        // Secant proposal, guarded to the bracket interior.
        double mid = 0.5 * (a + b);
        double sec = (gb != ga) ? b - gb * (b - a) / (gb - ga) : mid;
        x = (sec > a && sec < b) ? sec : mid;
        double gx = grad(x);
        if (!std::isfinite(gx)) throw NumericError("gradient is not finite");
        if (std::fabs(gx) <= g_tol || b - a < 1e-15) return x;
        if (ga * gx < 0.0) { b = x; gb = gx; }
        else { a = x; ga = gx; }
    }
    return x;
}

}  // namespace mixedgraph::detail
