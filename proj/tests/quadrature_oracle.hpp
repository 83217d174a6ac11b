// Test-only numeric oracles, kept independent of the closed forms they
// check: adaptive Simpson quadrature and a root-finder built on it.
#pragma once

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_slice(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double& fm) {
    const double m = 0.5 * (a + b);
    fm = f(m);
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double fm,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    double flm = 0.0, frm = 0.0;
    const double left = simpson_slice(f, a, fa, m, fm, flm);
    const double right = simpson_slice(f, m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    double fm = 0.0;
    const double whole = simpson_slice(f, a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, fm, whole, tol, 48);
}

/// Bisection root of g on [lo, hi]; g(lo) and g(hi) must bracket zero.
inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     double tol = 1e-12) {
    double glo = g(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gmid = g(mid);
        if ((glo <= 0.0) == (gmid <= 0.0)) {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
