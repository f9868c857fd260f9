#ifndef QRABI_ROOTFIND_HPP
#define QRABI_ROOTFIND_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace qrabi {

// Bracketed bisection followed by one Newton polish step (numeric derivative).
// f(a) and f(b) must have opposite signs.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-12, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    for (int i = 0; i < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    double x = 0.5 * (a + b);
    // Newton polish with a central-difference derivative; reject steps that
    // leave the bracket.
    const double h = 1e-7 * (1.0 + std::abs(x));
    const double df = (f(x + h) - f(x - h)) / (2.0 * h);
    if (df != 0.0) {
        const double xn = x - f(x) / df;
        if (xn > a && xn < b) x = xn;
    }
    return x;
}

// Scan [lo, hi] on a uniform grid and bisect every sign change of f.
inline std::vector<double> find_roots_scan(const std::function<double(double)>& f,
                                           double lo, double hi, int n_scan = 400,
                                           double tol = 1e-12) {
    std::vector<double> roots;
    double x_prev = lo;
    double f_prev = f(lo);
    for (int i = 1; i <= n_scan; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / n_scan;
        const double fx = f(x);
        if (std::isfinite(f_prev) && std::isfinite(fx)) {
            if (f_prev == 0.0) {
                roots.push_back(x_prev);
            } else if ((f_prev < 0.0) != (fx < 0.0)) {
                roots.push_back(bisect(f, x_prev, x, tol));
            }
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

}  // namespace qrabi

#endif
