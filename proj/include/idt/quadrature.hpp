#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace idt {

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive composite Simpson on [a,b]. tol is an absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                               int max_depth = 48) {
    if (!(b >= a)) throw std::invalid_argument("adaptive_simpson: b must be >= a");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Integration with a built-in agreement check: the interval is re-integrated
// on two initial partitions; disagreement beyond check_tol throws.
inline double integrate_checked(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                                double check_tol = 1e-10) {
    const double v1 = adaptive_simpson(f, a, b, tol);
    const double m = 0.5 * (a + b);
    const double v2 = adaptive_simpson(f, a, m, 0.5 * tol) + adaptive_simpson(f, m, b, 0.5 * tol);
    const double scale = std::max({1.0, std::abs(v1), std::abs(v2)});
    if (std::abs(v1 - v2) > check_tol * scale)
        throw std::runtime_error("integrate_checked: quadrature orders disagree");
    return v2;
}

}  // namespace idt
