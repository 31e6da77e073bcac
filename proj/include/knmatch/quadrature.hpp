#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace knmatch {

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double eps, int depth, int max_depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;  // Richardson correction
    }
    if (depth >= max_depth) {
        throw std::runtime_error("adaptive Simpson quadrature did not converge");
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1, max_depth) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to the given relative
/// tolerance. The error budget is scaled by a 128-panel composite estimate of
/// the integral magnitude. Throws on non-convergence at max_depth.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-9, int max_depth = 60)
{
    const int n_coarse = 128;
    const double h = (b - a) / n_coarse;
    double coarse = f(a) + f(b);
    for (int i = 1; i < n_coarse; ++i) {
        coarse += (i % 2 == 0 ? 2.0 : 4.0) * f(a + i * h);
    }
    coarse *= h / 3.0;

    const double eps = rel_tol * std::max(std::abs(coarse), 1e-300);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, eps, 0, max_depth);
}

}  // namespace knmatch
