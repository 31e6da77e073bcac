#pragma once

#include <cmath>
#include <utility>

namespace knmatch {

struct ScalarMin {
    double x;
    double value;
};

/// Golden-section search on [a, b]; shrinks the bracket below x_tol and
/// returns its midpoint. Equal values move the bracket right, so ties resolve
/// toward the larger abscissa.
template <class F>
ScalarMin golden_section_min(F&& f, double a, double b, double x_tol = 1e-10)
{
    constexpr double inv_phi = 0.6180339887498949;    // 1/phi
    constexpr double inv_phi2 = 0.3819660112501051;   // 1/phi^2
    double h = b - a;
    double c = a + inv_phi2 * h;
    double d = a + inv_phi * h;
    double fc = f(c);
    double fd = f(d);
    while (h > x_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + inv_phi2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + inv_phi * h;
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return ScalarMin{x, f(x)};
}

/// Coarse scan over n uniform points of [a, b] (endpoints included, ties kept
/// toward the larger abscissa), then golden-section refinement of the
/// bracketing interval. The interval endpoints compete with the refined point,
/// so a boundary minimum is returned at the exact boundary.
template <class F>
ScalarMin scan_then_golden_min(F&& f, double a, double b, int n_scan, double x_tol = 1e-10)
{
    const double step = (b - a) / (n_scan - 1);
    int best_i = 0;
    double best_v = f(a);
    for (int i = 1; i < n_scan; ++i) {
        const double v = f(i == n_scan - 1 ? b : a + i * step);
        if (v <= best_v) {
            best_v = v;
            best_i = i;
        }
    }
    const double lo = best_i == 0 ? a : a + (best_i - 1) * step;
    const double hi = best_i >= n_scan - 2 ? b : a + (best_i + 1) * step;
    ScalarMin best = golden_section_min(f, lo, hi, x_tol);
    for (double cand : {lo, hi}) {
        const double v = f(cand);
        if (v < best.value || (v == best.value && cand > best.x)) {
            best = ScalarMin{cand, v};
        }
    }
    return best;
}

}  // namespace knmatch
