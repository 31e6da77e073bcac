#pragma once

#include <cmath>

#include "knmatch/constants.hpp"
#include "knmatch/kinematics.hpp"
#include "knmatch/minimize.hpp"
#include "knmatch/quadrature.hpp"

// Klein-Nishina differential cross section for an unpolarized photon on a
// free stationary electron, in units of r_e^2 per steradian.

namespace knmatch {

/// NoInterference drops the sin^2(phi) term of the bracket (the contribution
/// of the photon's electromagnetic field scattering the electron).
enum class KnVariant { Full, NoInterference };

struct KnMinimum {
    double angle;   // phi_min [rad]
    double value;   // KN(phi_min) [r_e^2/sr]
    double energy;  // hnu [MeV]
    KnVariant variant;
};

/// Differential cross section (1/2) (hnu'/hnu)^2 (hnu'/hnu + hnu/hnu' - sin^2 phi)
/// in r_e^2 units. Equals exactly 1 at phi = 0 for every energy.
inline double kn_differential(double hnu, double phi, KnVariant variant = KnVariant::Full,
                              const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    phi = detail::require_angle(phi);
    const double r = 1.0 / (1.0 + (hnu / pc.electron_rest_energy) * detail::one_minus_cos(phi));
    double bracket = r + 1.0 / r;
    if (variant == KnVariant::Full) {
        const double s = std::sin(phi);
        bracket -= s * s;
    }
    return 0.5 * r * r * bracket;
}

/// Global minimum of KN over [0, pi]: 1e4-point scan plus golden-section
/// refinement to 1e-10 rad, ties toward the larger angle. A boundary minimum
/// is reported at exactly pi, and `value` is KN evaluated at the returned
/// angle, so normalizations vanish identically there.
inline KnMinimum kn_minimum(double hnu, KnVariant variant = KnVariant::Full,
                            const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    const auto f = [&](double phi) { return kn_differential(hnu, phi, variant, pc); };
    const ScalarMin m = scan_then_golden_min(f, 0.0, kPi, 10000, 1e-10);
    return KnMinimum{m.x, m.value, hnu, variant};
}

/// Total cross section 2 pi Int_0^pi KN(phi) sin(phi) dphi of the full
/// variant, in r_e^2 units, by adaptive Simpson quadrature (rel tol 1e-9,
/// max depth 60). Tends to the Thomson value 8 pi / 3 at low energy.
inline double kn_total_cross_section(double hnu,
                                     const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    const auto integrand = [&](double phi) {
        return kn_differential(hnu, phi, KnVariant::Full, pc) * std::sin(phi);
    };
    return 2.0 * kPi * adaptive_simpson(integrand, 0.0, kPi, 1e-9, 60);
}

}  // namespace knmatch
