#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "knmatch/constants.hpp"

// Closed-form relativistic kinematics of a photon scattering off a free
// stationary electron. All functions are pure, thread-safe and deterministic.

namespace knmatch {

inline constexpr double kPi = std::numbers::pi;

namespace detail {

inline constexpr double kAngleSlack = 1e-12;

inline void require_photon_energy(double hnu)
{
    if (!(hnu > 0.0) || !std::isfinite(hnu)) {
        throw std::domain_error("incident photon energy must be positive and finite, got " +
                                std::to_string(hnu));
    }
}

/// Validates phi against [0, pi] with 1e-12 slack and clamps it onto the interval.
inline double require_angle(double phi)
{
    if (!(phi >= -kAngleSlack && phi <= kPi + kAngleSlack)) {
        throw std::domain_error("scattering angle must lie in [0, pi] radians, got " +
                                std::to_string(phi));
    }
    return phi < 0.0 ? 0.0 : (phi > kPi ? kPi : phi);
}

/// 1 - cos(phi) via the half-angle form, exact at phi = 0 and free of
/// cancellation at small angles.
inline double one_minus_cos(double phi)
{
    const double s = std::sin(0.5 * phi);
    return 2.0 * s * s;
}

/// Dimensionless energy-shift term t = (hnu/m0c^2)(1 - cos phi), so that
/// hnu' = hnu/(1+t) and K_e' = hnu t/(1+t).
inline double shift_term(double hnu, double phi, const PhysicalConstants& pc)
{
    return hnu / pc.electron_rest_energy * one_minus_cos(phi);
}

}  // namespace detail

/// Energy of the scattered photon, hnu' = hnu / (1 + (hnu/m0c^2)(1 - cos phi)).
/// Monotone non-increasing in phi; equals hnu in the forward direction.
inline double scattered_photon_energy(double hnu, double phi,
                                      const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    phi = detail::require_angle(phi);
    return hnu / (1.0 + detail::shift_term(hnu, phi, pc));
}

/// Kinetic energy transferred to the recoil electron, hnu - hnu'(phi),
/// evaluated as hnu t/(1+t): identical in exact arithmetic but free of the
/// cancellation that the plain subtraction suffers when the shift is small.
inline double electron_kinetic_energy(double hnu, double phi,
                                      const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    phi = detail::require_angle(phi);
    const double t = detail::shift_term(hnu, phi, pc);
    return hnu * t / (1.0 + t);
}

/// Total recoil-electron energy, kinetic plus rest energy.
inline double electron_total_energy(double hnu, double phi,
                                    const PhysicalConstants& pc = kDefaultConstants)
{
    return electron_kinetic_energy(hnu, phi, pc) + pc.electron_rest_energy;
}

/// Recoil-electron momentum [MeV/c] from momentum conservation.
///
/// Evaluated as K^2 + 2 hnu hnu' (1 - cos phi) with K = hnu - hnu', which
/// equals the textbook hnu^2 + hnu'^2 - 2 hnu hnu' cos phi but keeps the
/// radicand a sum of non-negative terms, so forward scattering yields exactly
/// zero instead of cancellation noise.
inline double electron_momentum(double hnu, double phi,
                                const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    phi = detail::require_angle(phi);
    const double hnu_prime = scattered_photon_energy(hnu, phi, pc);
    const double kinetic = electron_kinetic_energy(hnu, phi, pc);
    const double radicand =
        kinetic * kinetic + 2.0 * hnu * hnu_prime * detail::one_minus_cos(phi);
    return std::sqrt(radicand < 0.0 ? 0.0 : radicand);
}

/// Electron momentum [MeV/c] from its kinetic energy via p^2 c^2 = K^2 + 2 K m0c^2.
inline double momentum_from_kinetic(double kinetic,
                                    const PhysicalConstants& pc = kDefaultConstants)
{
    if (!(kinetic >= 0.0) || !std::isfinite(kinetic)) {
        throw std::domain_error("electron kinetic energy must be non-negative, got " +
                                std::to_string(kinetic));
    }
    return std::sqrt(kinetic * (kinetic + 2.0 * pc.electron_rest_energy));
}

/// Full scattering state at (hnu, phi).
struct ScatterState {
    double incident_energy;   // hnu [MeV]
    double angle;             // phi [rad]
    double scattered_energy;  // hnu' [MeV]
    double electron_momentum; // p_e' [MeV/c]
    double electron_kinetic;  // K_e' [MeV]
    double electron_total;    // E_e' [MeV]
};

inline ScatterState scatter_state(double hnu, double phi,
                                  const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    phi = detail::require_angle(phi);
    const double kinetic = electron_kinetic_energy(hnu, phi, pc);
    return ScatterState{hnu,
                        phi,
                        scattered_photon_energy(hnu, phi, pc),
                        electron_momentum(hnu, phi, pc),
                        kinetic,
                        kinetic + pc.electron_rest_energy};
}

}  // namespace knmatch
