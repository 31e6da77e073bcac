#pragma once

namespace knmatch {

/// CODATA values used by every computation. Energies are in MeV, lengths in
/// meters, momenta in MeV/c. Cross sections are expressed as dimensionless
/// multiples of r_e^2 per steradian; conversion to area is a presentation
/// concern, see barn helpers below.
struct PhysicalConstants {
    double electron_rest_energy = 0.5109989461;           // m0*c^2 [MeV]
    double classical_electron_radius = 2.8179403227e-15;  // r_e [m]
    double planck_hc = 1.23984193e-12;                    // h*c [MeV*m]

    constexpr double electron_radius_squared() const  // [m^2]
    {
        return classical_electron_radius * classical_electron_radius;
    }
};

inline constexpr PhysicalConstants kDefaultConstants{};

inline constexpr double kBarnInSquareMeters = 1e-28;

/// r_e^2 multiples -> barns.
inline constexpr double re2_to_barn(double value_re2,
                                    const PhysicalConstants& pc = kDefaultConstants)
{
    return value_re2 * pc.electron_radius_squared() / kBarnInSquareMeters;
}

}  // namespace knmatch
