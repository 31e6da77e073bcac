#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "knmatch/cross_section.hpp"
#include "knmatch/grid.hpp"
#include "knmatch/kinematics.hpp"

// The normalization schemes: every per-energy curve is rescaled so that its
// own extreme values land on 0 and 1, with the reference angle pi* given by
// reference_angle() below.

namespace knmatch {

enum class Quantity {
    KnNorm,
    ScatteredEnergyNorm,
    ElectronMomentumNorm,
    ElectronKineticNorm,
    KnGlobalNorm,
    ScatterFraction,
    MomentumScaledNorm,
    EnergyTransferFraction,
};

/// Samples of one normalized quantity over an angle grid.
struct Curve {
    double energy;  // hnu [MeV]
    Quantity quantity;
    KnVariant variant;
    Eigen::ArrayXd angles;
    Eigen::ArrayXd values;
};

/// One row of the amplitude table: the per-energy normalization amplitudes.
/// scatter_drop and transfer_fraction are the same quantity by construction
/// ((hnu - hnu'(pi*))/hnu) and are computed from one expression, so they
/// compare equal bit for bit.
struct AmplitudeRow {
    double energy;
    double kn_amplitude;      // (KN(0)-KN_min) / (KN(0)-KN_min at 1000 MeV)
    double scatter_drop;      // (hnu'(0)-hnu'(pi*)) / hnu
    double momentum_ratio;    // (hnu/c) / p_e'(pi*)
    double transfer_fraction; // K_e'(pi*) / hnu
};

/// The reference angle pi*: pi for hnu >= 1 MeV, otherwise the angle that
/// minimizes KN(phi) for the given variant.
inline double reference_angle(double hnu, KnVariant variant = KnVariant::Full,
                              const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    if (hnu >= 1.0) return kPi;
    return kn_minimum(hnu, variant, pc).angle;
}

namespace detail {

inline void require_denominator(double denom)
{
    if (std::abs(denom) < 1e-300) {
        throw std::runtime_error("degenerate normalization denominator");
    }
}

}  // namespace detail

/// (KN(phi) - KN_min) / (KN(0) - KN_min): 1 at phi -> 0, exactly 0 at the
/// minimum angle.
inline Curve kn_normalized(double hnu, const AngleGrid& grid,
                           KnVariant variant = KnVariant::Full,
                           const PhysicalConstants& pc = kDefaultConstants)
{
    const KnMinimum mn = kn_minimum(hnu, variant, pc);
    const double denom = kn_differential(hnu, 0.0, variant, pc) - mn.value;
    detail::require_denominator(denom);
    Eigen::ArrayXd values = grid.angles.unaryExpr(
        [&](double phi) { return (kn_differential(hnu, phi, variant, pc) - mn.value) / denom; });
    return Curve{hnu, Quantity::KnNorm, variant, grid.angles, std::move(values)};
}

/// (KN(phi) - KN_min) divided by the 1000 MeV amplitude (KN(0) - KN_min), full
/// variant: the cross-energy normalization that makes the highest-energy curve
/// peak at 1.
inline Curve kn_global_normalized(double hnu, const AngleGrid& grid,
                                  const PhysicalConstants& pc = kDefaultConstants)
{
    const KnMinimum mn = kn_minimum(hnu, KnVariant::Full, pc);
    const double denom =
        kn_differential(1000.0, 0.0, KnVariant::Full, pc) - kn_minimum(1000.0, KnVariant::Full, pc).value;
    detail::require_denominator(denom);
    Eigen::ArrayXd values = grid.angles.unaryExpr(
        [&](double phi) { return (kn_differential(hnu, phi, KnVariant::Full, pc) - mn.value) / denom; });
    return Curve{hnu, Quantity::KnGlobalNorm, KnVariant::Full, grid.angles, std::move(values)};
}

/// (hnu'(phi) - hnu'(ref)) / (hnu'(0) - hnu'(ref)) about an explicit reference
/// angle: 1 at phi = 0, 0 at the reference angle. Evaluated in the
/// algebraically identical form (1 - u(phi)/u(ref)) / (1 + t(phi)) with
/// u = 1 - cos and t the energy-shift term, which keeps the curve accurate to
/// a few ulps even where hnu' barely differs from hnu.
inline Curve scattered_energy_normalized_about(double hnu, const AngleGrid& grid, double phi_ref,
                                               KnVariant variant = KnVariant::Full,
                                               const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    const double omc_ref = detail::one_minus_cos(phi_ref);
    detail::require_denominator(electron_kinetic_energy(hnu, phi_ref, pc));
    Eigen::ArrayXd values = grid.angles.unaryExpr([&](double phi) {
        const double ratio = detail::one_minus_cos(phi) / omc_ref;
        return (1.0 - ratio) / (1.0 + detail::shift_term(hnu, phi, pc));
    });
    return Curve{hnu, Quantity::ScatteredEnergyNorm, variant, grid.angles, std::move(values)};
}

inline Curve scattered_energy_normalized(double hnu, const AngleGrid& grid,
                                         KnVariant variant = KnVariant::Full,
                                         const PhysicalConstants& pc = kDefaultConstants)
{
    return scattered_energy_normalized_about(hnu, grid, reference_angle(hnu, variant, pc),
                                             variant, pc);
}

/// p_e'(phi) / p_e'(ref), optionally scaled by (hnu/c)/p_e'(ref) as in the
/// momentum panel of the normalized-curve figure.
inline Curve electron_momentum_normalized_about(double hnu, const AngleGrid& grid, double phi_ref,
                                                bool scaled = false,
                                                KnVariant variant = KnVariant::Full,
                                                const PhysicalConstants& pc = kDefaultConstants)
{
    const double p_ref = electron_momentum(hnu, phi_ref, pc);
    detail::require_denominator(p_ref);
    const double scale = scaled ? hnu / p_ref : 1.0;
    Eigen::ArrayXd values = grid.angles.unaryExpr(
        [&](double phi) { return scale * electron_momentum(hnu, phi, pc) / p_ref; });
    return Curve{hnu, scaled ? Quantity::MomentumScaledNorm : Quantity::ElectronMomentumNorm,
                 variant, grid.angles, std::move(values)};
}

inline Curve electron_momentum_normalized(double hnu, const AngleGrid& grid,
                                          KnVariant variant = KnVariant::Full, bool scaled = false,
                                          const PhysicalConstants& pc = kDefaultConstants)
{
    return electron_momentum_normalized_about(hnu, grid, reference_angle(hnu, variant, pc),
                                              scaled, variant, pc);
}

/// K_e'(phi) / K_e'(ref), or the energy transfer fraction K_e'(phi)/hnu when
/// as_fraction is set. The normalized form is evaluated as
/// (u(phi)/u(ref)) (1 + t(ref)) / (1 + t(phi)), the stable counterpart of the
/// scattered-energy curve, so the two sum to 1 to a few ulps pointwise.
inline Curve electron_kinetic_normalized_about(double hnu, const AngleGrid& grid, double phi_ref,
                                               bool as_fraction = false,
                                               KnVariant variant = KnVariant::Full,
                                               const PhysicalConstants& pc = kDefaultConstants)
{
    detail::require_photon_energy(hnu);
    Eigen::ArrayXd values;
    if (as_fraction) {
        values = grid.angles.unaryExpr([&](double phi) {
            const double t = detail::shift_term(hnu, phi, pc);
            return t / (1.0 + t);
        });
    } else {
        detail::require_denominator(electron_kinetic_energy(hnu, phi_ref, pc));
        const double omc_ref = detail::one_minus_cos(phi_ref);
        const double one_plus_t_ref = 1.0 + detail::shift_term(hnu, phi_ref, pc);
        values = grid.angles.unaryExpr([&](double phi) {
            const double ratio = detail::one_minus_cos(phi) / omc_ref;
            return ratio * one_plus_t_ref / (1.0 + detail::shift_term(hnu, phi, pc));
        });
    }
    return Curve{hnu,
                 as_fraction ? Quantity::EnergyTransferFraction : Quantity::ElectronKineticNorm,
                 variant, grid.angles, std::move(values)};
}

inline Curve electron_kinetic_normalized(double hnu, const AngleGrid& grid,
                                         KnVariant variant = KnVariant::Full,
                                         bool as_fraction = false,
                                         const PhysicalConstants& pc = kDefaultConstants)
{
    return electron_kinetic_normalized_about(hnu, grid, reference_angle(hnu, variant, pc),
                                             as_fraction, variant, pc);
}

/// Compton scatter fraction hnu'(phi)/hnu.
inline Curve scatter_fraction(double hnu, const AngleGrid& grid,
                              const PhysicalConstants& pc = kDefaultConstants)
{
    Eigen::ArrayXd values = grid.angles.unaryExpr(
        [&](double phi) { return scattered_photon_energy(hnu, phi, pc) / hnu; });
    return Curve{hnu, Quantity::ScatterFraction, KnVariant::Full, grid.angles, std::move(values)};
}

/// Amplitude table over the given energies, ordered as the input.
inline std::vector<AmplitudeRow> amplitude_table(const std::vector<double>& energies,
                                                 KnVariant variant = KnVariant::Full,
                                                 const PhysicalConstants& pc = kDefaultConstants)
{
    const double denom_1000 =
        kn_differential(1000.0, 0.0, variant, pc) - kn_minimum(1000.0, variant, pc).value;
    detail::require_denominator(denom_1000);
    std::vector<AmplitudeRow> rows;
    rows.reserve(energies.size());
    for (double hnu : energies) {
        const double ref = reference_angle(hnu, variant, pc);
        const KnMinimum mn = kn_minimum(hnu, variant, pc);
        const double drop = electron_kinetic_energy(hnu, ref, pc) / hnu;
        rows.push_back(AmplitudeRow{
            hnu,
            (kn_differential(hnu, 0.0, variant, pc) - mn.value) / denom_1000,
            drop,
            hnu / electron_momentum(hnu, ref, pc),
            drop,
        });
    }
    return rows;
}

}  // namespace knmatch
