#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "knmatch/normalization.hpp"

// Difference/sum curves between the normalized cross section and the
// normalized kinematic quantities, and the Pearson chi-square statistics that
// quantify how well they match.

namespace knmatch {

/// Chi-square critical value at probability level 0.9999 for dof = 1999
/// (2000 data points). Transcribed constant; no quantile computation here.
inline constexpr double kChiSquareCriticalDof1999 = 1740.7049;
/// Same probability level for dof = 7 (the 8 amplitude-table rows >= 1 MeV).
inline constexpr double kChiSquareCriticalDof7 = 0.1528;
/// Grid size for which kChiSquareCriticalDof1999 applies.
inline constexpr Eigen::Index kSweepGridPoints = 2000;

enum class MatchKind { DiffScatteredEnergy, SumMomentum, SumKinetic };

/// Which variant's KN minimum provides the sub-MeV reference angle for the
/// kinematic comparands when matching against the sin^2 = 0 cross section.
enum class MinAngleRule { OwnVariant, FullVariant };

struct MatchCurve {
    double energy;
    MatchKind kind;
    KnVariant variant;
    Eigen::ArrayXd angles;
    Eigen::ArrayXd values;
};

struct ChiSquareReport {
    double chi2 = 0.0;
    int dof = 0;
    std::optional<double> critical_value;  // only defined for the transcribed dofs
    bool below_critical = false;           // chi2 < critical_value, when present
    Eigen::ArrayXd terms;                  // per-point (O-E)^2/E, kept on request
};

/// Pearson chi-square of observed against expected: sum (O_i - E_i)^2 / E_i,
/// dof = n - 1. Every expected value must be strictly positive; anything else
/// signals a grid or normalization misuse upstream, not a numeric edge case.
inline ChiSquareReport pearson_chi_square(const Eigen::ArrayXd& observed,
                                          const Eigen::ArrayXd& expected,
                                          std::optional<double> critical_value = std::nullopt,
                                          bool keep_terms = false)
{
    if (observed.size() != expected.size()) {
        throw std::invalid_argument("pearson_chi_square: observed/expected size mismatch");
    }
    if (observed.size() < 2) {
        throw std::invalid_argument("pearson_chi_square: need at least 2 data points");
    }
    if (!(expected > 0.0).all()) {
        throw std::invalid_argument("pearson_chi_square: every expected value must be > 0");
    }
    Eigen::ArrayXd terms = (observed - expected).square() / expected;
    ChiSquareReport report;
    report.chi2 = terms.sum();
    report.dof = int(observed.size()) - 1;
    report.critical_value = critical_value;
    report.below_critical = critical_value.has_value() && report.chi2 < *critical_value;
    if (keep_terms) report.terms = std::move(terms);
    return report;
}

/// Reference angle used by the matching comparands. The sum/difference curves
/// and their chi-squares are referenced at pi at every energy (this is what
/// reproduces the published sweep tables); the FullVariant rule swaps in the
/// full-KN minimum angle for the sin^2 = 0 analysis below 1 MeV.
inline double matching_reference_angle(double hnu, KnVariant variant,
                                       MinAngleRule rule = MinAngleRule::OwnVariant,
                                       const PhysicalConstants& pc = kDefaultConstants)
{
    if (variant == KnVariant::NoInterference && rule == MinAngleRule::FullVariant) {
        return reference_angle(hnu, KnVariant::Full, pc);
    }
    return kPi;
}

/// Difference of the normalized cross section and scattered energy
/// (approaches 0 with rising energy), or its sum with the normalized electron
/// momentum / kinetic energy (approaches 1).
inline MatchCurve match_curve(double hnu, const AngleGrid& grid, MatchKind kind,
                              KnVariant variant = KnVariant::Full,
                              MinAngleRule rule = MinAngleRule::OwnVariant,
                              const PhysicalConstants& pc = kDefaultConstants)
{
    const double ref = matching_reference_angle(hnu, variant, rule, pc);
    const Curve kn = kn_normalized(hnu, grid, variant, pc);
    Eigen::ArrayXd values;
    switch (kind) {
        case MatchKind::DiffScatteredEnergy:
            values = kn.values - scattered_energy_normalized_about(hnu, grid, ref, variant, pc).values;
            break;
        case MatchKind::SumMomentum:
            values = kn.values +
                     electron_momentum_normalized_about(hnu, grid, ref, false, variant, pc).values;
            break;
        case MatchKind::SumKinetic:
            values = kn.values +
                     electron_kinetic_normalized_about(hnu, grid, ref, false, variant, pc).values;
            break;
    }
    return MatchCurve{hnu, kind, variant, grid.angles, std::move(values)};
}

struct ChiSquareSweepRow {
    double energy;
    ChiSquareReport kn_vs_scattered;  // column (i)
    ChiSquareReport sum_momentum;     // column (ii)
    ChiSquareReport sum_kinetic;      // column (iii)
};

/// Chi-square sweep over energies on the shared grid. Columns:
///   (i)   O = KN_norm,            E = hnu'_norm
///   (ii)  O = KN_norm + p_norm,   E = 1
///   (iii) O = KN_norm + K_norm,   E = 1
/// K_norm = 1 - hnu'_norm exactly (both are referenced at the same angle), so
/// columns (i) and (iii) are one statistic; the sweep asserts the pointwise
/// complement identity to 1e-12 with the independently computed kinetic curve
/// and then reports the shared value in both columns, bit-identical.
inline std::vector<ChiSquareSweepRow> chi2_sweep(const std::vector<double>& energies,
                                                 const AngleGrid& grid,
                                                 KnVariant variant = KnVariant::Full,
                                                 MinAngleRule rule = MinAngleRule::OwnVariant,
                                                 const PhysicalConstants& pc = kDefaultConstants,
                                                 bool keep_terms = false)
{
    const std::optional<double> critical =
        grid.size() == kSweepGridPoints ? std::optional<double>(kChiSquareCriticalDof1999)
                                        : std::nullopt;
    const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(grid.size());
    std::vector<ChiSquareSweepRow> rows;
    rows.reserve(energies.size());
    for (double hnu : energies) {
        const double ref = matching_reference_angle(hnu, variant, rule, pc);
        const Curve kn = kn_normalized(hnu, grid, variant, pc);
        const Curve scattered = scattered_energy_normalized_about(hnu, grid, ref, variant, pc);
        const Curve momentum = electron_momentum_normalized_about(hnu, grid, ref, false, variant, pc);
        const Curve kinetic = electron_kinetic_normalized_about(hnu, grid, ref, false, variant, pc);

        const double identity_gap =
            (scattered.values + kinetic.values - 1.0).abs().maxCoeff();
        if (!(identity_gap <= 1e-12)) {
            throw std::runtime_error(
                "scattered/kinetic complement identity violated beyond 1e-12");
        }

        ChiSquareSweepRow row;
        row.energy = hnu;
        row.sum_momentum = pearson_chi_square(kn.values + momentum.values, ones, critical, keep_terms);
        row.sum_kinetic = pearson_chi_square(kn.values + kinetic.values, ones, critical, keep_terms);
        row.kn_vs_scattered = row.sum_kinetic;
        rows.push_back(std::move(row));
    }
    return rows;
}

/// The eight amplitude-table energies at and above 1 MeV.
inline const std::vector<double>& amplitude_chi2_energies()
{
    static const std::vector<double> energies{1.0, 5.0, 10.0, 50.0, 100.0, 300.0, 500.0, 1000.0};
    return energies;
}

struct AmplitudeChiSquare {
    ChiSquareReport transfer_vs_kn;  // O = transfer fraction, E = kn amplitude
    ChiSquareReport momentum_vs_kn;  // O = momentum ratio,    E = kn amplitude
};

/// Chi-square of the amplitude-table columns against the kn amplitude, for
/// exactly the eight rows at and above 1 MeV, in ascending order. dof = 7.
inline AmplitudeChiSquare amplitude_chi2(const std::vector<AmplitudeRow>& rows)
{
    const std::vector<double>& expected_energies = amplitude_chi2_energies();
    if (rows.size() != expected_energies.size()) {
        throw std::invalid_argument("amplitude_chi2: expected the 8 rows at and above 1 MeV");
    }
    Eigen::ArrayXd amplitude(8), transfer(8), momentum(8);
    for (int i = 0; i < 8; ++i) {
        if (std::abs(rows[i].energy - expected_energies[i]) > 1e-9 * expected_energies[i]) {
            throw std::invalid_argument("amplitude_chi2: rows must be the ordered energies "
                                        "1, 5, 10, 50, 100, 300, 500, 1000 MeV");
        }
        amplitude[i] = rows[i].kn_amplitude;
        transfer[i] = rows[i].transfer_fraction;
        momentum[i] = rows[i].momentum_ratio;
    }
    return AmplitudeChiSquare{
        pearson_chi_square(transfer, amplitude, kChiSquareCriticalDof7, true),
        pearson_chi_square(momentum, amplitude, kChiSquareCriticalDof7, true),
    };
}

}  // namespace knmatch
