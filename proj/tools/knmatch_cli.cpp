// Command-line front end: regenerates the reference tables and figure curves
// as CSV/JSON and runs the verification suite.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "knmatch/constants.hpp"
#include "knmatch/cross_section.hpp"
#include "knmatch/grid.hpp"
#include "knmatch/io.hpp"
#include "knmatch/kinematics.hpp"
#include "knmatch/matching.hpp"
#include "knmatch/normalization.hpp"
#include "knmatch/reference_data.hpp"

namespace {

using namespace knmatch;

/// Usage/domain problem attributable to a command-line parameter; exits 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::vector<double> energies;
    int grid_points = 2000;
    std::string variant = "full";
    std::string format = "csv";
    std::string out_path;
    int precision = 4;
    std::string fig3_rule = "own";
    bool degrees = false;
    double electron_rest_energy = kDefaultConstants.electron_rest_energy;

    double energy = 0.0;
    std::string angle;
    std::string figure;
    std::string which;

    PhysicalConstants constants() const
    {
        PhysicalConstants pc;
        pc.electron_rest_energy = electron_rest_energy;
        return pc;
    }
    KnVariant kn_variant() const
    {
        return variant == "no-sin2" ? KnVariant::NoInterference : KnVariant::Full;
    }
    MinAngleRule min_rule() const
    {
        return fig3_rule == "full" ? MinAngleRule::FullVariant : MinAngleRule::OwnVariant;
    }
};

const std::vector<double> kFigure1Energies{0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
const std::vector<double> kFigure23Energies{0.001, 0.1, 1.0, 1000.0};

std::string energy_label(double e)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", e);
    return std::string(buf);
}

/// Accepts "pi", "pi/<x>", or a plain number (radians unless --degrees).
double parse_angle(const std::string& token, bool degrees)
{
    try {
        if (token == "pi") return kPi;
        if (token.rfind("pi/", 0) == 0) {
            const double d = std::stod(token.substr(3));
            if (d == 0.0) throw UsageError("--angle: division by zero in \"" + token + "\"");
            return kPi / d;
        }
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return degrees ? v * kPi / 180.0 : v;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("--angle: cannot parse \"" + token + "\" (use radians, pi, pi/2, or --degrees)");
    }
}

void validate_common(const Options& opt)
{
    if (opt.grid_points < 2) throw UsageError("--grid-points must be at least 2");
    if (opt.precision < 0 || opt.precision > 17) throw UsageError("--precision must lie in [0, 17]");
    for (double e : opt.energies) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw UsageError("--energies entries must be positive and finite, got " +
                             energy_label(e));
        }
    }
}

std::vector<double> effective_energies(const Options& opt, const std::vector<double>& fallback)
{
    return opt.energies.empty() ? fallback : opt.energies;
}

void emit(const Options& opt, const std::string& command, const std::vector<double>& energies,
          const Table& table)
{
    std::ostringstream body;
    if (opt.format == "json") {
        nlohmann::ordered_json config;
        config["command"] = command;
        config["energies"] = energies;
        config["grid_points"] = opt.grid_points;
        config["variant"] = opt.variant;
        config["format"] = opt.format;
        config["precision"] = opt.precision;
        config["fig3_min_rule"] = opt.fig3_rule;
        config["degrees"] = opt.degrees;
        write_json(body, config, table);
    } else {
        write_csv(body, table);
    }
    if (opt.out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw UsageError("--out: cannot open \"" + opt.out_path + "\" for writing");
        out << body.str();
    }
}

// ---------------------------------------------------------------------------
// kinematics / kn

int cmd_kinematics(const Options& opt)
{
    if (!(opt.energy > 0.0) || !std::isfinite(opt.energy)) {
        throw UsageError("--energy must be positive and finite");
    }
    const double phi = parse_angle(opt.angle, opt.degrees);
    if (!(phi >= -1e-12 && phi <= kPi + 1e-12)) {
        throw UsageError("--angle must lie in [0, pi] radians");
    }
    const PhysicalConstants pc = opt.constants();
    const ScatterState s = scatter_state(opt.energy, phi, pc);
    Table t;
    t.columns = {"hnu_MeV", "phi_rad", "hnu_prime_MeV", "hnu_prime", "electron_momentum_MeV_c",
                 "electron_momentum", "electron_kinetic_MeV", "electron_kinetic",
                 "electron_total_MeV", "electron_total"};
    t.rows.push_back({s.incident_energy, s.angle, s.scattered_energy,
                      format_display(s.scattered_energy, opt.precision), s.electron_momentum,
                      format_display(s.electron_momentum, opt.precision), s.electron_kinetic,
                      format_display(s.electron_kinetic, opt.precision), s.electron_total,
                      format_display(s.electron_total, opt.precision)});
    emit(opt, "kinematics", {opt.energy}, t);
    return 0;
}

int cmd_kn(const Options& opt, bool have_angle)
{
    if (!(opt.energy > 0.0) || !std::isfinite(opt.energy)) {
        throw UsageError("--energy must be positive and finite");
    }
    const PhysicalConstants pc = opt.constants();
    const KnVariant variant = opt.kn_variant();
    Table t;
    if (have_angle) {
        const double phi = parse_angle(opt.angle, opt.degrees);
        if (!(phi >= -1e-12 && phi <= kPi + 1e-12)) {
            throw UsageError("--angle must lie in [0, pi] radians");
        }
        const double v = kn_differential(opt.energy, phi, variant, pc);
        t.columns = {"hnu_MeV", "phi_rad", "variant", "kn_re2_per_sr", "kn_mb_per_sr", "kn"};
        t.rows.push_back({opt.energy, phi, opt.variant, v, re2_to_barn(v, pc) * 1e3,
                          format_display(v, opt.precision)});
    } else {
        const KnMinimum mn = kn_minimum(opt.energy, variant, pc);
        t.columns = {"hnu_MeV", "variant", "min_angle_rad", "min_value_re2_per_sr",
                     "reference_angle_rad"};
        t.rows.push_back({opt.energy, opt.variant, mn.angle, mn.value,
                          reference_angle(opt.energy, variant, pc)});
    }
    emit(opt, "kn", {opt.energy}, t);
    return 0;
}

// ---------------------------------------------------------------------------
// curves

int cmd_curves(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    const std::string& fig = opt.figure;
    Table t;
    std::vector<double> energies;

    const auto angle_curves = [&](const std::vector<double>& defaults, const std::string& name,
                                  auto&& make_curve) {
        energies = effective_energies(opt, defaults);
        const AngleGrid grid = AngleGrid::endpoint_inclusive(opt.grid_points);
        t.columns = {"angle_rad"};
        std::vector<Curve> curves;
        for (double e : energies) {
            curves.push_back(make_curve(e, grid));
            t.columns.push_back(name + "_" + energy_label(e) + "MeV");
        }
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            std::vector<Cell> row{grid.angles[i]};
            for (const Curve& c : curves) row.push_back(c.values[i]);
            t.rows.push_back(std::move(row));
        }
    };

    const auto amplitude_column = [&](const std::string& name, auto&& project) {
        energies = effective_energies(opt, reference_energies());
        t.columns = {"energy_MeV", name};
        for (const AmplitudeRow& row : amplitude_table(energies, KnVariant::Full, pc)) {
            t.rows.push_back({row.energy, project(row)});
        }
    };

    const auto match_curves = [&](KnVariant variant) {
        energies = effective_energies(opt, kFigure23Energies);
        const AngleGrid grid = AngleGrid::endpoint_inclusive(opt.grid_points);
        t.columns = {"angle_rad"};
        std::vector<Eigen::ArrayXd> cols;
        for (double e : energies) {
            for (auto [kind, name] : {std::pair{MatchKind::DiffScatteredEnergy, "diff_scattered"},
                                      std::pair{MatchKind::SumMomentum, "sum_momentum"},
                                      std::pair{MatchKind::SumKinetic, "sum_kinetic"}}) {
                cols.push_back(match_curve(e, grid, kind, variant, opt.min_rule(), pc).values);
                t.columns.push_back(std::string(name) + "_" + energy_label(e) + "MeV");
            }
        }
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            std::vector<Cell> row{grid.angles[i]};
            for (const auto& col : cols) row.push_back(col[i]);
            t.rows.push_back(std::move(row));
        }
    };

    if (fig == "1a") {
        angle_curves(kFigure1Energies, "kn_global_norm",
                     [&](double e, const AngleGrid& g) { return kn_global_normalized(e, g, pc); });
    } else if (fig == "1b") {
        amplitude_column("kn_amplitude", [](const AmplitudeRow& r) { return r.kn_amplitude; });
    } else if (fig == "1c") {
        angle_curves(kFigure1Energies, "scatter_fraction",
                     [&](double e, const AngleGrid& g) { return scatter_fraction(e, g, pc); });
    } else if (fig == "1d") {
        amplitude_column("scatter_drop", [](const AmplitudeRow& r) { return r.scatter_drop; });
    } else if (fig == "1e") {
        angle_curves(kFigure1Energies, "momentum_scaled_norm", [&](double e, const AngleGrid& g) {
            return electron_momentum_normalized(e, g, KnVariant::Full, true, pc);
        });
    } else if (fig == "1f") {
        amplitude_column("momentum_ratio", [](const AmplitudeRow& r) { return r.momentum_ratio; });
    } else if (fig == "1g") {
        angle_curves(kFigure1Energies, "transfer_fraction", [&](double e, const AngleGrid& g) {
            return electron_kinetic_normalized(e, g, KnVariant::Full, true, pc);
        });
    } else if (fig == "1h") {
        amplitude_column("transfer_fraction",
                         [](const AmplitudeRow& r) { return r.transfer_fraction; });
    } else if (fig == "2") {
        match_curves(KnVariant::Full);
    } else if (fig == "3") {
        match_curves(KnVariant::NoInterference);
    } else {
        throw UsageError("--figure: unknown figure id \"" + fig +
                         "\" (expected 1a..1h, 2 or 3)");
    }
    emit(opt, "curves", energies, t);
    return 0;
}

// ---------------------------------------------------------------------------
// table

void append_value_ref_delta(std::vector<Cell>& row, double computed, const ReferenceValue& ref)
{
    row.push_back(computed);
    row.push_back(ref.value);
    row.push_back(computed - ref.value);
    row.push_back(ref.value != 0.0 ? (computed - ref.value) / ref.value
                                   : computed - ref.value);
}

Table table_s1(const PhysicalConstants& pc)
{
    Table t;
    t.columns = {"energy_MeV"};
    for (const char* q : {"kn_amplitude", "scatter_drop", "momentum_ratio", "transfer_fraction"}) {
        const std::string base(q);
        t.columns.push_back(base);
        t.columns.push_back(base + "_ref");
        t.columns.push_back(base + "_delta");
        t.columns.push_back(base + "_rel_delta");
    }
    const auto rows = amplitude_table(reference_energies(), KnVariant::Full, pc);
    const auto& refs = reference_s1();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<Cell> row{rows[i].energy};
        append_value_ref_delta(row, rows[i].kn_amplitude, refs[i].kn_amplitude);
        append_value_ref_delta(row, rows[i].scatter_drop, refs[i].scatter_drop);
        append_value_ref_delta(row, rows[i].momentum_ratio, refs[i].momentum_ratio);
        append_value_ref_delta(row, rows[i].transfer_fraction, refs[i].transfer_fraction);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table table_sweep(const Options& opt, KnVariant variant, const std::vector<ReferenceSweepRow>& refs)
{
    const PhysicalConstants pc = opt.constants();
    Table t;
    t.columns = {"energy_MeV"};
    for (const char* q : {"chi2_kn_vs_scattered", "chi2_sum_momentum", "chi2_sum_kinetic"}) {
        const std::string base(q);
        t.columns.push_back(base);
        t.columns.push_back(base + "_ref");
        t.columns.push_back(base + "_ratio");
    }
    const AngleGrid grid = AngleGrid::midpoints(opt.grid_points);
    const auto rows = chi2_sweep(reference_energies(), grid, variant, opt.min_rule(), pc);
    bool decreasing = true;
    bool below = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double c1 = rows[i].kn_vs_scattered.chi2;
        const double c2 = rows[i].sum_momentum.chi2;
        const double c3 = rows[i].sum_kinetic.chi2;
        if (i > 0 && !(c1 < rows[i - 1].kn_vs_scattered.chi2 &&
                       c2 < rows[i - 1].sum_momentum.chi2 &&
                       c3 < rows[i - 1].sum_kinetic.chi2)) {
            decreasing = false;
        }
        below = below && rows[i].kn_vs_scattered.below_critical &&
                rows[i].sum_momentum.below_critical && rows[i].sum_kinetic.below_critical;
        std::vector<Cell> row{rows[i].energy};
        row.push_back(c1);
        row.push_back(refs[i].kn_vs_scattered.value);
        row.push_back(c1 / refs[i].kn_vs_scattered.value);
        row.push_back(c2);
        row.push_back(refs[i].sum_momentum.value);
        row.push_back(c2 / refs[i].sum_momentum.value);
        row.push_back(c3);
        row.push_back(refs[i].sum_kinetic.value);
        row.push_back(c3 / refs[i].sum_kinetic.value);
        t.rows.push_back(std::move(row));
    }
    t.summary.push_back(std::string("decreasing: ") + (decreasing ? "yes" : "no"));
    if (grid.size() == kSweepGridPoints) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "below critical (%.4f): %s", kChiSquareCriticalDof1999,
                      below ? "yes" : "no");
        t.summary.push_back(buf);
    }
    return t;
}

Table table_amplitude_chi2(const PhysicalConstants& pc)
{
    const AmplitudeChiSquare computed =
        amplitude_chi2(amplitude_table(amplitude_chi2_energies(), KnVariant::Full, pc));

    std::vector<AmplitudeRow> printed;
    for (const auto& ref : reference_s1()) {
        if (ref.energy >= 1.0) {
            printed.push_back(AmplitudeRow{ref.energy, ref.kn_amplitude.value,
                                           ref.scatter_drop.value, ref.momentum_ratio.value,
                                           ref.transfer_fraction.value});
        }
    }
    const AmplitudeChiSquare from_printed = amplitude_chi2(printed);

    Table t;
    t.columns = {"statistic",           "chi2_first_principles", "chi2_printed_rows",
                 "chi2_published",      "dof",                   "critical_value",
                 "below_critical_first_principles", "below_critical_printed_rows"};
    const auto add = [&](const std::string& name, const ChiSquareReport& fp,
                         const ChiSquareReport& pr, double published) {
        t.rows.push_back({name, fp.chi2, pr.chi2, published, double(fp.dof),
                          kChiSquareCriticalDof7, std::string(fp.below_critical ? "yes" : "no"),
                          std::string(pr.below_critical ? "yes" : "no")});
    };
    add("transfer_vs_kn_amplitude", computed.transfer_vs_kn, from_printed.transfer_vs_kn,
        kPublishedAmplitudeChi2Transfer);
    add("momentum_vs_kn_amplitude", computed.momentum_vs_kn, from_printed.momentum_vs_kn,
        kPublishedAmplitudeChi2Momentum);
    return t;
}

int cmd_table(const Options& opt)
{
    Table t;
    if (opt.which == "s1") {
        t = table_s1(opt.constants());
    } else if (opt.which == "s2") {
        t = table_sweep(opt, KnVariant::Full, reference_s2());
    } else if (opt.which == "s3") {
        t = table_sweep(opt, KnVariant::NoInterference, reference_s3());
    } else if (opt.which == "amplitude-chi2") {
        t = table_amplitude_chi2(opt.constants());
    } else {
        throw UsageError("table: unknown table \"" + opt.which +
                         "\" (expected s1, s2, s3 or amplitude-chi2)");
    }
    emit(opt, "table", reference_energies(), t);
    return 0;
}

// ---------------------------------------------------------------------------
// total-xs

int cmd_total_xs(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    const std::vector<double> energies = effective_energies(opt, reference_energies());
    Table t;
    t.columns = {"energy_MeV", "sigma_re2", "sigma_barn", "sigma_ratio_2e_over_e"};
    for (double e : energies) {
        const double sigma = kn_total_cross_section(e, pc);
        const double sigma2 = kn_total_cross_section(2.0 * e, pc);
        t.rows.push_back({e, sigma, re2_to_barn(sigma, pc), sigma2 / sigma});
    }
    emit(opt, "total-xs", energies, t);
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
    std::vector<std::string> notes;
};

using CheckFn = CheckResult (*)(const Options&);

CheckResult run_guarded(const std::string& name, const Options& opt,
                        CheckResult (*fn)(const Options&))
{
    try {
        return fn(opt);
    } catch (const std::exception& e) {
        return CheckResult{name, false, std::string("exception: ") + e.what(), {}};
    }
}

CheckResult check_forward_unity(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    double worst = 0.0;
    for (double e : reference_energies()) {
        for (KnVariant v : {KnVariant::Full, KnVariant::NoInterference}) {
            worst = std::max(worst, std::abs(kn_differential(e, 0.0, v, pc) - 1.0));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |KN(0) - 1| = %.3e (tol 1e-14)", worst);
    return {"kn-forward-unity", worst <= 1e-14, buf, {}};
}

CheckResult check_thomson_total(const Options& opt)
{
    const double sigma = kn_total_cross_section(1e-6, opt.constants());
    const double thomson = 8.0 * kPi / 3.0;
    const double rel = std::abs(sigma - thomson) / thomson;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "sigma(1e-6 MeV) = %.6f re^2 vs 8pi/3 = %.6f (rel %.2e, tol 1e-3)",
                  sigma, thomson, rel);
    return {"thomson-total-limit", rel < 1e-3, buf, {}};
}

CheckResult check_kinematic_identities(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_cons = 0.0, worst_mom = 0.0, worst_wave = 0.0;
    bool monotone = true;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double hnu = std::exp(std::log(1e-5) + u01(rng) * (std::log(1e3) - std::log(1e-5)));
        const double phi = u01(rng) * kPi;
        const ScatterState s = scatter_state(hnu, phi, pc);

        const double lhs = hnu + pc.electron_rest_energy;
        worst_cons = std::max(worst_cons,
                              std::abs(lhs - (s.scattered_energy + s.electron_total)) / lhs);

        const double p_route = momentum_from_kinetic(s.electron_kinetic, pc);
        const double scale = std::max({s.electron_momentum, p_route, 1e-300});
        worst_mom = std::max(worst_mom, std::abs(s.electron_momentum - p_route) / scale);

        // hc/hnu' - hc/hnu restated as hc K / (hnu hnu'), the cancellation-free
        // equivalent, against the Compton shift (hc/m0c^2)(1 - cos phi).
        const double shift = pc.planck_hc * s.electron_kinetic / (hnu * s.scattered_energy);
        const double compton = pc.planck_hc / pc.electron_rest_energy * detail::one_minus_cos(phi);
        const double wscale = std::max({std::abs(shift), std::abs(compton), 1e-300});
        worst_wave = std::max(worst_wave, std::abs(shift - compton) / wscale);

        const double phi2 = phi + u01(rng) * (kPi - phi);
        monotone = monotone &&
                   scattered_photon_energy(hnu, phi2, pc) <= s.scattered_energy &&
                   electron_kinetic_energy(hnu, phi2, pc) >= s.electron_kinetic &&
                   electron_momentum(hnu, phi2, pc) >= s.electron_momentum;
    }
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "%d samples: conservation %.2e (tol 1e-12), momentum routes %.2e (tol 1e-10), "
                  "wavelength shift %.2e (tol 1e-10), monotone %s",
                  n, worst_cons, worst_mom, worst_wave, monotone ? "yes" : "no");
    return {"kinematic-identities",
            worst_cons <= 1e-12 && worst_mom <= 1e-10 && worst_wave <= 1e-10 && monotone, buf, {}};
}

CheckResult check_normalization_endpoints(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    double worst = 0.0;
    for (double e : {0.001, 1.0, 1000.0}) {
        const double ref = reference_angle(e, KnVariant::Full, pc);
        const AngleGrid diag = AngleGrid::endpoint_inclusive(201).including(ref);
        Eigen::Index ref_idx = 0;
        while (diag.angles[ref_idx] != ref) ++ref_idx;

        const Curve kn = kn_normalized(e, diag, KnVariant::Full, pc);
        const double kn_min_angle = kn_minimum(e, KnVariant::Full, pc).angle;
        const AngleGrid diag_min = diag.including(kn_min_angle);
        Eigen::Index min_idx = 0;
        while (diag_min.angles[min_idx] != kn_min_angle) ++min_idx;
        const Curve kn_m = kn_normalized(e, diag_min, KnVariant::Full, pc);

        const Curve h = scattered_energy_normalized_about(e, diag, ref, KnVariant::Full, pc);
        const Curve k = electron_kinetic_normalized_about(e, diag, ref, false, KnVariant::Full, pc);
        const Curve p = electron_momentum_normalized_about(e, diag, ref, false, KnVariant::Full, pc);

        worst = std::max({worst, std::abs(kn.values[0] - 1.0), std::abs(kn_m.values[min_idx]),
                          std::abs(h.values[ref_idx]), std::abs(h.values[0] - 1.0),
                          std::abs(k.values[ref_idx] - 1.0), std::abs(k.values[0]),
                          std::abs(p.values[ref_idx] - 1.0), std::abs(p.values[0])});

        const AngleGrid mid = AngleGrid::midpoints(std::min(opt.grid_points, 2000));
        const Curve hm = scattered_energy_normalized_about(e, mid, ref, KnVariant::Full, pc);
        const Curve km = electron_kinetic_normalized_about(e, mid, ref, false, KnVariant::Full, pc);
        worst = std::max(worst, (hm.values + km.values - 1.0).abs().maxCoeff());
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max endpoint/identity residual = %.3e (tol 1e-12)", worst);
    return {"normalization-endpoints", worst <= 1e-12, buf, {}};
}

CheckResult check_sweep_columns(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    const AngleGrid grid = AngleGrid::midpoints(opt.grid_points);
    const auto rows = chi2_sweep(reference_energies(), grid, KnVariant::Full,
                                 MinAngleRule::OwnVariant, pc);
    bool identical = true, decreasing = true, below = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        identical = identical && rows[i].kn_vs_scattered.chi2 == rows[i].sum_kinetic.chi2;
        if (i > 0) {
            decreasing = decreasing &&
                         rows[i].kn_vs_scattered.chi2 < rows[i - 1].kn_vs_scattered.chi2 &&
                         rows[i].sum_momentum.chi2 < rows[i - 1].sum_momentum.chi2;
        }
        if (grid.size() == kSweepGridPoints) {
            below = below && rows[i].kn_vs_scattered.below_critical &&
                    rows[i].sum_momentum.below_critical;
        }
    }
    std::string detail = std::string("columns (i)/(iii) bit-identical: ") +
                         (identical ? "yes" : "no") + ", strictly decreasing: " +
                         (decreasing ? "yes" : "no");
    if (grid.size() == kSweepGridPoints) {
        detail += std::string(", all below 1740.7049: ") + (below ? "yes" : "no");
    }
    return {"chi2-sweep-structure", identical && decreasing && below, detail, {}};
}

CheckResult check_s2_proximity(const Options& opt)
{
    if (opt.grid_points != kSweepGridPoints) {
        return {"s2-reference-proximity", true,
                "skipped: reference values are defined for the 2000-point grid", {}};
    }
    const PhysicalConstants pc = opt.constants();
    const auto rows = chi2_sweep(reference_energies(), AngleGrid::midpoints(2000),
                                 KnVariant::Full, MinAngleRule::OwnVariant, pc);
    const auto& refs = reference_s2();
    double worst_ratio = 1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (auto [c, r] : {std::pair{rows[i].kn_vs_scattered.chi2, refs[i].kn_vs_scattered.value},
                            std::pair{rows[i].sum_momentum.chi2, refs[i].sum_momentum.value},
                            std::pair{rows[i].sum_kinetic.chi2, refs[i].sum_kinetic.value}}) {
            const double ratio = c / r;
            if (std::abs(std::log(ratio)) > std::abs(std::log(worst_ratio))) worst_ratio = ratio;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst computed/reference ratio = %.4f (window [0.5, 2])",
                  worst_ratio);
    return {"s2-reference-proximity", worst_ratio > 0.5 && worst_ratio < 2.0, buf, {}};
}

CheckResult check_s3_shape(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    const AngleGrid grid = AngleGrid::midpoints(opt.grid_points);
    const auto rows = chi2_sweep(reference_energies(), grid, KnVariant::NoInterference,
                                 MinAngleRule::OwnVariant, pc);
    bool low_tiny = true;
    std::size_t arg_max = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].energy <= 0.001) low_tiny = low_tiny && rows[i].kn_vs_scattered.chi2 < 1e-3;
        if (rows[i].kn_vs_scattered.chi2 > rows[arg_max].kn_vs_scattered.chi2) arg_max = i;
    }
    const double peak_energy = rows[arg_max].energy;
    const bool peak_ok = peak_energy >= 0.5 && peak_energy <= 5.0;
    bool tail_ok = true;
    if (grid.size() == kSweepGridPoints) {
        const auto& refs = reference_s3();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].energy >= 10.0) {
                const double ratio = rows[i].kn_vs_scattered.chi2 / refs[i].kn_vs_scattered.value;
                tail_ok = tail_ok && ratio > 0.5 && ratio < 2.0;
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "column (i) < 1e-3 up to 0.001 MeV: %s, interior peak at %g MeV, "
                  "tail within factor 2: %s",
                  low_tiny ? "yes" : "no", peak_energy, tail_ok ? "yes" : "no");
    return {"s3-shape", low_tiny && peak_ok && tail_ok, buf, {}};
}

CheckResult check_s1_reference(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    const auto rows = amplitude_table(reference_energies(), KnVariant::Full, pc);
    const auto& refs = reference_s1();
    CheckResult result{"s1-reference", true, "", {}};
    int checked = 0, flagged = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const struct {
            S1Column column;
            const char* name;
            double computed;
            ReferenceValue ref;
        } cells[] = {
            {S1Column::KnAmplitude, "kn_amplitude", rows[i].kn_amplitude, refs[i].kn_amplitude},
            {S1Column::ScatterDrop, "scatter_drop", rows[i].scatter_drop, refs[i].scatter_drop},
            {S1Column::MomentumRatio, "momentum_ratio", rows[i].momentum_ratio,
             refs[i].momentum_ratio},
            {S1Column::TransferFraction, "transfer_fraction", rows[i].transfer_fraction,
             refs[i].transfer_fraction},
        };
        for (const auto& cell : cells) {
            const double delta = cell.computed - cell.ref.value;
            char buf[192];
            if (is_known_s1_deviation(rows[i].energy, cell.column)) {
                ++flagged;
                std::snprintf(buf, sizeof(buf),
                              "known deviation %g MeV %s: computed %.6g, reference %.6g, delta %+.2e",
                              rows[i].energy, cell.name, cell.computed, cell.ref.value, delta);
                result.notes.push_back(buf);
                continue;
            }
            ++checked;
            if (std::abs(delta) > cell.ref.tolerance) {
                result.pass = false;
                std::snprintf(buf, sizeof(buf),
                              "FAIL %g MeV %s: computed %.6g, reference %.6g, delta %+.2e, tol %.0e",
                              rows[i].energy, cell.name, cell.computed, cell.ref.value, delta,
                              cell.ref.tolerance);
                result.notes.push_back(buf);
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d cells within one printed digit, %d known deviations reported",
                  checked, flagged);
    result.detail = buf;
    return result;
}

CheckResult check_amplitude_chi2(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    const auto fp = amplitude_chi2(amplitude_table(amplitude_chi2_energies(), KnVariant::Full, pc));
    std::vector<AmplitudeRow> printed;
    for (const auto& ref : reference_s1()) {
        if (ref.energy >= 1.0) {
            printed.push_back(AmplitudeRow{ref.energy, ref.kn_amplitude.value,
                                           ref.scatter_drop.value, ref.momentum_ratio.value,
                                           ref.transfer_fraction.value});
        }
    }
    const auto pr = amplitude_chi2(printed);
    const bool ok = fp.transfer_vs_kn.below_critical && fp.momentum_vs_kn.below_critical &&
                    pr.transfer_vs_kn.below_critical && pr.momentum_vs_kn.below_critical &&
                    pr.transfer_vs_kn.chi2 >= 0.010 && pr.transfer_vs_kn.chi2 <= 0.013;
    char buf[224];
    std::snprintf(buf, sizeof(buf),
                  "transfer: %.5f (printed rows %.5f, published %.5f); momentum: %.5f "
                  "(printed rows %.5f, published %.5f); critical %.4f",
                  fp.transfer_vs_kn.chi2, pr.transfer_vs_kn.chi2, kPublishedAmplitudeChi2Transfer,
                  fp.momentum_vs_kn.chi2, pr.momentum_vs_kn.chi2, kPublishedAmplitudeChi2Momentum,
                  kChiSquareCriticalDof7);
    return {"amplitude-chi2", ok, buf, {}};
}

CheckResult check_quadrature_oracle(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    double worst = 0.0;
    for (double e : {0.001, 1.0, 1000.0}) {
        const double sigma = kn_total_cross_section(e, pc);
        const int n = 1000000;
        const double h = kPi / n;
        double acc = 0.0;  // endpoints contribute zero through sin(phi)
        for (int i = 1; i < n; ++i) {
            const double phi = i * h;
            acc += kn_differential(e, phi, KnVariant::Full, pc) * std::sin(phi);
        }
        const double trapezoid = 2.0 * kPi * acc * h;
        worst = std::max(worst, std::abs(sigma - trapezoid) / trapezoid);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "max |simpson - trapezoid(1e6)| / trapezoid = %.2e (tol 1e-7)", worst);
    return {"quadrature-oracle", worst <= 1e-7, buf, {}};
}

CheckResult check_total_xs_scaling(const Options& opt)
{
    const PhysicalConstants pc = opt.constants();
    bool ok = true;
    std::string values;
    for (double e : {100.0, 250.0, 500.0}) {
        const double ratio = kn_total_cross_section(2.0 * e, pc) / kn_total_cross_section(e, pc);
        char buf[64];
        std::snprintf(buf, sizeof(buf), " sigma(%g)/sigma(%g)=%.4f", 2.0 * e, e, ratio);
        values += buf;
        ok = ok && ratio > 0.50 && ratio < 0.62;
    }
    return {"total-xs-scaling", ok, "window (0.50, 0.62):" + values, {}};
}

CheckResult check_determinism(const Options& opt)
{
    Options run = opt;
    run.energies = kFigure23Energies;
    run.figure = "2";
    const auto render = [&]() {
        const PhysicalConstants pc = run.constants();
        const AngleGrid grid = AngleGrid::endpoint_inclusive(run.grid_points);
        std::ostringstream os;
        Table t;
        t.columns = {"angle_rad"};
        std::vector<Eigen::ArrayXd> cols;
        for (double e : run.energies) {
            for (MatchKind kind : {MatchKind::DiffScatteredEnergy, MatchKind::SumMomentum,
                                   MatchKind::SumKinetic}) {
                cols.push_back(match_curve(e, grid, kind, KnVariant::Full,
                                           MinAngleRule::OwnVariant, pc)
                                   .values);
            }
        }
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            std::vector<Cell> row{grid.angles[i]};
            for (const auto& col : cols) row.push_back(col[i]);
            t.rows.push_back(std::move(row));
        }
        write_csv(os, t);
        return os.str();
    };
    const bool same = render() == render();
    return {"determinism", same, same ? "two renders byte-identical" : "renders differ", {}};
}

int cmd_verify(const Options& opt)
{
    validate_common(opt);
    const std::pair<const char*, CheckFn> checks[] = {
        {"kn-forward-unity", check_forward_unity},
        {"thomson-total-limit", check_thomson_total},
        {"kinematic-identities", check_kinematic_identities},
        {"normalization-endpoints", check_normalization_endpoints},
        {"chi2-sweep-structure", check_sweep_columns},
        {"s2-reference-proximity", check_s2_proximity},
        {"s3-shape", check_s3_shape},
        {"s1-reference", check_s1_reference},
        {"amplitude-chi2", check_amplitude_chi2},
        {"quadrature-oracle", check_quadrature_oracle},
        {"total-xs-scaling", check_total_xs_scaling},
        {"determinism", check_determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : checks) {
        const CheckResult r = run_guarded(name, opt, fn);
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        for (const auto& note : r.notes) std::cout << "       " << note << '\n';
        if (!r.pass) ++failed;
    }
    std::cout << "verify: " << std::size(checks) << " checks, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    Options opt;
    CLI::App app{"Compton/Klein-Nishina cross-section matching toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value file mirroring the global flags");

    app.add_option("--energies", opt.energies, "incident photon energies [MeV], comma separated")
        ->delimiter(',');
    app.add_option("--grid-points", opt.grid_points, "angle grid size (default 2000)");
    app.add_option("--variant", opt.variant, "cross-section variant")
        ->check(CLI::IsMember({"full", "no-sin2"}));
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", opt.out_path, "write the artifact to PATH instead of stdout");
    app.add_option("--precision", opt.precision, "display decimal places (default 4)");
    app.add_option("--fig3-min-rule", opt.fig3_rule,
                   "sub-MeV reference-angle rule for the sin^2=0 matching")
        ->check(CLI::IsMember({"own", "full"}));
    app.add_flag("--degrees", opt.degrees, "numeric --angle values are degrees");

    CLI::App* kinematics = app.add_subcommand(
        "kinematics", "scattered photon and recoil electron state at (energy, angle)");
    kinematics->fallthrough();
    kinematics->add_option("--energy", opt.energy, "incident photon energy [MeV]")->required();
    kinematics->add_option("--angle", opt.angle, "scattering angle (radians, pi, pi/2)")
        ->required();

    CLI::App* kn = app.add_subcommand(
        "kn", "differential cross section at (energy, angle), or its minimum over angle");
    kn->fallthrough();
    kn->add_option("--energy", opt.energy, "incident photon energy [MeV]")->required();
    CLI::Option* kn_angle = kn->add_option("--angle", opt.angle, "scattering angle");

    CLI::App* curves = app.add_subcommand("curves", "figure curve bundles (1a..1h, 2, 3)");
    curves->fallthrough();
    curves->add_option("--figure", opt.figure, "figure id")->required();

    CLI::App* table = app.add_subcommand("table", "reference-table reproductions with deltas");
    table->fallthrough();
    table->add_option("which", opt.which, "s1 | s2 | s3 | amplitude-chi2")->required();

    CLI::App* total = app.add_subcommand("total-xs", "total cross section per energy");
    total->fallthrough();

    CLI::App* verify = app.add_subcommand("verify", "run the full invariant suite");
    verify->fallthrough();
    verify->add_option("--electron-rest-energy", opt.electron_rest_energy, "")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(kinematics)) {
            validate_common(opt);
            return cmd_kinematics(opt);
        }
        if (app.got_subcommand(kn)) {
            validate_common(opt);
            return cmd_kn(opt, kn_angle->count() > 0);
        }
        if (app.got_subcommand(curves)) {
            validate_common(opt);
            return cmd_curves(opt);
        }
        if (app.got_subcommand(table)) {
            validate_common(opt);
            return cmd_table(opt);
        }
        if (app.got_subcommand(total)) {
            validate_common(opt);
            return cmd_total_xs(opt);
        }
        if (app.got_subcommand(verify)) {
            return cmd_verify(opt);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
