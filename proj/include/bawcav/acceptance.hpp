#pragma once

// Reproduction checks against the published quartz numbers, plus seeded
// property sweeps. Shared by `bawcav paper-report` and the acceptance test.

#include <bawcav/cavity.hpp>
#include <bawcav/constants.hpp>
#include <bawcav/detection.hpp>
#include <bawcav/material.hpp>
#include <bawcav/membrane.hpp>
#include <bawcav/oracle.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace bawcav::acceptance {

/// One measured quantity compared with its reference value.
struct Check {
    std::string label;
    double measured = 0.0;
    double reference = 0.0;
    std::string tolerance;  ///< human-readable, e.g. "+-3%"
    bool pass = false;
};

struct Criterion {
    int id = 0;
    std::string title;
    std::vector<Check> checks;

    [[nodiscard]] bool pass() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

struct Report {
    std::vector<Criterion> criteria;

    [[nodiscard]] bool all_pass() const {
        return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass(); });
    }
};

struct Inputs {
    MaterialParams material = quartz_example();
    MaterialParams piezo_material = quartz_piezo_example();
    CavityGeometry geometry = quartz_geometry();
    MembraneSpec membrane = quartz_membrane();
    double temperature = 0.02;   ///< K
    double eta_quoted = 10.7;    ///< trapping parameter used for the published xi and electrode figures
    std::uint64_t seed = oracle::default_oracle_seed;
    int oracle_cases = 20;
    int property_cases = 200;
};

// Tolerances.
inline constexpr double x_flat_reference = 4.7e-20;
inline constexpr double x_flat_rel_tol = 0.03;
inline constexpr double p_flat_reference = 1e-15;
inline constexpr double p_flat_factor = 1.5;
inline constexpr double xi_rel_tol = 0.10;
inline constexpr double occupancy_low_reference = 132.0;
inline constexpr double occupancy_low_tol = 2.0;
inline constexpr double occupancy_high_reference = 0.22;
inline constexpr double occupancy_high_tol = 0.01;
inline constexpr double f1_min_hz = 3.10e6;
inline constexpr double f1_max_hz = 3.20e6;
inline constexpr double membrane_f_reference = 149e3;
inline constexpr double membrane_f_rel_tol = 0.01;
inline constexpr double membrane_x_reference = 6.2e-19;
inline constexpr double membrane_x_rel_tol = 0.03;
inline constexpr double membrane_n_reference = 3230.0;
inline constexpr double membrane_n_rel_tol = 0.20;
inline constexpr double c0_factor = 6.0;
inline constexpr double z_reference = 312e3;
inline constexpr double z_factor = 3.0;
inline constexpr double z_invariance_tol = 1e-12;
inline constexpr double ladder_tol = 1e-4;
inline constexpr double curvature_rel_tol = 1e-3;
inline constexpr double bracket_rel_tol = 1e-3;
inline constexpr double uncertainty_tol = 1e-12;
inline constexpr double saturated_x_tol = 1e-6;
inline constexpr double round_trip_tol = 1e-10;

namespace detail {

inline double rel(double measured, double reference) { return std::abs(measured - reference) / std::abs(reference); }

inline Check relative(std::string label, double measured, double reference, double tol, const std::string& text) {
    return {std::move(label), measured, reference, text, rel(measured, reference) <= tol};
}

inline Check absolute(std::string label, double measured, double reference, double tol, const std::string& text) {
    return {std::move(label), measured, reference, text, std::abs(measured - reference) <= tol};
}

inline Check factor(std::string label, double measured, double reference, double f, const std::string& text) {
    const double r = measured / reference;
    return {std::move(label), measured, reference, text, r <= f && r >= 1.0 / f};
}

// A check whose measured value is a worst-case deviation and whose reference is 0.
inline Check bound(std::string label, double worst, double tol, const std::string& text) {
    return {std::move(label), worst, 0.0, text, worst <= tol};
}

inline double hz(double omega) { return omega / (2.0 * constants::pi); }

}  // namespace detail

inline Criterion flat_plate_displacement(const Inputs& in) {
    const auto c = characterize(in.material, in.geometry, ModeIndex::excitable(1), in.temperature);
    return {1, "flat-plate displacement ZPF, n=1",
            {detail::relative("x_zpf_flat [m]", c.x_zpf_flat, x_flat_reference, x_flat_rel_tol, "+-3%")}};
}

inline Criterion flat_plate_momentum(const Inputs& in) {
    const auto c = characterize(in.material, in.geometry, ModeIndex::excitable(1), in.temperature);
    return {2, "flat-plate momentum ZPF, n=1",
            {detail::factor("p_zpf_flat [kg m/s]", c.p_zpf_flat, p_flat_reference, p_flat_factor, "factor 1.5")}};
}

inline Criterion geometric_factors(const Inputs& in) {
    Criterion out{3, "geometric factor at the quoted eta", {}};
    const Trapping t = Trapping::symmetric(in.eta_quoted);
    const std::pair<int, double> cases[] = {{7, 1e3}, {37, 5e3}, {227, 3.3e4}};
    for (const auto& [n, ref] : cases) {
        const double xi = geometric_factor(ModeIndex::excitable(n), t);
        out.checks.push_back(detail::relative("xi(n=" + std::to_string(n) + ")", xi, ref, xi_rel_tol, "+-10%"));
    }
    return out;
}

inline Criterion thermal_occupancies(const Inputs& in) {
    const double w1 = 2.0 * constants::pi * 3.138e6;
    const double w227 = 2.0 * constants::pi * 712.5e6;
    return {4, "thermal occupancy at the quoted temperature",
            {detail::absolute("n_th(3.138 MHz)", thermal_occupancy(w1, in.temperature), occupancy_low_reference,
                              occupancy_low_tol, "+-2"),
             detail::absolute("n_th(712.5 MHz)", thermal_occupancy(w227, in.temperature),
                              occupancy_high_reference, occupancy_high_tol, "+-0.01")}};
}

inline Criterion overtone_frequencies(const Inputs& in) {
    const double f1 = detail::hz(mode_frequency(in.material, in.geometry, ModeIndex::excitable(1)));
    const double f227 = detail::hz(mode_frequency(in.material, in.geometry, ModeIndex::excitable(227)));
    Criterion out{5, "overtone frequencies", {}};
    // exact only when c^_z does not depend on n
    const bool piezo_free = in.material.e_z == 0.0;
    out.checks.push_back({"f(227)/f(1)", f227 / f1, 227.0, piezo_free ? "exact" : "+-1e-3",
                          piezo_free ? f227 / f1 == 227.0 : detail::rel(f227 / f1, 227.0) <= 1e-3});
    out.checks.push_back({"f(1) [Hz]", f1, 0.5 * (f1_min_hz + f1_max_hz), "[3.10, 3.20] MHz",
                          f1 >= f1_min_hz && f1 <= f1_max_hz});
    return out;
}

inline Criterion membrane_baseline(const Inputs& in) {
    const double omega = membrane_frequency(in.membrane);
    const MembraneZpf z = membrane_zpf(in.membrane);
    return {6, "stressed membrane baseline",
            {detail::relative("f(1,1) [Hz]", detail::hz(omega), membrane_f_reference, membrane_f_rel_tol, "+-1%"),
             detail::relative("x_zpf [m]", z.x_zpf, membrane_x_reference, membrane_x_rel_tol, "+-3%"),
             detail::relative("n_th", thermal_occupancy(omega, in.temperature), membrane_n_reference,
                              membrane_n_rel_tol, "+-20%")}};
}

inline Criterion electrode_figures(const Inputs& in) {
    Criterion out{7, "optimal electrode and parasitic shunt", {}};
    const double mu_opt = default_mu_opt();
    const int overtones[] = {1, 7, 37, 227};
    double z_first = 0.0;
    double worst_spread = 0.0;
    for (const int n : overtones) {
        const ElectrodeDesign d = shunt_impedance(in.piezo_material, in.geometry, in.eta_quoted, n, mu_opt);
        out.checks.push_back(
            detail::factor("C0(n=" + std::to_string(n) + ") [F]", d.C0, 0.5e-12 / n, c0_factor, "factor 6"));
        if (n == 1) {
            z_first = d.Z_derived;
            out.checks.push_back(detail::factor("Z(n=1) [ohm]", d.Z_closed, z_reference, z_factor, "factor 3"));
        }
        worst_spread = std::max(worst_spread, detail::rel(d.Z_derived, z_first));
    }
    out.checks.push_back(detail::bound("max |Z_derived(n)/Z_derived(1) - 1|", worst_spread, z_invariance_tol,
                                       "<= 1e-12"));
    return out;
}

inline Criterion oracle_equivalence(const Inputs& in) {
    const oracle::OracleReport rep = oracle::run_closed_form_oracles(in.seed, in.oracle_cases);
    Criterion out{8, "closed forms vs quadrature oracles", {}};
    const char* families[] = {"escape(n,0,0)", "escape(n,2,2)", "mass(n,0,0)", "mass(n,2,2)", "overlap(n,0,0)"};
    for (const char* fam : families) {
        double worst = 0.0;
        int count = 0;
        bool ok = true;
        for (const auto& c : rep.checks) {
            if (c.family != fam) continue;
            worst = std::max(worst, c.rel_error);
            ok = ok && c.pass;
            ++count;
        }
        out.checks.push_back({std::string(fam) + " worst rel (" + std::to_string(count) + " cases)", worst, 0.0,
                              "<= 1e-8", ok && count > 0});
    }
    return out;
}

inline Criterion eigensolver(const Inputs& in) {
    const oracle::EigenChecks e = oracle::eigen_validation(in.material, in.geometry, 1);
    return {9, "finite-difference trap eigensolve, n=1",
            {detail::absolute("ladder ratio", e.ladder_ratio, 1.0, ladder_tol, "+-1e-4"),
             detail::relative("envelope curvature [1/m^2]", e.fitted_curvature, e.analytic_curvature,
                              curvature_rel_tol, "+-0.1%"),
             detail::relative("omega^2(n,2,0)/omega^2(n,0,0)", e.omega_ratio_sq_numeric, e.omega_ratio_sq_closed,
                              bracket_rel_tol, "+-1e-3")}};
}

/// Seeded random sweeps of the structural properties of the mode algebra.
inline Criterion property_suites(const Inputs& in) {
    std::mt19937_64 rng(in.seed);
    std::uniform_int_distribution<int> odd(0, 150);
    std::uniform_int_distribution<int> low_odd(0, 7);        // n in 1..15
    std::uniform_int_distribution<int> high_odd(3, 150);     // n in 7..301
    std::uniform_real_distribution<double> eta_dist(0.05, 12.0);
    std::uniform_real_distribution<double> trapped(0.5, 12.0);
    std::uniform_real_distribution<double> ordered(1.0, 12.0);
    std::uniform_real_distribution<double> saturated(5.0, 12.0);
    std::uniform_real_distribution<double> mu_dist(0.05, 0.999);
    const MaterialParams& mat = in.material;
    const CavityGeometry& geo = in.geometry;

    double worst_uncertainty = 0.0;
    int xi_eta_violations = 0;
    int xi_n_violations = 0;
    int xi_mode_violations = 0;
    double worst_saturation = 0.0;
    double worst_round_trip = 0.0;

    for (int i = 0; i < in.property_cases; ++i) {
        const int n = 2 * odd(rng) + 1;
        const double eta = eta_dist(rng);
        const ModeIndex base = ModeIndex::excitable(n);

        CharacterizeOptions opts;
        opts.eta_override = eta;
        const auto c = characterize(mat, geo, base, in.temperature, opts);
        const double product = c.x_zpf * c.p_zpf;
        const double h2 = constants::hbar * constants::hbar / 4.0;
        worst_uncertainty = std::max(worst_uncertainty, std::abs(product * product - h2) / h2);

        const double et = trapped(rng);
        const double xi = geometric_factor(base, Trapping::symmetric(et));
        if (!(geometric_factor(base, Trapping::symmetric(et * 1.01)) > xi)) ++xi_eta_violations;
        if (!(geometric_factor(ModeIndex::excitable(n + 2), Trapping::symmetric(et)) > xi)) ++xi_n_violations;

        const int nl = 2 * low_odd(rng) + 1;
        const double eo = ordered(rng);
        if (!(geometric_factor(ModeIndex::excitable(nl), Trapping::symmetric(eo)) >
              geometric_factor(ModeIndex::excitable(nl, 2, 2), Trapping::symmetric(eo)))) {
            ++xi_mode_violations;
        }

        CharacterizeOptions sat;
        sat.eta_override = saturated(rng);
        const int nh = 2 * high_odd(rng) + 1;
        const double x7 = characterize(mat, geo, ModeIndex::excitable(7), in.temperature, sat).x_zpf;
        const double xn = characterize(mat, geo, ModeIndex::excitable(nh), in.temperature, sat).x_zpf;
        worst_saturation = std::max(worst_saturation, std::abs(xn - x7) / x7);

        const double mu = mu_dist(rng);
        const double lt = optimal_electrode(geo, eta, n, mu);
        const double back = overlap_factor(base, curvatures_from_trapping(Trapping::symmetric(eta), geo.L), lt);
        worst_round_trip = std::max(worst_round_trip, std::abs(back - mu));
    }

    return {10, "property suites (" + std::to_string(in.property_cases) + " seeded cases)",
            {detail::bound("max |x p / (hbar/2) squared - 1|", worst_uncertainty, uncertainty_tol, "<= 1e-12"),
             detail::bound("xi not increasing in eta", xi_eta_violations, 0.0, "0 cases"),
             detail::bound("xi not increasing in n", xi_n_violations, 0.0, "0 cases"),
             detail::bound("xi(n,0,0) <= xi(n,2,2)", xi_mode_violations, 0.0, "0 cases"),
             detail::bound("max |x_zpf(n)/x_zpf(7) - 1| saturated", worst_saturation, saturated_x_tol, "<= 1e-6"),
             detail::bound("max |mu round trip|", worst_round_trip, round_trip_tol, "<= 1e-10")}};
}

/// Runs every criterion; a criterion that throws is recorded as failed.
inline Report evaluate(const Inputs& in = {}) {
    using Fn = Criterion (*)(const Inputs&);
    const std::pair<int, Fn> all[] = {
        {1, flat_plate_displacement}, {2, flat_plate_momentum}, {3, geometric_factors},
        {4, thermal_occupancies},     {5, overtone_frequencies}, {6, membrane_baseline},
        {7, electrode_figures},       {8, oracle_equivalence},   {9, eigensolver},
        {10, property_suites},
    };
    Report rep;
    for (const auto& [id, fn] : all) {
        try {
            rep.criteria.push_back(fn(in));
        } catch (const std::exception& e) {
            rep.criteria.push_back({id, std::string("error: ") + e.what(), {{"exception", 0.0, 0.0, "", false}}});
        }
    }
    return rep;
}

}  // namespace bawcav::acceptance
