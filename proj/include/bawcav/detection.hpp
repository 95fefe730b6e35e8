#pragma once

// Readout figures of merit: optomechanical displacement, piezoelectric
// zero-point current, electrode overlap, optimal electrode size and the
// resulting parasitic shunt.

#include <bawcav/cavity.hpp>
#include <bawcav/constants.hpp>
#include <bawcav/errors.hpp>
#include <bawcav/material.hpp>
#include <bawcav/quadrature.hpp>
#include <bawcav/specfun.hpp>

#include <cmath>
#include <string>

namespace bawcav {

/// Upper end of the motional resistance of cryogenic SC-cut resonators at
/// high overtones, ohms. Shunt impedances are compared against it.
inline constexpr double motional_resistance_ceiling = 100.0;

/// Overlap target for three-standard-deviation coverage per axis, erf(3/sqrt 2)^2.
inline double default_mu_opt() {
    const double per_axis = specfun::erf(3.0 / std::sqrt(2.0));
    return per_axis * per_axis;
}

namespace detail {

// Share of int_R e^{-t^2/2} H_m(t) dt inside |t| <= s; the full-line value
// is sqrt(2 pi) m! / (m/2)! for even m and zero for odd m.
inline double axis_overlap(int m, double s) {
    if (s <= 0.0) return 0.0;
    if (m == 0) return specfun::erf(s / std::sqrt(2.0));
    if (m % 2 != 0) return 0.0;
    double norm = std::sqrt(2.0 * constants::pi);
    for (int k = m / 2 + 1; k <= m; ++k) norm *= k;
    const double cut = hermite_gauss_cutoff(m) * std::sqrt(2.0);
    if (s >= cut) return 1.0;
    auto f = [m](double t) { return std::exp(-0.5 * t * t) * specfun::hermite(m, t); };
    specfun::QuadratureSpec q;
    q.abs_tolerance = 1e-15;
    q.rel_tolerance = 1e-12;
    return 2.0 * specfun::integrate_1d(f, 0.0, s, q).value / norm;
}

}  // namespace detail

/// Electrode overlap factor mu: the part of int u ds captured by a square
/// electrode of half-width L_tilde, relative to the infinite plane.
/// For (n,0,0): Erf(sqrt(n) nu_x / sqrt 2) Erf(sqrt(n) nu_y / sqrt 2), nu = sqrt(pi alpha) L_tilde.
inline double overlap_factor(ModeIndex mode, Curvatures c, double L_tilde) {
    if (!(L_tilde >= 0.0)) throw DomainError("overlap_factor: L_tilde must be >= 0");
    const double rn = std::sqrt(static_cast<double>(mode.n()));
    const double nu_x = std::sqrt(constants::pi * c.alpha) * L_tilde;
    const double nu_y = std::sqrt(constants::pi * c.beta) * L_tilde;
    return detail::axis_overlap(mode.m(), rn * nu_x) * detail::axis_overlap(mode.p(), rn * nu_y);
}

struct OptomechReadout {
    double x_detect;        ///< sqrt<x^2> at the plate centre, m
    double gain_over_flat;  ///< x_detect / x_zpf_flat = sqrt(xi)
};

/// A narrow beam at the plate centre sees the full displacement quadrature.
inline OptomechReadout optomech_displacement(const ModeCharacterization& c) {
    return {c.x_zpf, c.x_zpf / c.x_zpf_flat};
}

/// RMS zero-point current of the piezoelectric readout,
///   sqrt<I^2> = e_eff pi mu / (sqrt(alpha beta) h0 m_flat) sqrt(xi) sqrt<p^2_flat,n>,
/// with e_eff taken as e_z.
inline double piezo_current_zpf(const MaterialParams& mat, const CavityGeometry& geo, ModeIndex mode,
                                Trapping t, double mu,
                                FrequencyModel model = FrequencyModel::leading_order) {
    if (!(mat.e_z > 0.0)) {
        throw UnsupportedReadout("piezoelectric readout requires e_z > 0");
    }
    if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("piezo_current_zpf: mu must lie in [0, 1]");
    const Curvatures c = curvatures_from_trapping(t, geo.L);
    const MassResult mass = effective_mass(mat, geo, mode, t);
    const Zpf q = zpf(mat, geo, mode, t, model);
    return mat.e_z * constants::pi * mu / (std::sqrt(c.alpha * c.beta) * geo.h0 * mass.m_flat) *
           std::sqrt(mass.xi) * q.p_zpf_flat;
}

/// Smallest electrode half-width reaching overlap mu_opt for alpha = beta:
///   L_opt = (L / eta) sqrt(2/n) Erf^{-1}(sqrt(mu_opt)).
inline double optimal_electrode(const CavityGeometry& geo, double eta, int n, double mu_opt) {
    require_odd_overtone(n);
    if (!(eta > 0.0)) throw ValidationError("eta", "eta must be > 0");
    if (!(mu_opt > 0.0 && mu_opt < 1.0)) throw ValidationError("mu_opt", "mu_opt must lie in (0, 1)");
    return geo.L / eta * std::sqrt(2.0 / n) * specfun::erf_inv(std::sqrt(mu_opt));
}

struct ElectrodeDesign {
    int n = 1;
    double L_tilde = 0.0;    ///< optimal electrode half-width, m
    double mu = 0.0;         ///< overlap achieved at L_tilde
    double mu_opt = 0.0;     ///< requested overlap
    double C0 = 0.0;         ///< parasitic capacitance, F
    double Z_closed = 0.0;    ///< |Z| from the closed-form shunt expression, ohm
    double Z_derived = 0.0;  ///< 1 / (omega_n C0), ohm
};

/// Optimal electrode and its parasitic shunt.
///
/// C0 = eps_z (2 L_opt)^2 / (2 h0): square electrodes of side 2 L_opt across the
/// full thickness, no fringing. Z_derived uses the leading-order omega_n with the
/// overtone-independent c^_z (its high-overtone limit c_bar_z), so C0 ~ 1/n and
/// omega_n ~ n cancel exactly. Z_closed is
///   2 h0^2 / (eps_z L^2) sqrt(rho / c^_z) eta^2 Erf^2(sqrt(mu_opt)).
inline ElectrodeDesign shunt_impedance(const MaterialParams& mat, const CavityGeometry& geo, double eta, int n,
                                       double mu_opt) {
    ElectrodeDesign d;
    d.n = n;
    d.mu_opt = mu_opt;
    d.L_tilde = optimal_electrode(geo, eta, n, mu_opt);
    const Curvatures c = curvatures_from_trapping(Trapping::symmetric(eta), geo.L);
    d.mu = overlap_factor(ModeIndex::excitable(n), c, d.L_tilde);
    const double side = 2.0 * d.L_tilde;
    d.C0 = mat.eps_z * side * side / (2.0 * geo.h0);
    const double c_hat = mat.c_bar_z;
    const double omega = n * constants::pi / (2.0 * geo.h0) * std::sqrt(c_hat / mat.rho);
    d.Z_derived = 1.0 / (omega * d.C0);
    const double e = specfun::erf(std::sqrt(mu_opt));
    d.Z_closed = 2.0 * geo.h0 * geo.h0 / (mat.eps_z * geo.L * geo.L) * std::sqrt(mat.rho / c_hat) * eta * eta * e * e;
    return d;
}

struct MotionalComparison {
    double ratio;     ///< Z_shunt / 100 ohm
    bool negligible;  ///< shunt exceeds the motional resistance by more than 100x
};

inline MotionalComparison shunt_vs_motional(double z_shunt) {
    if (!(std::isfinite(z_shunt) && z_shunt > 0.0)) {
        throw DomainError("shunt_vs_motional: impedance must be > 0");
    }
    const double ratio = z_shunt / motional_resistance_ceiling;
    return {ratio, ratio > 100.0};
}

}  // namespace bawcav
