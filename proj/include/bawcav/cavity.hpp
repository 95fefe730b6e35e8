#pragma once

// Curved-plate thickness-mode cavity: trapped Hermite-Gaussian mode shapes,
// trapping parameters, escape (tunnelling) probability, frequencies,
// effective mass, zero-point fluctuations and thermal occupancy.
//
// Conventions
//  * h0 is the half-thickness, L the half-width of a square plate.
//  * In-plane coordinate t = sqrt(alpha n pi) x, so u^2 = e^{-t^2} H_m(t)^2
//    and the plate edge sits at t = sqrt(n) eta.
//  * Effective masses are normalised by the Gaussian envelope amplitude
//    (u = 1 at the origin for m = p = 0), which is what the closed forms
//    for both the (n,0,0) and (n,2,2) families assume.

#include <bawcav/constants.hpp>
#include <bawcav/errors.hpp>
#include <bawcav/material.hpp>
#include <bawcav/quadrature.hpp>
#include <bawcav/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace bawcav {

struct CavityGeometry {
    double L = 0.0;   ///< plate half-width, m
    double h0 = 0.0;  ///< plate half-thickness, m
    double R = 0.0;   ///< radius of curvature, m
    std::optional<double> L_tilde;  ///< electrode half-width, m

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(std::isfinite(v) && v > 0.0)) {
                throw ValidationError(name, std::string("geometry: ") + name + " must be > 0");
            }
        };
        positive(L, "L");
        positive(h0, "h0");
        positive(R, "R");
        // thin-plate requirement 2 h0 << R, enforced as a factor of ten
        if (!(2.0 * h0 < R / 10.0)) throw ValidationError("h0", "geometry: 2*h0 must be < R/10");
        if (L_tilde) {
            positive(*L_tilde, "L_tilde");
            if (!(*L_tilde < L)) throw ValidationError("L_tilde", "geometry: L_tilde must be < L");
        }
    }
};

/// Device of the worked quartz example: L = 15 mm, h0 = 0.5 mm, R = 300 mm.
inline CavityGeometry quartz_geometry() { return {0.015, 5e-4, 0.3, std::nullopt}; }

class ModeIndex {
public:
    /// Piezoelectrically excitable mode: n odd, m and p even.
    static ModeIndex excitable(int n, int m = 0, int p = 0) {
        require_odd_overtone(n);
        if (m < 0 || m % 2 != 0) throw ValidationError("m", "in-plane number m must be even and >= 0");
        if (p < 0 || p % 2 != 0) throw ValidationError("p", "in-plane number p must be even and >= 0");
        return {n, m, p};
    }

    /// Any non-negative indices. Only for oracle checks of the mode algebra;
    /// hidden modes are not physical outputs of this library.
    static ModeIndex relaxed(int n, int m, int p) {
        if (n <= 0 || m < 0 || p < 0) throw ValidationError("mode", "mode indices must be non-negative, n > 0");
        return {n, m, p};
    }

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] int p() const noexcept { return p_; }

    bool operator==(const ModeIndex&) const = default;

private:
    ModeIndex(int n, int m, int p) : n_(n), m_(m), p_(p) {}
    int n_;
    int m_;
    int p_;
};

/// Envelope curvatures alpha, beta in 1/m^2.
struct Curvatures {
    double alpha;
    double beta;
};

/// Dimensionless trapping parameters eta = sqrt(pi alpha) L.
struct Trapping {
    double eta_x;
    double eta_y;

    static Trapping symmetric(double eta) { return {eta, eta}; }
};

/// alpha^2 = c^_z / (8 R h0^3 M_n), beta^2 = c^_z / (8 R h0^3 P_n).
inline Curvatures envelope_curvatures(const MaterialParams& mat, const CavityGeometry& geo, int n) {
    const double c_hat = stiffened_constants(mat, n).c_hat_z;
    const auto [M_n, P_n] = dispersion_parameters(mat, n);
    if (!(M_n > 0.0 && P_n > 0.0)) {
        throw ValidationError("M", "dispersion-corrected M_n and P_n must stay positive");
    }
    const double base = c_hat / (8.0 * geo.R * geo.h0 * geo.h0 * geo.h0);
    return {std::sqrt(base / M_n), std::sqrt(base / P_n)};
}

inline Trapping trapping_parameters(Curvatures c, double L) {
    return {std::sqrt(constants::pi * c.alpha) * L, std::sqrt(constants::pi * c.beta) * L};
}

inline Curvatures curvatures_from_trapping(Trapping t, double L) {
    const double scale = constants::pi * L * L;
    return {t.eta_x * t.eta_x / scale, t.eta_y * t.eta_y / scale};
}

/// u(x, y) = e^{-alpha n pi x^2/2} H_m(sqrt(alpha n pi) x) * e^{-beta n pi y^2/2} H_p(sqrt(beta n pi) y)
class ModeShape {
public:
    ModeShape(ModeIndex mode, Curvatures c)
        : mode_(mode),
          kx_(std::sqrt(c.alpha * mode.n() * constants::pi)),
          ky_(std::sqrt(c.beta * mode.n() * constants::pi)) {}

    [[nodiscard]] double axis_x(double x) const {
        const double t = kx_ * x;
        return std::exp(-0.5 * t * t) * specfun::hermite(mode_.m(), t);
    }
    [[nodiscard]] double axis_y(double y) const {
        const double t = ky_ * y;
        return std::exp(-0.5 * t * t) * specfun::hermite(mode_.p(), t);
    }
    double operator()(double x, double y) const { return axis_x(x) * axis_y(y); }

    /// Envelope standard deviation 1/sqrt(alpha n pi) along x and y, m.
    [[nodiscard]] double sigma_x() const { return 1.0 / kx_; }
    [[nodiscard]] double sigma_y() const { return 1.0 / ky_; }

private:
    ModeIndex mode_;
    double kx_;
    double ky_;
};

inline ModeShape mode_shape(ModeIndex mode, Curvatures c) { return {mode, c}; }

namespace detail {

// int_R e^{-t^2} H_m(t)^2 dt = 2^m m! sqrt(pi)
inline double hermite_gauss_norm(int m) {
    double v = constants::sqrt_pi;
    for (int k = 1; k <= m; ++k) v *= 2.0 * k;
    return v;
}

// Where e^{-t^2} H_m(t)^2 has decayed far below double resolution:
// ten envelope widths beyond the classical turning point.
inline double hermite_gauss_cutoff(int m) { return 10.0 + std::sqrt(2.0 * m + 1.0); }

inline specfun::QuadratureSpec fraction_quadrature() {
    specfun::QuadratureSpec q;
    q.abs_tolerance = 1e-300;
    q.rel_tolerance = 1e-12;
    return q;
}

inline double hermite_gauss_integral(int m, double lo, double hi) {
    auto f = [m](double t) {
        const double h = specfun::hermite(m, t);
        return std::exp(-t * t) * h * h;
    };
    return specfun::integrate_1d(f, lo, hi, fraction_quadrature()).value;
}

// Closed form for m = 2: erfc(s) + s (1 + 2 s^2) e^{-s^2} / sqrt(pi), s >= 0.
inline double second_mode_tail(double s) {
    return specfun::erfc(s) + s * (1.0 + 2.0 * s * s) * std::exp(-s * s) / constants::sqrt_pi;
}

}  // namespace detail

/// Fraction of int e^{-t^2} H_m^2 lying inside |t| <= s.
inline double axis_inside_fraction(int m, double s) {
    if (s <= 0.0) return 0.0;
    if (m == 0) return specfun::erf(s);
    if (m == 2) {
        return specfun::erf(s) - s / constants::sqrt_pi * (1.0 + 2.0 * s * s) * std::exp(-s * s);
    }
    const double cut = detail::hermite_gauss_cutoff(m);
    if (s >= cut) return 1.0;
    return 2.0 * detail::hermite_gauss_integral(m, 0.0, s) / detail::hermite_gauss_norm(m);
}

/// Complementary fraction outside |t| <= s, accurate when it is tiny.
inline double axis_tail_fraction(int m, double s) {
    if (s <= 0.0) return 1.0;
    if (m == 0) return specfun::erfc(s);
    if (m == 2) return detail::second_mode_tail(s);
    const double cut = detail::hermite_gauss_cutoff(m);
    if (s >= cut) return 0.0;
    return 2.0 * detail::hermite_gauss_integral(m, s, cut) / detail::hermite_gauss_norm(m);
}

namespace detail {

inline double log_axis_tail_fraction(int m, double s) {
    if (s <= 0.0) return 0.0;
    if (m == 0) return specfun::log_erfc(s);
    if (m == 2) {
        return -s * s + std::log(specfun::erfcx(s) + s * (1.0 + 2.0 * s * s) / constants::sqrt_pi);
    }
    return std::log(axis_tail_fraction(m, s));
}

inline void require_positive_trapping(Trapping t) {
    if (!(t.eta_x > 0.0 && t.eta_y > 0.0 && std::isfinite(t.eta_x) && std::isfinite(t.eta_y))) {
        throw ValidationError("eta", "trapping parameters must be finite and > 0");
    }
}

}  // namespace detail

/// Escape probability chi^{-1}: share of modal energy outside the finite plate.
/// For (n,0,0) this is 1 - Erf(sqrt(n) eta_x) Erf(sqrt(n) eta_y); the (n,2,2)
/// family uses the bracketed products. Both are evaluated in the complementary
/// form t_x + t_y - t_x t_y so tiny values keep their relative accuracy.
/// Underflows to 0 for strong trapping; see log10_escape_probability.
inline double escape_probability(ModeIndex mode, Trapping t) {
    const double rn = std::sqrt(static_cast<double>(mode.n()));
    const double tx = axis_tail_fraction(mode.m(), rn * std::max(t.eta_x, 0.0));
    const double ty = axis_tail_fraction(mode.p(), rn * std::max(t.eta_y, 0.0));
    return std::clamp(tx + ty - tx * ty, 0.0, 1.0);
}

/// log10 of the escape probability, finite far beyond the underflow of the linear value.
inline double log10_escape_probability(ModeIndex mode, Trapping t) {
    const double rn = std::sqrt(static_cast<double>(mode.n()));
    const double lx = detail::log_axis_tail_fraction(mode.m(), rn * std::max(t.eta_x, 0.0));
    const double ly = detail::log_axis_tail_fraction(mode.p(), rn * std::max(t.eta_y, 0.0));
    const double hi = std::max(lx, ly);
    const double lo = std::min(lx, ly);
    // ln(e^hi + e^lo - e^{hi+lo})
    const double ln = hi + std::log1p(std::exp(lo - hi) - std::exp(lo));
    return std::min(ln, 0.0) / std::log(10.0);
}

/// Smallest symmetric eta (alpha = beta) at which chi^{-1} drops to `target`.
inline double trapping_threshold(ModeIndex mode, double target) {
    if (!(target > 0.0 && target < 1.0)) throw DomainError("trapping_threshold: target must lie in (0, 1)");
    const double goal = std::log10(target);
    double lo = 1e-9;
    double hi = 1.0;
    while (log10_escape_probability(mode, Trapping::symmetric(hi)) > goal) {
        hi *= 2.0;
        if (hi > 1e6) throw ConvergenceError("trapping_threshold: no bracket found", hi, 0.0);
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (log10_escape_probability(mode, Trapping::symmetric(mid)) > goal) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

enum class FrequencyModel {
    leading_order,  ///< n pi / (2 h0) sqrt(c^_z / rho), the high-overtone limit
    full,           ///< including the (2m+1), (2p+1) trap-ladder bracket
};

namespace detail {

// Trap-ladder coefficient (1/pi) sqrt(2 h0 M / (R c^_z)). This is the value
// the parabolic thickness profile produces for the harmonic level spacing;
// see trap_eigensolve in oracle.hpp for the numerical cross-check.
inline double ladder_coefficient(double transverse, double c_hat, const CavityGeometry& geo) {
    return std::sqrt(2.0 * geo.h0 * transverse / (geo.R * c_hat)) / constants::pi;
}

}  // namespace detail

/// Angular frequency omega_{nmp}, rad/s.
/// omega^2 = n^2 pi^2 c^_z / (4 h0^2 rho) [1 + chi_x (2m+1)/n + chi_y (2p+1)/n]
inline double mode_frequency(const MaterialParams& mat, const CavityGeometry& geo, ModeIndex mode,
                             FrequencyModel model = FrequencyModel::leading_order) {
    const int n = mode.n();
    const double c_hat = stiffened_constants(mat, n).c_hat_z;
    const double base = n * constants::pi / (2.0 * geo.h0) * std::sqrt(c_hat / mat.rho);
    if (model == FrequencyModel::leading_order) return base;
    const auto [M_n, P_n] = dispersion_parameters(mat, n);
    const double chi_x = detail::ladder_coefficient(M_n, c_hat, geo);
    const double chi_y = detail::ladder_coefficient(P_n, c_hat, geo);
    const double bracket = 1.0 + chi_x / n * (2.0 * mode.m() + 1.0) + chi_y / n * (2.0 * mode.p() + 1.0);
    return base * std::sqrt(bracket);
}

struct MassResult {
    double m_eff;   ///< kg
    double m_flat;  ///< 4 rho h0 L^2, kg
    double xi;      ///< m_flat / m_eff
};

/// Geometric factor xi = m_flat / m_eff. For (n,0,0):
///   xi = (4/pi) eta_x eta_y n / (Erf(sqrt(n) eta_x) Erf(sqrt(n) eta_y));
/// for (n,2,2) with alpha = beta it reduces to n eta^2 / (16 pi) [Erf - ...]^{-2}.
/// Other even modes use the same structure with quadrature for the inside fractions.
inline double geometric_factor(ModeIndex mode, Trapping t) {
    detail::require_positive_trapping(t);
    const double n = mode.n();
    const double rn = std::sqrt(n);
    const double fx = axis_inside_fraction(mode.m(), rn * t.eta_x);
    const double fy = axis_inside_fraction(mode.p(), rn * t.eta_y);
    const double norm = detail::hermite_gauss_norm(mode.m()) * detail::hermite_gauss_norm(mode.p()) /
                        constants::pi;  // 2^m m! 2^p p!
    return 4.0 / constants::pi * t.eta_x * t.eta_y * n / (norm * fx * fy);
}

inline MassResult effective_mass(const MaterialParams& mat, const CavityGeometry& geo, ModeIndex mode,
                                 Trapping t) {
    const double m_flat = 4.0 * mat.rho * geo.h0 * geo.L * geo.L;
    const double xi = geometric_factor(mode, t);
    return {m_flat / xi, m_flat, xi};
}

struct Zpf {
    double x_zpf;       ///< sqrt<x^2>, m
    double p_zpf;       ///< sqrt<p^2>, kg m/s
    double x_zpf_flat;  ///< same overtone, flat plate of mass m_flat
    double p_zpf_flat;
};

/// Ground-state quadratures <x^2> = hbar/(2 omega m_eff), <p^2> = hbar omega m_eff / 2.
inline Zpf zpf(const MaterialParams& mat, const CavityGeometry& geo, ModeIndex mode, Trapping t,
               FrequencyModel model = FrequencyModel::leading_order) {
    const double omega = mode_frequency(mat, geo, mode, model);
    const MassResult mass = effective_mass(mat, geo, mode, t);
    using constants::hbar;
    return {std::sqrt(hbar / (2.0 * omega * mass.m_eff)), std::sqrt(hbar * omega * mass.m_eff / 2.0),
            std::sqrt(hbar / (2.0 * omega * mass.m_flat)), std::sqrt(hbar * omega * mass.m_flat / 2.0)};
}

/// Bose-Einstein occupancy 1 / (exp(hbar omega / k_B T) - 1).
inline double thermal_occupancy(double omega, double temperature) {
    if (!(std::isfinite(temperature) && temperature > 0.0)) {
        throw DomainError("thermal_occupancy: temperature must be > 0 K");
    }
    if (!(std::isfinite(omega) && omega > 0.0)) {
        throw DomainError("thermal_occupancy: omega must be > 0");
    }
    return 1.0 / std::expm1(constants::hbar * omega / (constants::boltzmann * temperature));
}

struct ModeCharacterization {
    ModeIndex mode = ModeIndex::excitable(1);
    double omega = 0.0;        ///< rad/s
    double alpha = 0.0;        ///< 1/m^2
    double beta = 0.0;
    double eta_x = 0.0;
    double eta_y = 0.0;
    double chi_inv = 0.0;      ///< escape probability
    double log10_chi_inv = 0.0;
    double xi = 0.0;
    double m_eff = 0.0;        ///< kg
    double m_flat = 0.0;       ///< kg
    double x_zpf = 0.0;        ///< m
    double p_zpf = 0.0;        ///< kg m/s
    double x_zpf_flat = 0.0;
    double p_zpf_flat = 0.0;
    double temperature = 0.0;  ///< K
    double n_thermal = 0.0;

    [[nodiscard]] double frequency_hz() const { return omega / (2.0 * constants::pi); }
};

struct CharacterizeOptions {
    /// Use this symmetric eta instead of deriving it from the material constants.
    std::optional<double> eta_override;
    FrequencyModel frequency = FrequencyModel::leading_order;
};

inline ModeCharacterization characterize(const MaterialParams& mat, const CavityGeometry& geo, ModeIndex mode,
                                         double temperature, const CharacterizeOptions& opts = {}) {
    mat.validate();
    geo.validate();
    require_odd_overtone(mode.n());
    if (!(std::isfinite(temperature) && temperature > 0.0)) {
        throw DomainError("characterize: temperature must be > 0 K");
    }

    Curvatures curv{};
    Trapping trap{};
    if (opts.eta_override) {
        if (!(*opts.eta_override > 0.0)) throw ValidationError("eta", "eta override must be > 0");
        trap = Trapping::symmetric(*opts.eta_override);
        curv = curvatures_from_trapping(trap, geo.L);
    } else {
        curv = envelope_curvatures(mat, geo, mode.n());
        trap = trapping_parameters(curv, geo.L);
    }

    ModeCharacterization out;
    out.mode = mode;
    out.alpha = curv.alpha;
    out.beta = curv.beta;
    out.eta_x = trap.eta_x;
    out.eta_y = trap.eta_y;
    out.chi_inv = escape_probability(mode, trap);
    out.log10_chi_inv = log10_escape_probability(mode, trap);
    out.omega = mode_frequency(mat, geo, mode, opts.frequency);
    const MassResult mass = effective_mass(mat, geo, mode, trap);
    out.xi = mass.xi;
    out.m_eff = mass.m_eff;
    out.m_flat = mass.m_flat;
    const Zpf q = zpf(mat, geo, mode, trap, opts.frequency);
    out.x_zpf = q.x_zpf;
    out.p_zpf = q.p_zpf;
    out.x_zpf_flat = q.x_zpf_flat;
    out.p_zpf_flat = q.p_zpf_flat;
    out.temperature = temperature;
    out.n_thermal = thermal_occupancy(out.omega, temperature);
    return out;
}

}  // namespace bawcav
