#pragma once

// Brute-force validators for the closed-form cavity expressions:
//  * 2-D quadrature of the mode integrals (mass, escape, electrode overlap),
//    integrating ModeShape directly in physical coordinates;
//  * a finite-difference eigensolver for the x-slice of the trapped-wave
//    equation, checking the Hermite-Gaussian ground state and the (2m+1) ladder.

#include <bawcav/cavity.hpp>
#include <bawcav/constants.hpp>
#include <bawcav/detection.hpp>
#include <bawcav/errors.hpp>
#include <bawcav/material.hpp>
#include <bawcav/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace bawcav::oracle {

/// Pure relative tolerance: the mode integrals span many decades.
inline specfun::QuadratureSpec oracle_quadrature() {
    specfun::QuadratureSpec q;
    q.abs_tolerance = 1e-300;
    q.rel_tolerance = 1e-11;
    return q;
}

namespace detail {

// Half-width of the "infinite" plane along one axis: ten envelope widths past
// the turning point of H_m. The truncated tail is below e^{-100} relative.
inline double truncation(int order, double sigma) {
    return bawcav::detail::hermite_gauss_cutoff(order) * sigma;
}

}  // namespace detail

/// rho * int_V u^2 / u_env^2 dv: 2-D quadrature over the plate times the
/// thickness factor int_0^{2h0} sin^2(n pi z / 2h0) dz = h0.
inline double mass_integral_oracle(ModeIndex mode, Curvatures c, double L, double rho, double h0,
                                   const specfun::QuadratureSpec& q = oracle_quadrature()) {
    const ModeShape u = mode_shape(mode, c);
    auto u2 = [&u](double x, double y) {
        const double v = u(x, y);
        return v * v;
    };
    const double area = specfun::integrate_2d(u2, {-L, L, -L, L}, q).value;
    return rho * h0 * area;
}

/// 1 - (finite-plate integral)/(infinite-plate integral) of u^2, evaluated as
/// (integral over the plane outside the plate)/(integral over the plane) so
/// that small escape probabilities keep their relative accuracy.
inline double escape_integral_oracle(ModeIndex mode, Curvatures c, double L,
                                     const specfun::QuadratureSpec& q = oracle_quadrature()) {
    const ModeShape u = mode_shape(mode, c);
    auto u2 = [&u](double x, double y) {
        const double v = u(x, y);
        return v * v;
    };
    const double tx = detail::truncation(mode.m(), u.sigma_x());
    const double ty = detail::truncation(mode.p(), u.sigma_y());
    const double total = specfun::integrate_2d(u2, {-tx, tx, -ty, ty}, q).value;

    double outside = 0.0;
    if (ty > L) {
        outside += specfun::integrate_2d(u2, {-tx, tx, L, ty}, q).value;
        outside += specfun::integrate_2d(u2, {-tx, tx, -ty, -L}, q).value;
    }
    if (tx > L) {
        const double band = std::min(L, ty);
        outside += specfun::integrate_2d(u2, {L, tx, -band, band}, q).value;
        outside += specfun::integrate_2d(u2, {-tx, -L, -band, band}, q).value;
    }
    return outside / total;
}

/// int_{electrode} u ds / int_{plane} u ds for a square electrode of half-width L_tilde.
inline double overlap_integral_oracle(ModeIndex mode, Curvatures c, double L_tilde,
                                      const specfun::QuadratureSpec& q = oracle_quadrature()) {
    const ModeShape u = mode_shape(mode, c);
    auto f = [&u](double x, double y) { return u(x, y); };
    const double tx = detail::truncation(mode.m(), u.sigma_x());
    const double ty = detail::truncation(mode.p(), u.sigma_y());
    const double total = specfun::integrate_2d(f, {-tx, tx, -ty, ty}, q).value;
    const double ex = std::min(L_tilde, tx);
    const double ey = std::min(L_tilde, ty);
    if (!(ex > 0.0 && ey > 0.0)) return 0.0;
    return specfun::integrate_2d(f, {-ex, ex, -ey, ey}, q).value / total;
}

struct EigenSolveConfig {
    int grid_points = 2001;      ///< interior nodes, odd so that x = 0 is a node
    double domain_sigmas = 10.0; ///< half-width of the domain in envelope widths
    int num_eigenpairs = 3;
    double tolerance = 1e-11;    ///< relative residual |A v - lambda v| / lambda
    int max_iterations = 20000;

    void validate() const {
        if (grid_points < 201 || grid_points % 2 == 0) {
            throw ValidationError("grid_points", "eigensolve: grid_points must be odd and >= 201");
        }
        if (!(domain_sigmas >= 8.0)) throw ValidationError("domain_sigmas", "eigensolve: domain must be >= 8 sigma");
        if (num_eigenpairs < 1) throw ValidationError("num_eigenpairs", "eigensolve: need at least one eigenpair");
        if (!(tolerance > 0.0)) throw ValidationError("tolerance", "eigensolve: tolerance must be > 0");
        if (max_iterations < 1) throw ValidationError("max_iterations", "eigensolve: max_iterations must be >= 1");
    }
};

struct EigenPair {
    double eigenvalue;  ///< lambda of -M u'' + V u = lambda u, Pa/m^2
    double omega;       ///< sqrt((n^2 pi^2 c^_z / (4 h0^2) + lambda) / rho), rad/s
    std::vector<double> vector;  ///< unit 2-norm, sign fixed so the largest entry is positive
};

struct EigenSolution {
    std::vector<double> grid;  ///< node positions, m
    std::vector<EigenPair> pairs;  ///< ascending eigenvalues
    double step = 0.0;
};

namespace detail {

// Symmetric tridiagonal matrix with constant off-diagonal, factorised once
// for repeated solves (no pivoting; the operator is positive definite).
class TridiagonalSolver {
public:
    TridiagonalSolver(std::vector<double> diag, double off) : off_(off), pivot_(std::move(diag)) {
        for (std::size_t i = 1; i < pivot_.size(); ++i) {
            pivot_[i] -= off_ * off_ / pivot_[i - 1];
        }
    }

    void solve(std::vector<double>& rhs) const {
        const std::size_t n = pivot_.size();
        for (std::size_t i = 1; i < n; ++i) rhs[i] -= off_ / pivot_[i - 1] * rhs[i - 1];
        rhs[n - 1] /= pivot_[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off_ * rhs[i + 1]) / pivot_[i];
    }

private:
    double off_;
    std::vector<double> pivot_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Lowest eigenpairs of -M_n u'' + (pi^2 n^2 c^_z/(4 h0^2)) (x^2 / (2 R h0)) u = lambda u
/// on a symmetric grid with Dirichlet ends, by inverse iteration with deflation.
inline EigenSolution trap_eigensolve(const MaterialParams& mat, const CavityGeometry& geo, int n,
                                     const EigenSolveConfig& cfg = {}) {
    cfg.validate();
    geo.validate();
    const double c_hat = stiffened_constants(mat, n).c_hat_z;
    const double stiffness = dispersion_parameters(mat, n).M_n;
    const double thickness_term = n * n * constants::pi * constants::pi * c_hat / (4.0 * geo.h0 * geo.h0);
    const double curvature = thickness_term / (2.0 * geo.R * geo.h0);

    // Grid extent from the analytic envelope width; it only sizes the box.
    const double alpha = envelope_curvatures(mat, geo, n).alpha;
    const double sigma = 1.0 / std::sqrt(alpha * n * constants::pi);
    const double half_width = cfg.domain_sigmas * sigma;
    const auto N = static_cast<std::size_t>(cfg.grid_points);
    const double h = 2.0 * half_width / (cfg.grid_points + 1);

    EigenSolution out;
    out.step = h;
    out.grid.resize(N);
    std::vector<double> diag(N);
    const double off = -stiffness / (h * h);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = (static_cast<double>(i) - static_cast<double>(N - 1) / 2.0) * h;
        out.grid[i] = x;
        diag[i] = 2.0 * stiffness / (h * h) + curvature * x * x;
    }
    auto apply = [&](const std::vector<double>& v, std::vector<double>& av) {
        for (std::size_t i = 0; i < N; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += off * v[i - 1];
            if (i + 1 < N) s += off * v[i + 1];
            av[i] = s;
        }
    };
    const detail::TridiagonalSolver solver(diag, off);

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> v(N), av(N);
    for (int k = 0; k < cfg.num_eigenpairs; ++k) {
        for (auto& e : v) e = uni(rng);
        double lambda = 0.0;
        double residual = 0.0;
        bool done = false;
        for (int it = 0; it < cfg.max_iterations; ++it) {
            for (const auto& prev : out.pairs) {
                const double proj = detail::dot(v, prev.vector);
                for (std::size_t i = 0; i < N; ++i) v[i] -= proj * prev.vector[i];
            }
            const double norm = std::sqrt(detail::dot(v, v));
            for (auto& e : v) e /= norm;
            apply(v, av);
            lambda = detail::dot(v, av);
            residual = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double r = av[i] - lambda * v[i];
                residual += r * r;
            }
            residual = std::sqrt(residual);
            if (residual <= cfg.tolerance * std::abs(lambda)) {
                done = true;
                break;
            }
            solver.solve(v);
        }
        if (!done) {
            throw ConvergenceError("trap_eigensolve: eigenpair " + std::to_string(k) + " did not converge",
                                   lambda, residual);
        }
        const auto peak = std::max_element(v.begin(), v.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        });
        if (*peak < 0.0) {
            for (auto& e : v) e = -e;
        }
        out.pairs.push_back({lambda, std::sqrt((thickness_term + lambda) / mat.rho), v});
    }
    return out;
}

/// Least-squares fit of ln|u| = c - gamma x^2 / 2 over nodes with |u| above
/// 1e-3 of the peak; returns gamma (1/m^2).
inline double fit_envelope_curvature(const std::vector<double>& grid, const std::vector<double>& u) {
    double peak = 0.0;
    for (double e : u) peak = std::max(peak, std::abs(e));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(u[i]) < 1e-3 * peak) continue;
        const double X = grid[i] * grid[i];
        const double Y = std::log(std::abs(u[i]));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++count;
    }
    if (count < 3) throw ConvergenceError("fit_envelope_curvature: too few nodes above threshold", 0.0, 0.0);
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return -2.0 * slope;
}

// ---------------------------------------------------------------------------
// Seeded sweep comparing every closed form with its oracle.

struct OracleCheck {
    std::string family;  ///< e.g. "escape(n,0,0)"
    int case_index = 0;
    double closed_form = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string parameters;
};

struct OracleReport {
    std::vector<OracleCheck> checks;
    int skipped = 0;  ///< escape cases below the 1e-12 floor

    [[nodiscard]] bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
    }
};

inline constexpr std::uint64_t default_oracle_seed = 20140527;
inline constexpr double closed_form_tolerance = 1e-8;

namespace detail {

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline OracleCheck make_check(std::string family, int idx, double closed, double numeric, double tol,
                              std::string params) {
    OracleCheck c;
    c.family = std::move(family);
    c.case_index = idx;
    c.closed_form = closed;
    c.numeric = numeric;
    c.rel_error = rel_diff(closed, numeric);
    c.tolerance = tol;
    c.pass = c.rel_error <= tol;
    c.parameters = std::move(params);
    return c;
}

}  // namespace detail

/// Closed-form vs quadrature on `cases` pseudo-random parameter sets per family:
/// escape (n,0,0) and (n,2,2), mass (n,0,0), mass (n,2,2) with alpha = beta, overlap (n,0,0).
inline OracleReport run_closed_form_oracles(std::uint64_t seed = default_oracle_seed, int cases = 20) {
    OracleReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> odd(0, 7);
    std::uniform_real_distribution<double> edge(0.3, 4.5);    // sqrt(n) eta
    std::uniform_real_distribution<double> aspect(0.8, 1.25); // eta_y / eta_x
    std::uniform_real_distribution<double> half_width(5e-3, 2e-2);
    std::uniform_real_distribution<double> electrode(0.05, 0.95);
    constexpr double rho = 2643.0;
    constexpr double h0 = 5e-4;

    for (int i = 0; i < cases; ++i) {
        const int n = 2 * odd(rng) + 1;
        const double L = half_width(rng);
        const double eta_x = edge(rng) / std::sqrt(static_cast<double>(n));
        const double eta_y = eta_x * aspect(rng);
        const Trapping t{eta_x, eta_y};
        const Curvatures c = curvatures_from_trapping(t, L);
        const Trapping sym = Trapping::symmetric(eta_x);
        const Curvatures csym = curvatures_from_trapping(sym, L);
        const double lt = electrode(rng) * L;
        const std::string params = "n=" + std::to_string(n) + " eta_x=" + std::to_string(eta_x) +
                                   " eta_y=" + std::to_string(eta_y) + " L=" + std::to_string(L);

        for (const int mp : {0, 2}) {
            const ModeIndex mode = ModeIndex::excitable(n, mp, mp);
            const double closed = escape_probability(mode, t);
            const std::string fam = mp == 0 ? "escape(n,0,0)" : "escape(n,2,2)";
            if (closed <= 1e-12) {
                ++rep.skipped;
                continue;
            }
            rep.checks.push_back(detail::make_check(fam, i, closed, escape_integral_oracle(mode, c, L),
                                                    closed_form_tolerance, params));
        }

        MaterialParams mat = quartz_example();
        mat.rho = rho;
        const CavityGeometry geo{L, h0, 10.0, std::nullopt};
        {
            const ModeIndex mode = ModeIndex::excitable(n);
            const double closed = effective_mass(mat, geo, mode, t).m_eff;
            rep.checks.push_back(detail::make_check("mass(n,0,0)", i, closed,
                                                    mass_integral_oracle(mode, c, L, rho, h0),
                                                    closed_form_tolerance, params));
        }
        {
            const ModeIndex mode = ModeIndex::excitable(n, 2, 2);
            const double closed = effective_mass(mat, geo, mode, sym).m_eff;
            rep.checks.push_back(detail::make_check("mass(n,2,2)", i, closed,
                                                    mass_integral_oracle(mode, csym, L, rho, h0),
                                                    closed_form_tolerance, params));
        }
        {
            const ModeIndex mode = ModeIndex::excitable(n);
            const double closed = overlap_factor(mode, c, lt);
            rep.checks.push_back(detail::make_check("overlap(n,0,0)", i, closed,
                                                    overlap_integral_oracle(mode, c, lt),
                                                    closed_form_tolerance,
                                                    params + " L_tilde=" + std::to_string(lt)));
        }
    }
    return rep;
}

struct EigenChecks {
    double ladder_ratio;        ///< (lambda2 - lambda1) / (lambda1 - lambda0)
    double fitted_curvature;    ///< from the ground eigenvector, 1/m^2
    double analytic_curvature;  ///< alpha n pi
    double omega_ratio_sq_numeric;  ///< omega^2(n,2,0) / omega^2(n,0,0) from eigenvalues
    double omega_ratio_sq_closed;   ///< same from mode_frequency(full)
};

/// Eigen-solve of the x-slice, compared with the Hermite-Gaussian closed forms.
/// Requires M = P so the frozen y-direction contributes the same ground level.
inline EigenChecks eigen_validation(const MaterialParams& mat, const CavityGeometry& geo, int n,
                                    const EigenSolveConfig& cfg = {}) {
    const EigenSolution sol = trap_eigensolve(mat, geo, n, cfg);
    if (sol.pairs.size() < 3) throw ValidationError("num_eigenpairs", "eigen_validation needs 3 eigenpairs");
    const double l0 = sol.pairs[0].eigenvalue;
    const double l1 = sol.pairs[1].eigenvalue;
    const double l2 = sol.pairs[2].eigenvalue;
    EigenChecks out{};
    out.ladder_ratio = (l2 - l1) / (l1 - l0);
    out.fitted_curvature = fit_envelope_curvature(sol.grid, sol.pairs[0].vector);
    out.analytic_curvature = envelope_curvatures(mat, geo, n).alpha * n * constants::pi;

    const double c_hat = stiffened_constants(mat, n).c_hat_z;
    const double base = n * n * constants::pi * constants::pi * c_hat / (4.0 * geo.h0 * geo.h0);
    // y ground level equals the x ground level when P = M
    out.omega_ratio_sq_numeric = (base + l2 + l0) / (base + l0 + l0);
    const double w2 = mode_frequency(mat, geo, ModeIndex::excitable(n, 2, 0), FrequencyModel::full);
    const double w0 = mode_frequency(mat, geo, ModeIndex::excitable(n, 0, 0), FrequencyModel::full);
    out.omega_ratio_sq_closed = (w2 * w2) / (w0 * w0);
    return out;
}

}  // namespace bawcav::oracle
