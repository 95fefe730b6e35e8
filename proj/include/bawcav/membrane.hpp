#pragma once

// Stressed rectangular membrane used as the conventional baseline.

#include <bawcav/cavity.hpp>
#include <bawcav/constants.hpp>
#include <bawcav/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bawcav {

struct MembraneSpec {
    double a = 0.0;    ///< side lengths, m
    double b = 0.0;
    double h = 0.0;    ///< thickness, m
    double tau = 0.0;  ///< stress, Pa
    double rho = 0.0;  ///< density, kg/m^3
    int mode_m = 1;
    int mode_n = 1;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(std::isfinite(v) && v > 0.0)) {
                throw ValidationError(name, std::string("membrane: ") + name + " must be > 0");
            }
        };
        positive(a, "a");
        positive(b, "b");
        positive(h, "h");
        positive(tau, "tau");
        positive(rho, "rho");
        if (mode_m < 1) throw ValidationError("mode_m", "membrane: mode_m must be >= 1");
        if (mode_n < 1) throw ValidationError("mode_n", "membrane: mode_n must be >= 1");
        if (!(h < std::min(a, b) / 20.0)) throw ValidationError("h", "membrane: h must be < min(a, b)/20");
    }
};

/// Membrane of the same footprint and density as the quartz cavity: a = b = 2L, tau = 105 GPa.
inline MembraneSpec quartz_membrane() { return {0.03, 0.03, 5e-4, 105e9, 2643.0, 1, 1}; }

/// omega = pi c sqrt(m^2/a^2 + n^2/b^2), c = sqrt(tau / rho).
inline double membrane_frequency(const MembraneSpec& s) {
    s.validate();
    const double c = std::sqrt(s.tau / s.rho);
    const double m = s.mode_m;
    const double n = s.mode_n;
    return constants::pi * c * std::sqrt(m * m / (s.a * s.a) + n * n / (s.b * s.b));
}

/// rho h a b / 4, the same for every mode.
inline double membrane_effective_mass(const MembraneSpec& s) {
    s.validate();
    return s.rho * s.h * s.a * s.b / 4.0;
}

struct MembraneZpf {
    double x_zpf;            ///< sqrt(4 hbar / (pi sqrt(tau rho) h sqrt(m^2 a^2 + n^2 b^2))), m
    double x_zpf_canonical;  ///< sqrt(hbar / (2 omega m_eff)), m
};

inline MembraneZpf membrane_zpf(const MembraneSpec& s) {
    s.validate();
    const double m = s.mode_m;
    const double n = s.mode_n;
    const double var = 4.0 * constants::hbar /
                       (constants::pi * std::sqrt(s.tau * s.rho) * s.h * std::sqrt(m * m * s.a * s.a + n * n * s.b * s.b));
    const double canonical = constants::hbar / (2.0 * membrane_frequency(s) * membrane_effective_mass(s));
    return {std::sqrt(var), std::sqrt(canonical)};
}

struct ResonatorSummary {
    std::string label;
    double frequency_hz;
    double m_eff;
    double x_zpf;
    double n_thermal;
};

struct ComparisonReport {
    ResonatorSummary cavity;
    ResonatorSummary membrane;
    double membrane_x_zpf_canonical;
    double temperature;
    std::vector<std::string> notes;
};

inline ComparisonReport compare(const ModeCharacterization& cav, const MembraneSpec& s, double temperature) {
    const double omega = membrane_frequency(s);
    const MembraneZpf z = membrane_zpf(s);
    ComparisonReport r;
    r.temperature = temperature;
    r.cavity = {"cavity (" + std::to_string(cav.mode.n()) + "," + std::to_string(cav.mode.m()) + "," +
                    std::to_string(cav.mode.p()) + ")",
                cav.frequency_hz(), cav.m_eff, cav.x_zpf, thermal_occupancy(cav.omega, temperature)};
    r.membrane = {"membrane (" + std::to_string(s.mode_m) + "," + std::to_string(s.mode_n) + ")",
                  omega / (2.0 * constants::pi), membrane_effective_mass(s), z.x_zpf,
                  thermal_occupancy(omega, temperature)};
    r.membrane_x_zpf_canonical = z.x_zpf_canonical;
    r.notes.push_back("cavity: higher overtones lower the thermal occupancy while the ZPF amplitude "
                      "saturates (xi grows with n)");
    r.notes.push_back("membrane: higher modes lower the thermal occupancy but shrink the ZPF amplitude");
    if (r.cavity.n_thermal < r.membrane.n_thermal) {
        r.notes.push_back("cavity mode is closer to its ground state than the membrane mode");
    }
    return r;
}

}  // namespace bawcav
