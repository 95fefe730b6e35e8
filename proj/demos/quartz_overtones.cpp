// Quartz plate at 20 mK: how curvature trapping changes the quantum
// figures of merit as the overtone number grows.

#include <bawcav/cavity.hpp>
#include <bawcav/detection.hpp>
#include <bawcav/material.hpp>
#include <bawcav/membrane.hpp>

#include <cstdio>

int main() {
    using namespace bawcav;
    const MaterialParams mat = quartz_example();
    const CavityGeometry geo = quartz_geometry();
    constexpr double temperature = 0.02;

    CharacterizeOptions quoted;
    quoted.eta_override = 10.7;

    std::printf("%5s %12s %10s %10s %12s %12s %10s\n", "n", "f [MHz]", "eta", "xi", "m_eff [kg]", "x_zpf [m]",
                "n_th");
    for (int n : {1, 7, 37, 227}) {
        const auto c = characterize(mat, geo, ModeIndex::excitable(n), temperature, quoted);
        std::printf("%5d %12.4f %10.3f %10.4g %12.4g %12.4g %10.4g\n", n, c.frequency_hz() / 1e6, c.eta_x, c.xi,
                    c.m_eff, c.x_zpf, c.n_thermal);
    }

    // eta from the material constants instead of the quoted value
    const auto derived = characterize(mat, geo, ModeIndex::excitable(227), temperature);
    std::printf("\nderived eta = %.4f, xi(227) = %.4g, log10 chi^-1 = %.1f\n", derived.eta_x, derived.xi,
                derived.log10_chi_inv);

    const ElectrodeDesign e = shunt_impedance(mat, geo, 10.7, 227, default_mu_opt());
    std::printf("electrode n=227: L_opt = %.3g m, C0 = %.3g F, Z = %.3g ohm (%.0fx motional)\n", e.L_tilde, e.C0,
                e.Z_derived, shunt_vs_motional(e.Z_derived).ratio);

    const auto cav = characterize(mat, geo, ModeIndex::excitable(1), temperature, quoted);
    const ComparisonReport rep = compare(cav, quartz_membrane(), temperature);
    for (const auto* r : {&rep.cavity, &rep.membrane}) {
        std::printf("%-18s f = %10.4g Hz  x_zpf = %.3g m  n_th = %.4g\n", r->label.c_str(), r->frequency_hz,
                    r->x_zpf, r->n_thermal);
    }
    return 0;
}
