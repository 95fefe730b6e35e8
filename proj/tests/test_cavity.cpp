#include <bawcav/cavity.hpp>
#include <bawcav/constants.hpp>
#include <bawcav/specfun.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace bawcav;
namespace sf = bawcav::specfun;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ModeCharacterization at_eta(int n, double eta, int m = 0, int p = 0, double T = 0.02) {
    CharacterizeOptions o;
    o.eta_override = eta;
    return characterize(quartz_example(), quartz_geometry(), ModeIndex::excitable(n, m, p), T, o);
}

}  // namespace

TEST(Geometry, Validation) {
    EXPECT_NO_THROW(quartz_geometry().validate());
    EXPECT_THROW((CavityGeometry{0.0, 5e-4, 0.3, std::nullopt}.validate()), ValidationError);
    EXPECT_THROW((CavityGeometry{0.015, -1.0, 0.3, std::nullopt}.validate()), ValidationError);
    // 2 h0 must stay well below R
    EXPECT_THROW((CavityGeometry{0.015, 5e-3, 0.09, std::nullopt}.validate()), ValidationError);
    EXPECT_THROW((CavityGeometry{0.015, 5e-4, 0.3, 0.02}.validate()), ValidationError);
    EXPECT_NO_THROW((CavityGeometry{0.015, 5e-4, 0.3, 0.01}.validate()));
}

TEST(ModeIndexTest, OnlyExcitableModesByDefault) {
    EXPECT_NO_THROW(ModeIndex::excitable(227, 2, 4));
    EXPECT_THROW(ModeIndex::excitable(2), ValidationError);
    EXPECT_THROW(ModeIndex::excitable(1, 1, 0), ValidationError);
    EXPECT_THROW(ModeIndex::excitable(1, 0, 3), ValidationError);
    EXPECT_THROW(ModeIndex::excitable(1, -2, 0), ValidationError);
    EXPECT_NO_THROW(ModeIndex::relaxed(2, 1, 3));
    EXPECT_THROW(ModeIndex::relaxed(0, 0, 0), ValidationError);
}

TEST(Curvature, QuartzReferenceValues) {
    const Curvatures c = envelope_curvatures(quartz_example(), quartz_geometry(), 1);
    EXPECT_LT(rel(c.alpha, 36514.837167011074), 1e-14);
    EXPECT_EQ(c.alpha, c.beta);
    const Trapping t = trapping_parameters(c, quartz_geometry().L);
    EXPECT_LT(rel(t.eta_x, 5.0804347690876461), 1e-14);
}

TEST(Curvature, TrappingRoundTrip) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> eta(0.1, 20.0);
    for (int i = 0; i < 100; ++i) {
        const Trapping t{eta(rng), eta(rng)};
        const Trapping back = trapping_parameters(curvatures_from_trapping(t, 0.015), 0.015);
        EXPECT_LT(rel(back.eta_x, t.eta_x), 1e-14);
        EXPECT_LT(rel(back.eta_y, t.eta_y), 1e-14);
    }
}

TEST(ModeShapeTest, HermiteGaussianProfile) {
    const Curvatures c{1e4, 2e4};
    const ModeShape u = mode_shape(ModeIndex::excitable(3, 2, 0), c);
    EXPECT_EQ(u(0.0, 0.0), -2.0);  // H_2(0) H_0(0)
    const double x = 1e-3;
    const double y = 2e-3;
    const double kx = std::sqrt(1e4 * 3 * pi);
    const double ky = std::sqrt(2e4 * 3 * pi);
    const double expected = std::exp(-0.5 * kx * kx * x * x) * (4 * kx * kx * x * x - 2) * std::exp(-0.5 * ky * ky * y * y);
    EXPECT_LT(rel(u(x, y), expected), 1e-13);
    EXPECT_LT(rel(u.sigma_x(), 1.0 / kx), 1e-15);
}

TEST(Escape, ReferenceValues) {
    const ModeIndex m00 = ModeIndex::excitable(1);
    const ModeIndex m22 = ModeIndex::excitable(1, 2, 2);
    // 1 - erf(1)^2
    EXPECT_LT(rel(escape_probability(m00, Trapping::symmetric(1.0)), 0.28985537356192179), 1e-14);
    EXPECT_LT(rel(escape_probability(m00, Trapping::symmetric(2.0)), 0.0093335887575416184), 1e-13);
    EXPECT_LT(rel(escape_probability(m22, Trapping::symmetric(2.0)), 0.34500211391128659), 1e-13);
}

TEST(Escape, ComplementaryClosedForm) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> eta(0.05, 1.2);
    for (int i = 0; i < 200; ++i) {
        const int n = 2 * (i % 5) + 1;
        const Trapping t{eta(rng), eta(rng)};
        const double rn = std::sqrt(double(n));
        const double direct = 1.0 - sf::erf(rn * t.eta_x) * sf::erf(rn * t.eta_y);
        // the direct form loses digits to cancellation; compare absolutely
        EXPECT_NEAR(escape_probability(ModeIndex::excitable(n), t), direct, 1e-15);
    }
}

TEST(Escape, BoundedAndDecreasingInTrapping) {
    for (const auto& mode : {ModeIndex::excitable(1), ModeIndex::excitable(7, 2, 2), ModeIndex::excitable(3, 4, 0)}) {
        double prev = 1.0;
        for (double eta = 0.05; eta < 4.0; eta += 0.05) {
            const double chi = escape_probability(mode, Trapping::symmetric(eta));
            EXPECT_GE(chi, 0.0);
            EXPECT_LE(chi, 1.0);
            EXPECT_LE(chi, prev);
            prev = chi;
        }
    }
}

TEST(Escape, LogFormAgreesAndOutlivesUnderflow) {
    for (double eta : {0.3, 1.0, 2.5, 4.0}) {
        for (int m : {0, 2}) {
            const ModeIndex mode = ModeIndex::excitable(3, m, m);
            const Trapping t = Trapping::symmetric(eta);
            EXPECT_NEAR(log10_escape_probability(mode, t), std::log10(escape_probability(mode, t)), 1e-12);
        }
    }
    const ModeIndex mode = ModeIndex::excitable(227);
    const Trapping t = Trapping::symmetric(10.7);
    EXPECT_EQ(escape_probability(mode, t), 0.0);
    const double lg = log10_escape_probability(mode, t);
    EXPECT_TRUE(std::isfinite(lg));
    // ln chi ~ ln 2 + ln erfc(sqrt(227) 10.7)
    EXPECT_NEAR(lg, (std::log(2.0) + sf::log_erfc(std::sqrt(227.0) * 10.7)) / std::log(10.0), 1e-9);
}

TEST(Escape, HigherModesFractionsAreConsistent) {
    for (int m : {4, 6, 8}) {
        double prev = 0.0;
        for (double s = 0.25; s < 8.0; s += 0.25) {
            const double inside = axis_inside_fraction(m, s);
            EXPECT_NEAR(inside + axis_tail_fraction(m, s), 1.0, 1e-11) << m << " " << s;
            EXPECT_GE(inside, prev);
            prev = inside;
        }
        EXPECT_NEAR(axis_inside_fraction(m, 15.0), 1.0, 1e-15);
    }
}

TEST(Threshold, DecreasesWithOvertone) {
    double prev = 1e9;
    for (int n = 1; n <= 31; n += 2) {
        const double eta = trapping_threshold(ModeIndex::excitable(n), 1e-6);
        EXPECT_LT(eta, prev);
        EXPECT_NEAR(log10_escape_probability(ModeIndex::excitable(n), Trapping::symmetric(eta)), -6.0, 1e-9);
        // threshold scales as 1/sqrt(n)
        EXPECT_LT(rel(eta * std::sqrt(double(n)), trapping_threshold(ModeIndex::excitable(1), 1e-6)), 1e-9);
        prev = eta;
    }
    EXPECT_THROW(trapping_threshold(ModeIndex::excitable(1), 0.0), DomainError);
    EXPECT_THROW(trapping_threshold(ModeIndex::excitable(1), 1.0), DomainError);
}

TEST(Frequency, QuartzFundamental) {
    const double w = mode_frequency(quartz_example(), quartz_geometry(), ModeIndex::excitable(1));
    EXPECT_LT(rel(w / (2 * pi), 3151491.0079535780), 1e-14);
}

TEST(Frequency, LeadingOrderIsLinearInOvertone) {
    const auto mat = quartz_example();
    const auto geo = quartz_geometry();
    const double w1 = mode_frequency(mat, geo, ModeIndex::excitable(1));
    EXPECT_EQ(mode_frequency(mat, geo, ModeIndex::excitable(227)) / w1, 227.0);
    // in-plane numbers only enter through the ladder bracket
    EXPECT_EQ(mode_frequency(mat, geo, ModeIndex::excitable(1, 2, 2)), w1);
}

TEST(Frequency, FullModelBracket) {
    const auto mat = quartz_example();
    const auto geo = quartz_geometry();
    const double chi = std::sqrt(2 * geo.h0 * mat.M / (geo.R * mat.c_bar_z)) / pi;
    for (int n : {1, 3, 37}) {
        const double w0 = mode_frequency(mat, geo, ModeIndex::excitable(n));
        for (auto [m, p] : {std::pair{0, 0}, {2, 0}, {2, 4}}) {
            const double w = mode_frequency(mat, geo, ModeIndex::excitable(n, m, p), FrequencyModel::full);
            const double bracket = 1 + chi / n * (2 * m + 1) + chi / n * (2 * p + 1);
            EXPECT_LT(rel(w * w / (w0 * w0), bracket), 1e-14);
        }
    }
}

TEST(Mass, FlatPlateAndClosedForms) {
    const auto mat = quartz_example();
    const auto geo = quartz_geometry();
    const MassResult r = effective_mass(mat, geo, ModeIndex::excitable(1), Trapping::symmetric(2.0));
    EXPECT_LT(rel(r.m_flat, 1.18935e-3), 1e-14);
    EXPECT_LT(rel(r.xi, 5.1409416137903018), 1e-14);
    EXPECT_LT(rel(r.m_eff * r.xi, r.m_flat), 1e-15);
    const double xi22 = geometric_factor(ModeIndex::excitable(1, 2, 2), Trapping::symmetric(2.0));
    EXPECT_LT(rel(xi22, 0.12149271506987678), 1e-13);
}

TEST(Mass, GeometricFactorClosedForms) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> eta(0.2, 6.0);
    for (int i = 0; i < 200; ++i) {
        const int n = 2 * (i % 40) + 1;
        const double ex = eta(rng);
        const double ey = eta(rng);
        const double rn = std::sqrt(double(n));
        const double xi00 = 4 / pi * ex * ey * n / (sf::erf(rn * ex) * sf::erf(rn * ey));
        EXPECT_LT(rel(geometric_factor(ModeIndex::excitable(n), {ex, ey}), xi00), 1e-13);
        const double s = rn * ex;
        const double b = sf::erf(s) - s / std::sqrt(pi) * (1 + 2 * s * s) * std::exp(-s * s);
        const double xi22 = n * ex * ex / (16 * pi * b * b);
        EXPECT_LT(rel(geometric_factor(ModeIndex::excitable(n, 2, 2), Trapping::symmetric(ex)), xi22), 1e-11);
    }
}

TEST(Mass, QuotedTrappingValues) {
    const Trapping t = Trapping::symmetric(10.7);
    EXPECT_LT(rel(geometric_factor(ModeIndex::excitable(7), t), 1020.4123683371014), 1e-13);
    EXPECT_LT(rel(geometric_factor(ModeIndex::excitable(37), t), 5393.6082326389647), 1e-13);
    EXPECT_LT(rel(geometric_factor(ModeIndex::excitable(227), t), 33090.515373217432), 1e-13);
}

TEST(Mass, MonotoneInTrappingAndOvertone) {
    for (int n = 1; n <= 15; n += 2) {
        double prev = 0.0;
        for (double eta = 0.5; eta <= 12.0; eta += 0.1) {
            const double xi = geometric_factor(ModeIndex::excitable(n), Trapping::symmetric(eta));
            EXPECT_GT(xi, prev);
            EXPECT_GT(geometric_factor(ModeIndex::excitable(n + 2), Trapping::symmetric(eta)), xi);
            if (eta >= 1.0) {
                EXPECT_GT(xi, geometric_factor(ModeIndex::excitable(n, 2, 2), Trapping::symmetric(eta)));
            }
            prev = xi;
        }
    }
}

TEST(Mass, RejectsNonPositiveTrapping) {
    EXPECT_THROW(geometric_factor(ModeIndex::excitable(1), {0.0, 1.0}), ValidationError);
    EXPECT_THROW(geometric_factor(ModeIndex::excitable(1), {1.0, -1.0}), ValidationError);
}

TEST(Zpf, FlatPlateReferenceValues) {
    const auto c = characterize(quartz_example(), quartz_geometry(), ModeIndex::excitable(1), 0.02);
    EXPECT_LT(rel(c.x_zpf_flat, 4.7317334718078281e-20), 1e-13);
    EXPECT_LT(rel(c.p_zpf_flat, 1.1143609665287058e-15), 1e-13);
}

TEST(Zpf, MinimumUncertaintyAndFlatScaling) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> eta(0.1, 15.0);
    const double h2 = constants::hbar * constants::hbar / 4;
    for (int i = 0; i < 300; ++i) {
        const int n = 2 * (i % 120) + 1;
        const auto c = at_eta(n, eta(rng), (i % 3 == 0) ? 2 : 0, (i % 3 == 0) ? 2 : 0);
        const double x2 = c.x_zpf * c.x_zpf;
        const double p2 = c.p_zpf * c.p_zpf;
        EXPECT_LT(rel(x2 * p2, h2), 1e-12);
        EXPECT_LT(rel(x2, c.x_zpf_flat * c.x_zpf_flat * c.xi), 1e-13);
        EXPECT_LT(rel(p2, c.p_zpf_flat * c.p_zpf_flat / c.xi), 1e-13);
    }
}

TEST(Zpf, LeadingOrderClosedForm) {
    const auto mat = quartz_example();
    const auto geo = quartz_geometry();
    for (int n : {1, 5, 41}) {
        for (double eta : {0.3, 1.0, 4.0}) {
            const auto c = at_eta(n, eta);
            const double e = sf::erf(std::sqrt(double(n)) * eta);
            const double x2 = constants::hbar * eta * eta /
                              (pi * pi * geo.L * geo.L * std::sqrt(mat.c_bar_z * mat.rho) * e * e);
            EXPECT_LT(rel(c.x_zpf * c.x_zpf, x2), 1e-13);
        }
    }
}

TEST(Zpf, SqrtOvertoneGainAtSaturatedTrapping) {
    const auto ref = at_eta(7, 5.0);
    for (int n : {9, 37, 63, 227}) {
        const auto c = at_eta(n, 5.0);
        EXPECT_LT(rel(c.x_zpf / c.x_zpf_flat, ref.x_zpf / ref.x_zpf_flat * std::sqrt(n / 7.0)), 1e-6);
        EXPECT_LT(rel(c.x_zpf, ref.x_zpf), 1e-6);
    }
}

TEST(Thermal, ReferenceOccupancies) {
    EXPECT_LT(rel(thermal_occupancy(2 * pi * 3.138e6, 0.02), 132.30253404023814), 1e-12);
    EXPECT_LT(rel(thermal_occupancy(2 * pi * 712.5e6, 0.02), 0.22087387262957384), 1e-12);
    const auto c1 = characterize(quartz_example(), quartz_geometry(), ModeIndex::excitable(1), 0.02);
    const auto c227 = characterize(quartz_example(), quartz_geometry(), ModeIndex::excitable(227), 0.02);
    EXPECT_LT(rel(c1.n_thermal, 131.73403390145804), 1e-12);
    EXPECT_LT(rel(c227.n_thermal, 0.21901410885698399), 1e-12);
}

TEST(Thermal, ClassicalAndQuantumLimits) {
    const double w = 2 * pi * 1e3;
    const double T = 300.0;
    const double kT = constants::boltzmann * T / (constants::hbar * w);
    EXPECT_NEAR(thermal_occupancy(w, T) / (kT - 0.5), 1.0, 1e-9);
    EXPECT_LT(thermal_occupancy(2 * pi * 1e12, 0.01), 1e-200);
    EXPECT_THROW(thermal_occupancy(w, 0.0), DomainError);
    EXPECT_THROW(thermal_occupancy(w, -1.0), DomainError);
    EXPECT_THROW(thermal_occupancy(0.0, 1.0), DomainError);
}

TEST(Characterize, DerivedTrappingIsConsistent) {
    const auto c = characterize(quartz_example(), quartz_geometry(), ModeIndex::excitable(3), 0.02);
    EXPECT_LT(rel(c.eta_x, 5.0804347690876461), 1e-14);
    EXPECT_EQ(c.eta_x, c.eta_y);
    EXPECT_LT(rel(c.xi, geometric_factor(ModeIndex::excitable(3), Trapping::symmetric(c.eta_x))), 1e-15);
    EXPECT_GE(c.chi_inv, 0.0);
    EXPECT_LE(c.chi_inv, 1.0);
    EXPECT_GT(c.omega, 0.0);
}

TEST(Characterize, ErrorPaths) {
    const auto mat = quartz_example();
    const auto geo = quartz_geometry();
    EXPECT_THROW(characterize(mat, geo, ModeIndex::excitable(1), 0.0), DomainError);
    CharacterizeOptions o;
    o.eta_override = -1.0;
    EXPECT_THROW(characterize(mat, geo, ModeIndex::excitable(1), 0.02, o), ValidationError);
    MaterialParams bad = mat;
    bad.rho = 0.0;
    EXPECT_THROW(characterize(bad, geo, ModeIndex::excitable(1), 0.02), ValidationError);
    EXPECT_THROW(characterize(mat, geo, ModeIndex::relaxed(2, 0, 0), 0.02), ValidationError);
}

TEST(Characterize, Deterministic) {
    const auto a = at_eta(37, 3.3, 2, 0);
    const auto b = at_eta(37, 3.3, 2, 0);
    EXPECT_EQ(a.x_zpf, b.x_zpf);
    EXPECT_EQ(a.log10_chi_inv, b.log10_chi_inv);
}
