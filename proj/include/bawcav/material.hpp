#pragma once

// Material constants for the thickness-mode model and the material file format.
//
// File format: one `key = value` per line, `#` starts a comment. Keys are
// exactly rho, c_bar_z, e_z, eps_z, M, P, a_x, a_y, kappa_x, kappa_y (SI units).
// a_x, a_y default to 0 and kappa_x, kappa_y to 1 (weak-anisotropy limit).

#include <bawcav/constants.hpp>
#include <bawcav/errors.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>

namespace bawcav {

struct MaterialParams {
    double rho = 0.0;      ///< mass density, kg/m^3
    double c_bar_z = 0.0;  ///< unperturbed effective elastic coefficient, Pa
    double e_z = 0.0;      ///< effective piezoelectric coefficient, C/m^2
    double eps_z = 0.0;    ///< dielectric constant along z, F/m
    double M = 0.0;        ///< transverse elastic parameter (x), Pa
    double P = 0.0;        ///< transverse elastic parameter (y), Pa
    double a_x = 0.0;      ///< dispersion amplitudes, Pa
    double a_y = 0.0;
    double kappa_x = 1.0;  ///< velocity-ratio parameters
    double kappa_y = 1.0;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(std::isfinite(v) && v > 0.0)) {
                throw ValidationError(name, std::string("material: ") + name + " must be > 0");
            }
        };
        positive(rho, "rho");
        positive(c_bar_z, "c_bar_z");
        positive(eps_z, "eps_z");
        positive(M, "M");
        positive(P, "P");
        if (!(std::isfinite(e_z) && e_z >= 0.0)) throw ValidationError("e_z", "material: e_z must be >= 0");
        if (!std::isfinite(a_x)) throw ValidationError("a_x", "material: a_x must be finite");
        if (!std::isfinite(a_y)) throw ValidationError("a_y", "material: a_y must be finite");
        auto ratio = [](double v, const char* name) {
            if (!(v > 0.0 && v < 2.0)) {
                throw ValidationError(name, std::string("material: ") + name + " must lie in (0, 2)");
            }
        };
        ratio(kappa_x, "kappa_x");
        ratio(kappa_y, "kappa_y");
    }

    bool operator==(const MaterialParams&) const = default;
};

/// Throws ValidationError unless n is a positive odd overtone.
inline void require_odd_overtone(int n) {
    if (n <= 0) throw ValidationError("n", "overtone must be positive");
    if (n % 2 == 0) throw ValidationError("n", "overtone must be odd");
}

struct StiffenedConstants {
    double c_z;      ///< Pa
    double c_hat_z;  ///< Pa, overtone dependent
};

/// Piezoelectrically modified elastic coefficients
///   c_z   = c_bar_z - e_z^2 / eps_z
///   c^_z  = c_bar_z - 8/(n^2 pi^2) e_z^2 / eps_z
inline StiffenedConstants stiffened_constants(const MaterialParams& mat, int n) {
    require_odd_overtone(n);
    const double coupling = mat.e_z * mat.e_z / mat.eps_z;
    const double nn = static_cast<double>(n) * n;
    return {mat.c_bar_z - coupling,
            mat.c_bar_z - 8.0 / (nn * constants::pi * constants::pi) * coupling};
}

namespace detail {

// cot(kappa n pi / 2), reduced so that odd multiples of pi/2 give exactly 0.
inline double overtone_cot(double kappa, int n) {
    const double q = kappa * n / 2.0;  // argument in units of pi
    const double f = q - std::round(q);
    if (std::abs(f) * constants::pi < 1e-9) {
        throw SingularityError(kappa, n,
                               "dispersion: cot(kappa*n*pi/2) is singular for kappa=" +
                                   std::to_string(kappa) + ", n=" + std::to_string(n));
    }
    const double t = std::tan(constants::pi * (0.5 - std::abs(f)));
    return f < 0.0 ? -t : t;
}

}  // namespace detail

struct DispersionParameters {
    double M_n;  ///< Pa
    double P_n;  ///< Pa
};

/// Overtone-dependent transverse parameters
///   M_n = M + (a_x/n) cot(kappa_x n pi/2) + (a_y/n) cot(kappa_y n pi/2), P_n likewise.
/// The file format carries one (a, kappa) set; it is applied to both M_n and P_n.
inline DispersionParameters dispersion_parameters(const MaterialParams& mat, int n) {
    require_odd_overtone(n);
    double correction = 0.0;
    if (mat.a_x != 0.0) correction += mat.a_x / n * detail::overtone_cot(mat.kappa_x, n);
    if (mat.a_y != 0.0) correction += mat.a_y / n * detail::overtone_cot(mat.kappa_y, n);
    return {mat.M + correction, mat.P + correction};
}

/// Quartz device used throughout the examples: c^_z = 105 GPa, rho = 2643 kg/m^3,
/// c^_z / M = 0.4, P = M, no piezoelectric correction.
inline MaterialParams quartz_example() {
    MaterialParams m;
    m.rho = 2643.0;
    m.c_bar_z = 105e9;
    m.e_z = 0.0;
    m.eps_z = 4.06e-11;
    m.M = 262.5e9;
    m.P = 262.5e9;
    return m;
}

/// Same as quartz_example() with e_z = 0.1 C/m^2, for piezoelectric readout.
inline MaterialParams quartz_piezo_example() {
    MaterialParams m = quartz_example();
    m.e_z = 0.1;
    return m;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace detail

/// Parses the key=value material format. Unknown or repeated keys and
/// malformed numbers raise ParseError with the line number; invariant
/// violations raise ValidationError naming the field.
inline MaterialParams parse_material(std::istream& in, const std::string& source = "<material>") {
    struct Key {
        std::string_view name;
        double MaterialParams::*field;
        bool required;
    };
    static constexpr std::array<Key, 10> keys{{
        {"rho", &MaterialParams::rho, true},
        {"c_bar_z", &MaterialParams::c_bar_z, true},
        {"e_z", &MaterialParams::e_z, true},
        {"eps_z", &MaterialParams::eps_z, true},
        {"M", &MaterialParams::M, true},
        {"P", &MaterialParams::P, true},
        {"a_x", &MaterialParams::a_x, false},
        {"a_y", &MaterialParams::a_y, false},
        {"kappa_x", &MaterialParams::kappa_x, false},
        {"kappa_y", &MaterialParams::kappa_y, false},
    }};

    MaterialParams mat;
    std::array<bool, keys.size()> seen{};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key = value");
        const std::string_view key = detail::trim(line.substr(0, eq));
        const std::string_view text = detail::trim(line.substr(eq + 1));

        std::size_t idx = keys.size();
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (keys[i].name == key) idx = i;
        }
        if (idx == keys.size()) throw ParseError(source, line_no, "unknown key '" + std::string(key) + "'");
        if (seen[idx]) throw ParseError(source, line_no, "duplicate key '" + std::string(key) + "'");

        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
            throw ParseError(source, line_no, "invalid number '" + std::string(text) + "' for " + std::string(key));
        }
        mat.*(keys[idx].field) = value;
        seen[idx] = true;
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i].required && !seen[i]) {
            throw ValidationError(std::string(keys[i].name),
                                  source + ": missing required key '" + std::string(keys[i].name) + "'");
        }
    }
    mat.validate();
    return mat;
}

inline MaterialParams load_material(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("material", "cannot open material file '" + path.string() + "'");
    return parse_material(in, path.string());
}

}  // namespace bawcav
