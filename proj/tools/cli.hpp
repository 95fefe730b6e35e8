#pragma once

// Command-line front end. run_cli() is the whole program minus the process
// boundary so the tests can drive it in-process.

#include <bawcav/acceptance.hpp>
#include <bawcav/cavity.hpp>
#include <bawcav/detection.hpp>
#include <bawcav/errors.hpp>
#include <bawcav/material.hpp>
#include <bawcav/membrane.hpp>
#include <bawcav/oracle.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace bawcav::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_validation = 2;
inline constexpr int exit_convergence = 3;

inline constexpr int significant_digits = 9;

/// Locale-independent shortest form with at most 9 significant digits.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, significant_digits);
    return {buf, res.ptr};
}

// The double nearest to the 9-digit text, so JSON and CSV carry the same value.
inline double rounded(double v) {
    if (!std::isfinite(v)) return v;
    const std::string s = format_number(v);
    double out = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

using Cell = std::variant<long long, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c) {
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return nullptr;
        return rounded(*d);
    }
    if (const auto* b = std::get_if<bool>(&c)) return *b;
    return std::get<std::string>(c);
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

inline nlohmann::ordered_json table_json(const Table& t) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

inline void write_json(std::ostream& os, const std::string& command, const Table& t,
                       const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["columns"] = t.columns;
    doc["rows"] = table_json(t);
    for (const auto& [k, v] : extra.items()) doc[k] = v;
    os << doc.dump(2) << '\n';
}

/// lo:hi:step, inclusive of hi up to rounding. Empty or malformed ranges are validation errors.
inline std::vector<double> parse_range(const std::string& text, const std::string& field) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        const std::string piece = text.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size() || !std::isfinite(v)) {
            throw ValidationError(field, field + ": expected lo:hi:step, got '" + text + "'");
        }
        parts.push_back(v);
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) throw ValidationError(field, field + ": expected lo:hi:step, got '" + text + "'");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0)) throw ValidationError(field, field + ": step must be > 0");
    if (hi < lo) throw ValidationError(field, field + ": empty range");
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw ValidationError(field, field + ": range has more than 1e6 points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

/// "227", "1,3,5,15" or "1:15:2".
inline std::vector<int> parse_overtones(const std::string& text) {
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        for (double v : parse_range(text, "n")) {
            const double r = std::round(v);
            if (std::abs(v - r) > 1e-9) throw ValidationError("n", "n: range must produce integers");
            out.push_back(static_cast<int>(r));
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            int v = 0;
            const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
                throw ValidationError("n", "n: expected an integer list, got '" + text + "'");
            }
            out.push_back(v);
        }
    }
    if (out.empty()) throw ValidationError("n", "n: empty overtone list");
    for (int n : out) require_odd_overtone(n);
    return out;
}

struct CommonOptions {
    std::string material;
    std::optional<double> L, h0, R, L_tilde, eta;
    std::string n = "1";
    int m = 0;
    int p = 0;
    double temp_k = 0.02;
    std::string format = "csv";
    std::string out;
    std::string frequency = "leading";

    [[nodiscard]] MaterialParams load(const MaterialParams& fallback = quartz_example()) const {
        MaterialParams mat = material.empty() ? fallback : load_material(material);
        mat.validate();
        return mat;
    }

    [[nodiscard]] CavityGeometry geometry() const {
        CavityGeometry g = quartz_geometry();
        if (L) g.L = *L;
        if (h0) g.h0 = *h0;
        if (R) g.R = *R;
        if (L_tilde) g.L_tilde = *L_tilde;
        g.validate();
        return g;
    }

    [[nodiscard]] FrequencyModel model() const {
        return frequency == "full" ? FrequencyModel::full : FrequencyModel::leading_order;
    }

    void check() const {
        if (eta && !(*eta > 0.0)) throw ValidationError("eta", "eta must be > 0");
        if (!(temp_k > 0.0)) throw ValidationError("temp-k", "temperature must be > 0 K");
    }
};

inline void add_common(CLI::App* app, CommonOptions& o, bool with_mode) {
    app->add_option("--material", o.material, "material file (default: built-in quartz example)");
    app->add_option("--L", o.L, "plate half-width, m");
    app->add_option("--h0", o.h0, "plate half-thickness, m");
    app->add_option("--R", o.R, "radius of curvature, m");
    app->add_option("--L-tilde", o.L_tilde, "electrode half-width, m");
    app->add_option("--eta", o.eta, "symmetric trapping parameter override");
    app->add_option("--n", o.n, "overtone(s): 227, 1,3,5 or 1:15:2")->capture_default_str();
    if (with_mode) {
        app->add_option("--m", o.m, "in-plane mode number along x")->capture_default_str();
        app->add_option("--p", o.p, "in-plane mode number along y")->capture_default_str();
    }
    app->add_option("--temp-k", o.temp_k, "temperature, K")->capture_default_str();
    app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app->add_option("--out", o.out, "output file (default: stdout)");
    app->add_option("--frequency", o.frequency, "frequency model")
        ->check(CLI::IsMember({"leading", "full"}))
        ->capture_default_str();
}

inline const std::vector<std::string>& mode_columns() {
    static const std::vector<std::string> cols{"n", "m", "p", "eta", "chi_inv", "xi", "f_Hz", "m_eff_kg",
                                               "x_zpf_m", "p_zpf", "n_thermal"};
    return cols;
}

inline std::vector<Cell> mode_row(const ModeCharacterization& c) {
    return {static_cast<long long>(c.mode.n()), static_cast<long long>(c.mode.m()),
            static_cast<long long>(c.mode.p()), c.eta_x, c.chi_inv, c.xi, c.frequency_hz(), c.m_eff, c.x_zpf,
            c.p_zpf, c.n_thermal};
}

// `fallback` when no path is given, otherwise `file` opened on it.
inline std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty()) return fallback;
    file.open(path);
    if (!file) throw ValidationError("out", "cannot open output file '" + path + "'");
    return file;
}

inline void emit(const CommonOptions& o, std::ostream& out, const std::string& command, const Table& t,
                 const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
    std::ofstream file;
    std::ostream& os = open_output(o.out, file, out);
    if (o.format == "json") {
        write_json(os, command, t, extra);
    } else {
        write_csv(os, t);
    }
}

inline int cmd_characterize(const CommonOptions& o, std::ostream& out) {
    o.check();
    const MaterialParams mat = o.load();
    const CavityGeometry geo = o.geometry();
    CharacterizeOptions opts;
    opts.eta_override = o.eta;
    opts.frequency = o.model();
    Table t;
    t.columns = {"n", "m", "p", "eta_x", "eta_y", "alpha_per_m2", "beta_per_m2", "f_Hz", "chi_inv",
                 "log10_chi_inv", "xi", "m_eff_kg", "m_flat_kg", "x_zpf_m", "p_zpf", "x_zpf_flat_m", "p_zpf_flat",
                 "temp_K", "n_thermal"};
    for (int n : parse_overtones(o.n)) {
        const auto c = characterize(mat, geo, ModeIndex::excitable(n, o.m, o.p), o.temp_k, opts);
        t.rows.push_back({static_cast<long long>(n), static_cast<long long>(o.m), static_cast<long long>(o.p),
                          c.eta_x, c.eta_y, c.alpha, c.beta, c.frequency_hz(), c.chi_inv, c.log10_chi_inv, c.xi,
                          c.m_eff, c.m_flat, c.x_zpf, c.p_zpf, c.x_zpf_flat, c.p_zpf_flat, c.temperature,
                          c.n_thermal});
    }
    emit(o, out, "characterize", t);
    return exit_ok;
}

inline int cmd_sweep(const CommonOptions& o, const std::string& eta_range, const std::string& r_range,
                     std::ostream& out) {
    o.check();
    if (eta_range.empty() == r_range.empty()) {
        throw ValidationError("eta-range", "sweep needs exactly one of --eta-range or --R-range");
    }
    if (!r_range.empty() && o.eta) throw ValidationError("eta", "--eta cannot be combined with --R-range");
    const MaterialParams mat = o.load();
    const std::vector<int> overtones = parse_overtones(o.n);
    Table t;
    t.columns = mode_columns();
    if (!eta_range.empty()) {
        const std::vector<double> etas = parse_range(eta_range, "eta-range");
        for (double e : etas) {
            if (!(e > 0.0)) throw ValidationError("eta-range", "eta must be > 0");
        }
        const CavityGeometry geo = o.geometry();
        for (int n : overtones) {
            for (double e : etas) {
                CharacterizeOptions opts;
                opts.eta_override = e;
                opts.frequency = o.model();
                t.rows.push_back(mode_row(characterize(mat, geo, ModeIndex::excitable(n, o.m, o.p), o.temp_k, opts)));
            }
        }
    } else {
        const std::vector<double> radii = parse_range(r_range, "R-range");
        std::vector<CavityGeometry> geos;
        for (double r : radii) {
            CavityGeometry g = o.geometry();
            g.R = r;
            g.validate();
            geos.push_back(g);
        }
        for (int n : overtones) {
            for (const auto& g : geos) {
                CharacterizeOptions opts;
                opts.frequency = o.model();
                t.rows.push_back(mode_row(characterize(mat, g, ModeIndex::excitable(n, o.m, o.p), o.temp_k, opts)));
            }
        }
    }
    emit(o, out, "sweep", t);
    return exit_ok;
}

inline int cmd_electrode(const CommonOptions& o, std::optional<double> mu_opt, std::ostream& out) {
    o.check();
    const MaterialParams mat = o.load();
    const CavityGeometry geo = o.geometry();
    const double target = mu_opt.value_or(default_mu_opt());
    Table t;
    t.columns = {"n", "eta", "L_tilde_m", "mu", "mu_opt", "C0_F", "Z_closed_ohm", "Z_derived_ohm",
                 "Z_over_R_motional", "shunt_negligible"};
    for (int n : parse_overtones(o.n)) {
        const double eta = o.eta ? *o.eta : trapping_parameters(envelope_curvatures(mat, geo, n), geo.L).eta_x;
        const ElectrodeDesign d = shunt_impedance(mat, geo, eta, n, target);
        const MotionalComparison cmp = shunt_vs_motional(d.Z_derived);
        t.rows.push_back({static_cast<long long>(n), eta, d.L_tilde, d.mu, d.mu_opt, d.C0, d.Z_closed, d.Z_derived,
                          cmp.ratio, cmp.negligible});
    }
    emit(o, out, "electrode", t);
    return exit_ok;
}

inline int cmd_membrane(const CommonOptions& o, const MembraneSpec& spec, std::ostream& out) {
    o.check();
    spec.validate();
    const MaterialParams mat = o.load();
    const CavityGeometry geo = o.geometry();
    const std::vector<int> overtones = parse_overtones(o.n);
    CharacterizeOptions opts;
    opts.eta_override = o.eta;
    opts.frequency = o.model();
    const auto cav = characterize(mat, geo, ModeIndex::excitable(overtones.front(), o.m, o.p), o.temp_k, opts);
    const ComparisonReport rep = compare(cav, spec, o.temp_k);
    Table t;
    t.columns = {"resonator", "f_Hz", "m_eff_kg", "x_zpf_m", "n_thermal"};
    for (const auto* r : {&rep.cavity, &rep.membrane}) {
        t.rows.push_back({r->label, r->frequency_hz, r->m_eff, r->x_zpf, r->n_thermal});
    }
    nlohmann::ordered_json extra;
    extra["temperature_K"] = rounded(rep.temperature);
    extra["membrane_x_zpf_canonical_m"] = rounded(rep.membrane_x_zpf_canonical);
    extra["notes"] = rep.notes;
    emit(o, out, "membrane", t, extra);
    return exit_ok;
}

inline void print_report(std::ostream& os, const acceptance::Report& rep) {
    for (const auto& c : rep.criteria) {
        os << (c.pass() ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << '\n';
        for (const auto& k : c.checks) {
            os << "        " << (k.pass ? "ok  " : "FAIL") << ' ' << k.label << ": measured " << format_number(k.measured)
               << ", reference " << format_number(k.reference) << ", tolerance " << k.tolerance << '\n';
        }
    }
    os << (rep.all_pass() ? "ALL PASS" : "SOME CRITERIA FAILED") << '\n';
}

inline int cmd_paper_report(const CommonOptions& o, bool explicit_format, std::ostream& out) {
    o.check();
    acceptance::Inputs in;
    if (!o.material.empty()) {
        in.material = o.load();
        if (in.material.e_z > 0.0) in.piezo_material = in.material;
        else in.piezo_material.eps_z = in.material.eps_z;
    }
    in.geometry = o.geometry();
    if (o.eta) in.eta_quoted = *o.eta;
    in.temperature = o.temp_k;
    const acceptance::Report rep = acceptance::evaluate(in);

    std::ofstream file;
    std::ostream& os = open_output(o.out, file, out);
    if (!explicit_format) {
        print_report(os, rep);
    } else {
        Table t;
        t.columns = {"criterion", "title", "check", "measured", "reference", "tolerance", "pass"};
        for (const auto& c : rep.criteria) {
            for (const auto& k : c.checks) {
                t.rows.push_back({static_cast<long long>(c.id), c.title, k.label, k.measured, k.reference,
                                  k.tolerance, k.pass});
            }
        }
        if (o.format == "json") {
            nlohmann::ordered_json extra;
            auto crit = nlohmann::ordered_json::array();
            for (const auto& c : rep.criteria) crit.push_back({{"criterion", c.id}, {"pass", c.pass()}});
            extra["criteria"] = crit;
            extra["all_pass"] = rep.all_pass();
            write_json(os, "paper-report", t, extra);
        } else {
            write_csv(os, t);
        }
    }
    return rep.all_pass() ? exit_ok : exit_fail;
}

inline int cmd_oracle(const CommonOptions& o, std::uint64_t seed, int count, std::ostream& out) {
    if (count < 1) throw ValidationError("count", "count must be >= 1");
    const MaterialParams mat = o.load();
    const CavityGeometry geo = o.geometry();
    const oracle::OracleReport rep = oracle::run_closed_form_oracles(seed, count);
    Table t;
    t.columns = {"family", "case", "closed_form", "numeric", "rel_error", "tolerance", "pass", "parameters"};
    for (const auto& c : rep.checks) {
        t.rows.push_back({c.family, static_cast<long long>(c.case_index), c.closed_form, c.numeric, c.rel_error,
                          c.tolerance, c.pass, c.parameters});
    }
    bool ok = rep.all_pass();
    const oracle::EigenChecks e = oracle::eigen_validation(mat, geo, parse_overtones(o.n).front());
    auto add = [&](const std::string& name, double closed, double numeric, double tol, double err) {
        const bool pass = err <= tol;
        ok = ok && pass;
        t.rows.push_back({name, 0LL, closed, numeric, err, tol, pass, std::string("n=") + o.n});
    };
    add("eigen ladder ratio", 1.0, e.ladder_ratio, acceptance::ladder_tol, std::abs(e.ladder_ratio - 1.0));
    add("eigen envelope curvature", e.analytic_curvature, e.fitted_curvature, acceptance::curvature_rel_tol,
        std::abs(e.fitted_curvature / e.analytic_curvature - 1.0));
    add("eigen bracket ratio", e.omega_ratio_sq_closed, e.omega_ratio_sq_numeric, acceptance::bracket_rel_tol,
        std::abs(e.omega_ratio_sq_numeric / e.omega_ratio_sq_closed - 1.0));
    nlohmann::ordered_json extra;
    extra["seed"] = seed;
    extra["skipped"] = rep.skipped;
    extra["all_pass"] = ok;
    emit(o, out, "oracle", t, extra);
    return ok ? exit_ok : exit_fail;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trapped-mode quantum figures of merit for curved bulk acoustic wave cavities", "bawcav"};
    app.require_subcommand(1);

    CommonOptions ch_o, sw_o, el_o, mb_o, pr_o, or_o;
    auto* ch = app.add_subcommand("characterize", "frequency, mass, ZPF and occupancy of one mode");
    add_common(ch, ch_o, true);

    auto* sw = app.add_subcommand("sweep", "mode figures over an eta or R grid");
    add_common(sw, sw_o, true);
    std::string eta_range, r_range;
    sw->add_option("--eta-range", eta_range, "lo:hi:step");
    sw->add_option("--R-range", r_range, "lo:hi:step, m");

    auto* el = app.add_subcommand("electrode", "optimal electrode size and parasitic shunt");
    add_common(el, el_o, false);
    std::optional<double> mu_opt;
    el->add_option("--mu-opt", mu_opt, "target overlap (default erf(3/sqrt2)^2)");

    auto* mb = app.add_subcommand("membrane", "stressed membrane baseline next to a cavity mode");
    mb->set_help_flag("--help", "print this help message and exit");  // frees --h for the thickness
    add_common(mb, mb_o, true);
    MembraneSpec spec = quartz_membrane();
    mb->add_option("--a", spec.a, "side along x, m")->capture_default_str();
    mb->add_option("--b", spec.b, "side along y, m")->capture_default_str();
    mb->add_option("--h", spec.h, "thickness, m")->capture_default_str();
    mb->add_option("--tau", spec.tau, "stress, Pa")->capture_default_str();
    mb->add_option("--rho", spec.rho, "density, kg/m^3")->capture_default_str();
    mb->add_option("--mode-m", spec.mode_m, "mode number along x")->capture_default_str();
    mb->add_option("--mode-n", spec.mode_n, "mode number along y")->capture_default_str();

    auto* pr = app.add_subcommand("paper-report", "reproduce the published quartz figures");
    add_common(pr, pr_o, false);

    auto* orc = app.add_subcommand("oracle", "closed forms vs quadrature and eigensolver");
    add_common(orc, or_o, false);
    std::uint64_t seed = oracle::default_oracle_seed;
    int count = 20;
    orc->add_option("--seed", seed, "random seed")->capture_default_str();
    orc->add_option("--count", count, "parameter sets per family")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*ch) return cmd_characterize(ch_o, out);
        if (*sw) return cmd_sweep(sw_o, eta_range, r_range, out);
        if (*el) return cmd_electrode(el_o, mu_opt, out);
        if (*mb) return cmd_membrane(mb_o, spec, out);
        if (*pr) return cmd_paper_report(pr_o, pr->count("--format") > 0, out);
        if (*orc) return cmd_oracle(or_o, seed, count, out);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (estimate " << format_number(e.estimate()) << ", error bound "
            << format_number(e.error_bound()) << ")\n";
        return exit_convergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }
    return exit_validation;
}

}  // namespace bawcav::cli
