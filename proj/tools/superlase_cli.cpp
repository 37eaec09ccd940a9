// Command-line front end. Every table goes out as CSV (with '#' metadata
// lines) or JSON, floats printed with 17 significant digits.

#include "CLI11.hpp"
#include "json.hpp"

#include "superlase/errors.hpp"
#include "superlase/params.hpp"
#include "superlase/perturbation.hpp"
#include "superlase/pulse.hpp"
#include "superlase/semiclassics.hpp"
#include "superlase/spectrum.hpp"
#include "superlase/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

using namespace superlase;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }
    void meta(const std::string& key, double value);
    void meta(const std::string& key, int value) { metadata.emplace_back(key, std::to_string(value)); }
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::meta(const std::string& key, double value)
{
    metadata.emplace_back(key, fmt(value));
}

void write_csv(std::ostream& os, const Table& t)
{
    for (const auto& [k, v] : t.metadata) {
        os << "# " << k << ": " << v << '\n';
    }
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        os << (j ? "," : "") << t.columns[j];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            os << (j ? "," : "");
            if (const double* d = std::get_if<double>(&row[j])) {
                os << fmt(*d);
            } else {
                os << std::get<std::string>(row[j]);
            }
        }
        os << '\n';
    }
}

json cell_json(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) {
        // Round-trip through the 17-digit text so both formats carry identical values.
        return std::isfinite(*d) ? json(std::stod(fmt(*d))) : json(fmt(*d));
    }
    return std::get<std::string>(c);
}

void write_json(std::ostream& os, const Table& t)
{
    json doc;
    json meta = json::object();
    for (const auto& [k, v] : t.metadata) {
        meta[k] = v;
    }
    doc["metadata"] = meta;
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) {
            r.push_back(cell_json(c));
        }
        rows.push_back(r);
    }
    doc["rows"] = rows;
    os << doc.dump(2) << '\n';
}

struct Output {
    std::string format = "csv";
    std::string path;

    void emit(const Table& t) const
    {
        std::ofstream file;
        if (!path.empty()) {
            file.open(path);
            if (!file) {
                throw InvalidArgument("cannot open output file " + path);
            }
        }
        std::ostream& os = path.empty() ? std::cout : file;
        if (format == "json") {
            write_json(os, t);
        } else {
            write_csv(os, t);
        }
    }
};

void add_output_options(CLI::App* app, Output& out)
{
    app->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("-o,--output", out.path, "Output file (default stdout)");
}

/// Parses "a:b:step" into a uniformly spaced grid including both ends.
std::vector<double> parse_range(const std::string& spec)
{
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw InvalidArgument("bad number '" + item + "' in range " + spec);
        }
    }
    if (parts.size() != 3) {
        throw InvalidArgument("range must be start:stop:step, got " + spec);
    }
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || !(hi >= lo)) {
        throw InvalidArgument("range needs step > 0 and stop >= start: " + spec);
    }
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    if (n > 10'000'000) {
        throw InvalidArgument("range has too many points: " + spec);
    }
    std::vector<double> out;
    for (long k = 0; k <= n; ++k) {
        out.push_back(lo + static_cast<double>(k) * step);
    }
    return out;
}

std::vector<double> pump_values(const std::optional<double>& single, const std::string& range)
{
    if (single && !range.empty()) {
        throw InvalidArgument("give either --p or --p-grid, not both");
    }
    if (single) {
        return {*single};
    }
    if (range.empty()) {
        throw InvalidArgument("one of --p or --p-grid is required");
    }
    return parse_range(range);
}

unsigned sweep_threads()
{
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("SUPERLASE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end == cap || *end != '\0' || v < 1) {
            throw InvalidArgument("SUPERLASE_THREADS must be a positive integer");
        }
        threads = std::min(threads, static_cast<unsigned>(v));
    }
    return threads;
}

// ---------------------------------------------------------------------------

struct SemiclassicalArgs {
    int N = 0;
    double c = 0.0;
    std::optional<double> p;
    std::string p_grid;
    Output out;
};

void cmd_semiclassical(const SemiclassicalArgs& a)
{
    const auto grid = pump_values(a.p, a.p_grid);
    stationary_inputs(a.N, a.c, 0.0);
    Table t;
    t.meta("command", "semiclassical");
    t.meta("N", a.N);
    t.meta("c", a.c);
    t.columns = {"p", "S00", "S11", "S22", "alpha"};
    for (double p : grid) {
        const auto st = semiclassical_steady(a.N, a.c, p);
        t.rows.push_back({p, st.S00, st.S11, st.S22, st.alpha});
    }
    a.out.emit(t);
}

struct SteadyArgs {
    int N = 0;
    double c = 0.0;
    std::optional<double> p;
    std::string p_grid;
    bool verify_oracle = false;
    bool coeff_diff = false;
    double oracle_tol = 1e-8;
    Output out;
};

void emit_coeff_diff(const SteadyArgs& a, double p)
{
    const auto diff = diff_generator_forms(a.N, a.c, p);
    Table t;
    t.meta("command", "steady --coeff-diff");
    t.meta("N", a.N);
    t.meta("c", a.c);
    t.meta("p", p);
    t.meta("mismatches", static_cast<int>(diff.mismatches.size()));
    t.meta("literal_trace_defect", diff.literal_trace_defect);
    t.meta("derived_trace_defect", diff.derived_trace_defect);
    t.meta("verdict", diff.verdict);
    t.columns = {"row_l", "row_m", "row_r", "col_l", "col_m", "col_r", "literal", "derived", "class"};
    for (const auto& m : diff.mismatches) {
        std::string kind = "other";
        if (m.row == m.col) {
            kind = "diagonal";
        } else if (m.row.m == m.col.m) {
            kind = "pump";
        }
        t.rows.push_back({double(m.row.l), double(m.row.m), double(m.row.r), double(m.col.l), double(m.col.m),
                          double(m.col.r), m.literal, m.derived, kind});
    }
    a.out.emit(t);
}

void cmd_steady(const SteadyArgs& a)
{
    const auto grid = pump_values(a.p, a.p_grid);
    if (a.coeff_diff) {
        if (grid.size() != 1) {
            throw InvalidArgument("--coeff-diff takes a single --p");
        }
        emit_coeff_diff(a, grid.front());
        return;
    }
    if (a.verify_oracle && a.N > 8) {
        throw InvalidArgument("--verify-oracle is limited to N <= 8");
    }
    const unsigned threads = sweep_threads();
    const auto rows = sweep_pump(a.N, a.c, grid, threads);

    Table t;
    t.meta("command", "steady");
    t.meta("N", a.N);
    t.meta("c", a.c);
    t.meta("generator", to_string(GeneratorForm::FirstPrinciples));
    t.columns = {"p", "S00", "S11", "S22", "trace", "var00", "var11", "var22", "semi_S00", "semi_S11", "semi_S22",
                 "pert_S00", "pert_S11", "pert_S22"};
    if (a.verify_oracle) {
        t.meta("oracle_tolerance", a.oracle_tol);
        t.columns.push_back("oracle_max_diff");
    }
    const double nan = std::nan("");
    double worst = 0.0;
    for (const auto& r : rows) {
        std::vector<Cell> row{r.p,
                              r.quantum.S00,
                              r.quantum.S11,
                              r.quantum.S22,
                              r.quantum.total(),
                              r.quantum.var00,
                              r.quantum.var11,
                              r.quantum.var22,
                              r.semiclassical ? r.semiclassical->S00 : nan,
                              r.semiclassical ? r.semiclassical->S11 : nan,
                              r.semiclassical ? r.semiclassical->S22 : nan,
                              r.perturbative.S00,
                              r.perturbative.S11,
                              r.perturbative.S22};
        if (a.verify_oracle) {
            const auto exact = solve_stationary(assemble_generator(a.N, a.c, r.p));
            const auto oracle = evolve_oracle(a.N, a.c, r.p, DensityMatrix::ground_state(a.N));
            const double diff = max_entry_difference(exact.rho, oracle.rho);
            worst = std::max(worst, diff);
            row.emplace_back(diff);
        }
        t.rows.push_back(std::move(row));
    }
    a.out.emit(t);
    if (a.verify_oracle && worst > a.oracle_tol) {
        throw VerificationFailure("oracle disagreement " + fmt(worst) + " exceeds " + fmt(a.oracle_tol));
    }
}

struct PulseArgs {
    double p = 0.0;
    double c = 0.0;
    int points = 200;
    std::string method = "series";
    bool both = false;
    bool gaussian = false;
    int n_max = 0;
    double prefactor = 1.0;
    Output out;
};

void cmd_pulse(const PulseArgs& a)
{
    if (a.points < 1) {
        throw InvalidArgument("--points must be positive");
    }
    const double s = pulse_s(a.c, a.p);
    const double d = pulse_d(a.c, a.p);
    const auto tau = phase_grid(a.points);

    Table t;
    t.meta("command", "pulse");
    t.meta("p", a.p);
    t.meta("c", a.c);
    t.meta("s", s);
    t.meta("d", d);
    t.meta("prefactor", a.prefactor);

    if (a.both) {
        const auto series = pulse_profile(s, d, tau, PulseMethod::BesselSeries, a.n_max);
        const auto quad = pulse_profile(s, d, tau, PulseMethod::Quadrature);
        t.meta("method", "both");
        t.meta("n_max", series.truncation);
        t.meta("transient_periods", quad.transient_periods);
        t.columns = {"tau", "Int_series", "Int_quadrature", "rel_diff"};
        double worst = 0.0;
        for (std::size_t i = 0; i < tau.size(); ++i) {
            const double diff = quad.values[i] != 0.0
                ? std::abs(series.values[i] - quad.values[i]) / std::abs(quad.values[i])
                : std::abs(series.values[i]);
            worst = std::max(worst, diff);
            t.rows.push_back({tau[i], a.prefactor * series.values[i], a.prefactor * quad.values[i], diff});
        }
        t.meta("max_rel_diff", worst);
    } else {
        const auto method = a.method == "quadrature" ? PulseMethod::Quadrature : PulseMethod::BesselSeries;
        const auto profile = pulse_profile(s, d, tau, method, a.n_max);
        t.meta("method", to_string(method));
        if (method == PulseMethod::BesselSeries) {
            t.meta("n_max", profile.truncation);
        } else {
            t.meta("transient_periods", profile.transient_periods);
        }
        t.columns = {"tau", "Int"};
        for (std::size_t i = 0; i < tau.size(); ++i) {
            t.rows.push_back({tau[i], a.prefactor * profile.values[i]});
        }
    }
    if (a.gaussian) {
        const auto g = gaussian_approx(s, d);
        t.meta("gaussian_tau_max", g.tau_max);
        t.meta("gaussian_tau_min", g.tau_min);
        t.meta("gaussian_sigma", g.width);
        t.meta("gaussian_log_peak_height", g.log_peak_height);
    }
    a.out.emit(t);
}

struct SpectrumArgs {
    double p = 0.0;
    double c = 0.0;
    std::string omega;
    int n_max = 0;
    int l_max = 0;
    bool two_sided = false;
    double prefactor = 1.0;
    std::string sidecar;
    Output out;
};

void cmd_spectrum(const SpectrumArgs& a)
{
    const double s = pulse_s(a.c, a.p);
    const double d = pulse_d(a.c, a.p);
    auto omega = parse_range(a.omega);
    if (a.two_sided) {
        std::vector<double> mirrored;
        for (auto it = omega.rbegin(); it != omega.rend(); ++it) {
            if (*it != 0.0) {
                mirrored.push_back(-*it);
            }
        }
        mirrored.insert(mirrored.end(), omega.begin(), omega.end());
        omega = std::move(mirrored);
    }
    const auto spec = time_averaged_spectrum(s, d, omega, a.n_max, a.l_max, true);
    const auto maxima = local_maxima(spec);

    Table t;
    t.meta("command", "spectrum");
    t.meta("p", a.p);
    t.meta("c", a.c);
    t.meta("s", s);
    t.meta("d", d);
    t.meta("n_max", spec.n_max);
    t.meta("l_max", spec.l_max);
    t.meta("prefactor", a.prefactor);
    t.columns = {"omega_over_Omega", "S"};
    for (std::size_t j = 0; j < omega.size(); ++j) {
        t.rows.push_back({omega[j], a.prefactor * spec.values[j]});
    }
    a.out.emit(t);

    std::string sidecar = a.sidecar;
    if (sidecar.empty() && !a.out.path.empty()) {
        sidecar = a.out.path + ".json";
    }
    if (!sidecar.empty()) {
        double parity = 0.0;
        double peak = 0.0;
        for (double v : spec.values) {
            peak = std::max(peak, std::abs(v));
        }
        if (a.two_sided) {
            for (std::size_t j = 0; j < omega.size(); ++j) {
                parity = std::max(parity, std::abs(spec.values[j] - spec.values[omega.size() - 1 - j]));
            }
        }
        json diag;
        diag["s"] = s;
        diag["d"] = d;
        diag["n_max"] = spec.n_max;
        diag["l_max"] = spec.l_max;
        diag["max_imag_residual"] = spec.max_imag_residual;
        diag["truncation_change"] = spec.truncation_change;
        diag["local_maxima"] = maxima;
        if (a.two_sided && peak > 0.0) {
            diag["parity_defect"] = parity / peak;
        }
        std::ofstream file(sidecar);
        if (!file) {
            throw InvalidArgument("cannot open sidecar file " + sidecar);
        }
        file << diag.dump(2) << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Three-level superradiant laser: stationary and pulsed regimes"};
    app.require_subcommand(1);

    SemiclassicalArgs semi;
    auto* semi_cmd = app.add_subcommand("semiclassical", "Large-N stationary populations");
    semi_cmd->add_option("--N", semi.N, "Number of atoms")->required();
    semi_cmd->add_option("--c", semi.c, "Coupling ratio gamma_a/gamma_b")->required();
    semi_cmd->add_option("--p", semi.p, "Pump strength");
    semi_cmd->add_option("--p-grid", semi.p_grid, "Pump grid start:stop:step");
    add_output_options(semi_cmd, semi.out);

    SteadyArgs steady;
    auto* steady_cmd = app.add_subcommand("steady", "Exact stationary state of the master equation");
    steady_cmd->add_option("--N", steady.N, "Number of atoms")->required();
    steady_cmd->add_option("--c", steady.c, "Coupling ratio gamma_a/gamma_b")->required();
    steady_cmd->add_option("--p", steady.p, "Pump strength");
    steady_cmd->add_option("--p-grid", steady.p_grid, "Pump grid start:stop:step");
    steady_cmd->add_flag("--verify-oracle", steady.verify_oracle, "Cross-check by time integration (N <= 8)");
    steady_cmd->add_option("--oracle-tol", steady.oracle_tol, "Entrywise oracle tolerance");
    steady_cmd->add_flag("--coeff-diff", steady.coeff_diff, "Literal recurrence vs derived generator");
    add_output_options(steady_cmd, steady.out);

    PulseArgs pulse;
    auto* pulse_cmd = app.add_subcommand("pulse", "Periodic pulse profile Int(tau)");
    pulse_cmd->add_option("--p", pulse.p, "Pump strength")->required();
    pulse_cmd->add_option("--c", pulse.c, "Coupling ratio (< 1)")->required();
    pulse_cmd->add_option("--points", pulse.points, "Phase samples on [0, 2 pi)");
    pulse_cmd->add_option("--method", pulse.method, "series or quadrature")
        ->check(CLI::IsMember({"series", "quadrature"}));
    pulse_cmd->add_flag("--both", pulse.both, "Emit both methods and their difference");
    pulse_cmd->add_flag("--gaussian", pulse.gaussian, "Append the Gaussian estimate");
    pulse_cmd->add_option("--n-max", pulse.n_max, "Series truncation (default from s)");
    pulse_cmd->add_option("--prefactor", pulse.prefactor, "Multiplier for physical units");
    add_output_options(pulse_cmd, pulse.out);

    SpectrumArgs spectrum;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Time-averaged spectrum S(omega)");
    spectrum_cmd->add_option("--p", spectrum.p, "Pump strength")->required();
    spectrum_cmd->add_option("--c", spectrum.c, "Coupling ratio (< 1)")->required();
    spectrum_cmd->add_option("--omega", spectrum.omega, "omega/Omega grid start:stop:step")->required();
    spectrum_cmd->add_option("--n-max", spectrum.n_max, "Truncation in n");
    spectrum_cmd->add_option("--l-max", spectrum.l_max, "Truncation in l");
    spectrum_cmd->add_flag("--two-sided", spectrum.two_sided, "Mirror the grid to negative frequencies");
    spectrum_cmd->add_option("--prefactor", spectrum.prefactor, "Multiplier for physical units");
    spectrum_cmd->add_option("--sidecar", spectrum.sidecar, "Diagnostics JSON (default <output>.json)");
    add_output_options(spectrum_cmd, spectrum.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*semi_cmd) {
            cmd_semiclassical(semi);
        } else if (*steady_cmd) {
            cmd_steady(steady);
        } else if (*pulse_cmd) {
            cmd_pulse(pulse);
        } else if (*spectrum_cmd) {
            cmd_spectrum(spectrum);
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kExitVerification;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
