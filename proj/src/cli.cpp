#include "bcs2gp/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bcs2gp/coupling.hpp"
#include "bcs2gp/crossover.hpp"
#include "bcs2gp/field.hpp"
#include "bcs2gp/gap.hpp"
#include "bcs2gp/gp.hpp"
#include "bcs2gp/potential.hpp"
#include "bcs2gp/semiclassics.hpp"
#include "bcs2gp/twobody.hpp"

namespace bcs2gp {

namespace {

using cd = std::complex<double>;

const std::set<std::string>& subcommands() {
    static const std::set<std::string> s = {"bound-state", "coupling",      "gp",
                                            "gap",         "semiclassical", "crossover"};
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
        throw ConfigParseError("key '" + key + "' is not a finite number: '" + value + "'");
    return x;
}

long parse_long(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigParseError("key '" + key + "' is not an integer: '" + value + "'");
    return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& tok : split_tokens(value)) out.push_back(parse_double(key, tok));
    if (out.empty()) throw ConfigParseError("key '" + key + "' holds an empty list");
    return out;
}

class Config {
  public:
    explicit Config(const ConfigMap& kv) : kv_(kv) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string str(const std::string& key) const {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigParseError("missing required key '" + key + "'");
        return trim(it->second);
    }
    double num(const std::string& key) const { return parse_double(key, str(key)); }
    double num(const std::string& key, double fallback) const {
        return has(key) ? num(key) : fallback;
    }
    int integer(const std::string& key, int fallback) const {
        return has(key) ? static_cast<int>(parse_long(key, str(key))) : fallback;
    }
    unsigned seed() const {
        const long s = has("seed") ? parse_long("seed", str("seed")) : 0;
        if (s < 0) throw ConfigParseError("seed must be nonnegative");
        return static_cast<unsigned>(s);
    }
    std::vector<double> list(const std::string& key) const { return parse_list(key, str(key)); }

    const ConfigMap& map() const { return kv_; }

  private:
    const ConfigMap& kv_;
};

// ---- key validation -------------------------------------------------------

bool valid_mode_suffix(const std::string& s) {
    if (s.empty()) return false;
    for (const auto& tok : split_tokens(s)) {
        if (tok.empty()) return false;
        char* end = nullptr;
        std::strtol(tok.c_str(), &end, 10);
        if (end != tok.c_str() + tok.size()) return false;
    }
    return true;
}

bool key_is_known(const std::string& key) {
    static const std::set<std::string> exact = {
        "subcommand", "out_dir",       "seed",    "dim",     "mu",
        "delta_mu",   "h_list",        "theta_samples", "basis_n",
        "potential.kind",  "potential.depth", "potential.range", "potential.dim",
        "potential.scattering_length", "potential.table_r", "potential.table_v",
        "gp.g", "gp.tol", "gp.max_iter", "gp.cutoff",
        "gap.mu", "gap.eps", "gap.p_points", "gap.p_max", "gap.r_points",
        "gap.mixing", "gap.max_iter", "gap.tol_factor", "gap.init_eps",
    };
    if (exact.count(key)) return true;
    for (const std::string prefix : {"fields.W.", "fields.A0.", "fields.A1.", "fields.A2.",
                                     "psi."})
        if (key.rfind(prefix, 0) == 0) return valid_mode_suffix(key.substr(prefix.size()));
    return false;
}

void validate_values(const ConfigMap& kv, const std::string& subcommand) {
    for (const auto& [key, value] : kv) {
        if (!key_is_known(key)) throw ConfigParseError("unknown key '" + key + "'");
        (void)value;
    }
    Config c(kv);
    if (c.has("subcommand") && c.str("subcommand") != subcommand)
        throw ConfigParseError("config subcommand '" + c.str("subcommand") +
                               "' does not match '" + subcommand + "'");
    for (const std::string tol : {"gp.tol", "gap.tol_factor"})
        if (c.has(tol) && !(c.num(tol) > 0.0))
            throw ConfigParseError("tolerance '" + tol + "' must be positive");
    c.seed();  // nonnegative
}

// ---- domain object construction -------------------------------------------

PotentialSpec potential_from(const Config& c) {
    const std::string kind = c.str("potential.kind");
    const int dim = c.integer("potential.dim", 3);
    if (kind == "gaussian")
        return PotentialSpec::gaussian_well(c.num("potential.depth"), c.num("potential.range"),
                                            dim);
    if (kind == "square")
        return PotentialSpec::square_well(c.num("potential.depth"), c.num("potential.range"),
                                          dim);
    if (kind == "point")
        return PotentialSpec::point_interaction_reference(c.num("potential.scattering_length"));
    if (kind == "tabulated")
        return PotentialSpec::tabulated_radial(c.list("potential.table_r"),
                                               c.list("potential.table_v"), dim);
    throw ConfigParseError("unknown potential.kind '" + kind + "'");
}

/// Fourier field from keys `<prefix><n>` or `<prefix><n1>,<n2>,<n3>` with
/// values `re` or `re im`.
PeriodicField field_from(const Config& c, const std::string& prefix, int dim) {
    struct Entry {
        std::array<int, 3> n{0, 0, 0};
        cd v;
    };
    std::vector<Entry> entries;
    int cutoff = 0;
    for (const auto& [key, value] : c.map()) {
        if (key.rfind(prefix, 0) != 0) continue;
        Entry e;
        const auto mode_tokens = split_tokens(key.substr(prefix.size()));
        if (static_cast<int>(mode_tokens.size()) != dim)
            throw ConfigParseError("key '" + key + "' needs " + std::to_string(dim) +
                                   " mode indices");
        for (int j = 0; j < dim; ++j) {
            e.n[j] = static_cast<int>(parse_long(key, mode_tokens[j]));
            cutoff = std::max(cutoff, std::abs(e.n[j]));
        }
        const auto parts = split_tokens(value);
        if (parts.empty() || parts.size() > 2)
            throw ConfigParseError("key '" + key + "' must hold 're' or 're im'");
        e.v = cd{parse_double(key, parts[0]),
                 parts.size() == 2 ? parse_double(key, parts[1]) : 0.0};
        entries.push_back(e);
    }
    PeriodicField f(dim, cutoff);
    for (const auto& e : entries) f.at(e.n) = e.v;
    return f;
}

ExternalFields fields_from(const Config& c, int dim) {
    ExternalFields fields{field_from(c, "fields.W.", dim), {}};
    bool any_a = false;
    std::vector<PeriodicField> A;
    for (int j = 0; j < dim; ++j) {
        const std::string prefix = "fields.A" + std::to_string(j) + ".";
        A.push_back(field_from(c, prefix, dim));
        if (A.back().l2_norm() > 0.0) any_a = true;
    }
    if (any_a) fields.A = std::move(A);
    fields.validate();
    return fields;
}

BoundState bound_state_from(const PotentialSpec& V) {
    if (V.kind() == PotentialSpec::Kind::PointInteractionReference)
        return point_interaction_reference(V.scattering_length());
    return solve_ground_state(V);
}

GapOptions gap_options_from(const Config& c) {
    GapOptions o;
    o.p_points = c.integer("gap.p_points", o.p_points);
    o.p_max = c.num("gap.p_max", o.p_max);
    o.r_points = c.integer("gap.r_points", o.r_points);
    o.mixing = c.num("gap.mixing", o.mixing);
    o.max_iter = c.integer("gap.max_iter", o.max_iter);
    o.tol_factor = c.num("gap.tol_factor", o.tol_factor);
    o.init_eps = c.num("gap.init_eps", o.init_eps);
    o.seed = c.seed();
    return o;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- subcommand handlers ---------------------------------------------------

void run_bound_state(const Config& c, ResultBundle& out) {
    const PotentialSpec V = potential_from(c);
    const BoundState bs = bound_state_from(V);
    CsvTable profile{"profile", {"r", "alpha0"}, {}};
    for (std::size_t i = 0; i < bs.r_grid.size(); ++i)
        profile.rows.push_back({bs.r_grid[i], bs.alpha0[i]});
    CsvTable momentum{"momentum", {"q", "alpha0_hat", "t"}, {}};
    for (std::size_t i = 0; i < bs.q_grid.size(); ++i)
        momentum.rows.push_back({bs.q_grid[i], bs.alpha0_hat[i], bs.t_vals[i]});
    out.tables = {profile, momentum};
    std::ostringstream s;
    s << V.describe() << "\n"
      << "E_b = " << format_double(bs.E_b) << "\n"
      << "eigenvalue_residual = " << format_double(bs.eigenvalue_residual) << "\n"
      << "normalization_error = " << format_double(bs.normalization_error) << "\n";
    out.summary = s.str();
}

void run_coupling(const Config& c, ResultBundle& out) {
    const PotentialSpec V = potential_from(c);
    const BoundState bs = bound_state_from(V);
    const double mu = c.num("mu", -bs.E_b);
    if (V.kind() == PotentialSpec::Kind::PointInteractionReference) {
        // constant gap kernel: only g is finite, the I-integrals diverge
        double g_error = 0.0;
        const double g = compute_g(bs, &g_error);
        const double target = 2.0 * M_PI * V.scattering_length();
        out.tables = {CsvTable{"coefficients",
                               {"g", "g_error", "abs_g_minus_2pi_a_s"},
                               {{g, g_error, std::abs(g - target)}}}};
        std::ostringstream s;
        s << V.describe() << "\n"
          << "g = " << format_double(g) << " (quadrature error " << format_double(g_error)
          << ")\n"
          << "|g - 2 pi a_s| = " << format_double(std::abs(g - target)) << "\n";
        out.summary = s.str();
        return;
    }
    const CoefficientSet cs = coefficient_integrals(bs, mu);
    CsvTable table{"coefficients",
                   {"g", "g_error", "I1", "I2", "I3", "I11", "I22", "I33", "identity_I2_error",
                    "identity_I3_error"},
                   {{cs.g, cs.g_error, cs.I1, cs.I2, cs.I3, cs.Ijk[0][0], cs.Ijk[1][1],
                     cs.Ijk[2][2], cs.identity_I2_error, cs.identity_I3_error}}};
    out.tables = {table};
    std::ostringstream s;
    s << V.describe() << "\n"
      << "mu = " << format_double(mu) << "\n"
      << "g = " << format_double(cs.g) << " (quadrature error " << format_double(cs.g_error)
      << ")\n";
    s << "I1 = " << format_double(cs.I1) << ", I2 = " << format_double(cs.I2)
      << ", I3 = " << format_double(cs.I3) << "\n";
    out.summary = s.str();
}

void run_gp(const Config& c, ResultBundle& out) {
    const int dim = c.integer("dim", 1);
    const ExternalFields fields = fields_from(c, dim);
    double g;
    if (c.has("gp.g")) {
        g = c.num("gp.g");
    } else {
        const BoundState bs = bound_state_from(potential_from(c));
        g = compute_g(bs);
    }
    if (!(g > 0.0)) throw ConfigParseError("gp coupling g must be positive");
    MinimizeOptions opts;
    opts.tol = c.num("gp.tol", opts.tol);
    opts.max_iter = c.integer("gp.max_iter", opts.max_iter);
    opts.cutoff = c.integer("gp.cutoff", opts.cutoff);
    opts.seed = c.seed();
    const MinimizeResult res = gp_minimize(fields, g, opts);

    CsvTable table{"minimizer", {"n1", "n2", "n3", "re", "im"}, {}};
    for (std::size_t i = 0; i < res.psi.size(); ++i) {
        const auto n = res.psi.mode(i);
        const cd v = res.psi.data()[i];
        table.rows.push_back({static_cast<double>(n[0]), static_cast<double>(n[1]),
                              static_cast<double>(n[2]), v.real(), v.imag()});
    }
    out.tables = {table};
    std::ostringstream s;
    s << "g = " << format_double(g) << "\n"
      << "energy = " << format_double(res.energy) << "\n"
      << "gradient_norm = " << format_double(res.grad_norm) << "\n"
      << "iterations = " << res.iterations << "\n";
    out.summary = s.str();
}

void run_gap(const Config& c, ResultBundle& out) {
    const PotentialSpec V = potential_from(c);
    const BoundState bs = bound_state_from(V);
    double mu;
    if (c.has("gap.mu"))
        mu = c.num("gap.mu");
    else
        mu = -bs.E_b + c.num("gap.eps");
    const GapOptions opts = gap_options_from(c);
    const GapProblem prob(V, bs, opts);
    const GapState gs = prob.solve(mu, opts);

    CsvTable table{"gap", {"p", "Delta", "gamma", "alpha"}, {}};
    for (std::size_t i = 0; i < gs.p.size(); ++i)
        table.rows.push_back({gs.p[i], gs.Delta[i], gs.gamma_hat[i], gs.alpha_hat[i]});
    out.tables = {table};
    std::ostringstream s;
    s << V.describe() << "\n"
      << "mu = " << format_double(mu) << " (mu + E_b = " << format_double(mu + bs.E_b) << ")\n"
      << "energy_density = " << format_double(gs.energy_density) << "\n"
      << "rho = " << format_double(gs.rho) << "\n"
      << "iterations = " << gs.iterations
      << ", stationarity_defect = " << format_double(gs.stationarity_defect) << "\n";
    if (gs.rho > 0.0 && !gs.collapsed_to_normal) {
        const GapObservables obs = observables(gs, compute_g(bs), bs.E_b);
        s << "energy_per_particle = " << format_double(obs.energy_per_particle)
          << " (leading-order law " << format_double(obs.predicted_epp) << ")\n";
    }
    out.summary = s.str();
}

void run_semiclassical(const Config& c, ResultBundle& out) {
    const PotentialSpec V = potential_from(c);
    if (V.dim() != 1)
        throw ConfigParseError("semiclassical lattices require potential.dim = 1");
    const BoundState bs = bound_state_from(V);
    const RadialKernel ker = kernel_from_bound_state(bs);
    const double mu = c.num("mu", -bs.E_b);
    const std::vector<double> h_list = c.list("h_list");
    const int theta_samples = c.integer("theta_samples", 16);
    const PeriodicField psi = field_from(c, "psi.", 1);
    const ExternalFields fields = fields_from(c, 1);

    CsvTable table{"semiclassical",
                   {"h", "trace_diff", "prediction", "residual", "E1", "E2",
                    "alpha_H1_residual"},
                   {}};
    std::vector<double> lx, ly;
    for (double h : h_list) {
        const int N = c.integer("basis_n", static_cast<int>(std::ceil(40.0 / h)));
        const SemiclassicalReport r =
            semiclassical_report(psi, fields, ker, mu, h, N, theta_samples);
        table.rows.push_back({r.h, r.trace_diff, r.prediction, r.residual, r.E1, r.E2,
                              r.alpha_block_H1_residual});
        if (r.residual > 0.0) {
            lx.push_back(std::log(h));
            ly.push_back(std::log(r.residual));
        }
    }
    out.tables = {table};
    std::ostringstream s;
    s << V.describe() << "\n"
      << "mu = " << format_double(mu) << ", theta_samples = " << theta_samples << "\n";
    if (lx.size() >= 2)
        s << "residual_slope = " << format_double(fitted_slope(lx, ly)) << "\n";
    out.summary = s.str();
}

void run_crossover(const Config& c, ResultBundle& out) {
    const PotentialSpec V = potential_from(c);
    const double delta_mu = c.num("delta_mu");
    const std::vector<double> h_list = c.list("h_list");
    const GapOptions opts = gap_options_from(c);
    const CrossoverReport rep = crossover_scan(V, delta_mu, h_list, opts);

    CsvTable table{"crossover", {"h", "E_bcs_over_h", "E_gp", "e", "fitted_exponent"}, {}};
    for (const auto& r : rep.rows)
        table.rows.push_back({r.h, r.e_bcs_scaled, r.e_gp, r.error, rep.decay_exponent});
    CsvTable density{"density", {"h", "N", "rho"}, {}};
    for (const auto& d : rep.density) density.rows.push_back({d.h, d.N, d.rho});
    out.tables = {table, density};
    std::ostringstream s;
    s << rep.provenance << "\n"
      << "fitted_exponent = " << format_double(rep.decay_exponent) << "\n";
    if (!rep.rows.empty())
        s << "smallest-h error = " << format_double(rep.rows.back().error) << "\n";
    out.summary = s.str();
}

}  // namespace

// ---- public API ------------------------------------------------------------

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigParseError("line " + std::to_string(lineno) + " has an empty key");
        if (kv.count(key))
            throw ConfigParseError("duplicate key '" + key + "' on line " +
                                   std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

std::string emit_config_text(const ConfigMap& kv) {
    std::ostringstream out;
    for (const auto& [key, value] : kv) out << key << " = " << value << "\n";
    return out.str();
}

std::string config_hash(const ConfigMap& kv) {
    const std::string text = emit_config_text(kv);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

RunConfig make_run_config(const std::string& subcommand, const ConfigMap& values,
                          const std::string& out_dir) {
    if (!subcommands().count(subcommand))
        throw ConfigParseError("unknown subcommand '" + subcommand + "'");
    validate_values(values, subcommand);
    return RunConfig{subcommand, values, out_dir};
}

RunConfig load_run_config(const std::string& subcommand, const std::string& config_path,
                          const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot read config file '" + config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return make_run_config(subcommand, parse_config_text(text.str()), out_dir);
}

std::string render_csv(const CsvTable& table, const std::string& hash) {
    std::ostringstream out;
    out << "# config " << hash << "\n";
    for (std::size_t j = 0; j < table.columns.size(); ++j)
        out << (j ? "," : "") << table.columns[j];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? "," : "") << format_double(row[j]);
        out << "\n";
    }
    return out.str();
}

ResultBundle run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    validate_values(config.values, config.subcommand);

    ResultBundle out;
    out.subcommand = config.subcommand;
    ConfigMap canonical = config.values;
    canonical["subcommand"] = config.subcommand;
    out.config_canonical = emit_config_text(canonical);
    out.config_hash = config_hash(canonical);

    const Config c(config.values);
    if (config.subcommand == "bound-state")
        run_bound_state(c, out);
    else if (config.subcommand == "coupling")
        run_coupling(c, out);
    else if (config.subcommand == "gp")
        run_gp(c, out);
    else if (config.subcommand == "gap")
        run_gap(c, out);
    else if (config.subcommand == "semiclassical")
        run_semiclassical(c, out);
    else
        run_crossover(c, out);

    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<CsvTable> emit_plotdata(const ResultBundle& bundle) {
    std::vector<CsvTable> out;
    for (const auto& table : bundle.tables) {
        if (table.rows.empty() || table.columns.size() < 2) continue;
        CsvTable xy{table.name + "_xy", {table.columns[0], table.columns[1]}, {}};
        for (const auto& row : table.rows) xy.rows.push_back({row[0], row[1]});
        out.push_back(std::move(xy));

        // scan tables: emit |e| over h and the log-log projection
        if (table.columns[0] != "h") continue;
        for (std::size_t j = 1; j < table.columns.size(); ++j) {
            if (table.columns[j] != "e" && table.columns[j] != "residual") continue;
            CsvTable mag{table.name + "_abs_" + table.columns[j],
                         {"h", "abs_" + table.columns[j]},
                         {}};
            CsvTable loglog{table.name + "_loglog_" + table.columns[j],
                            {"log_h", "log_abs_" + table.columns[j]},
                            {}};
            for (const auto& row : table.rows) {
                const double v = std::abs(row[j]);
                mag.rows.push_back({row[0], v});
                if (v > 0.0) loglog.rows.push_back({std::log(row[0]), std::log(v)});
            }
            out.push_back(std::move(mag));
            if (!loglog.rows.empty()) out.push_back(std::move(loglog));
        }
    }
    if (out.empty()) throw EmptyBundle("no populated scan table to project");
    return out;
}

void write_bundle(const ResultBundle& bundle, const std::string& out_dir,
                  bool with_plotdata) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

    auto write_file = [&](const std::string& name, const std::string& content) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
        f << content;
        if (!f) throw IoError("short write to '" + path.string() + "'");
    };

    for (const auto& table : bundle.tables)
        write_file(table.name + ".csv", render_csv(table, bundle.config_hash));
    if (with_plotdata && !bundle.tables.empty()) {
        for (const auto& table : emit_plotdata(bundle))
            write_file(table.name + ".csv", render_csv(table, bundle.config_hash));
    }
    write_file("summary.txt", "# config " + bundle.config_hash + "\n" + bundle.summary);
    std::ostringstream meta;
    meta << "config_hash = " << bundle.config_hash << "\n"
         << "version = " << kVersion << "\n"
         << "subcommand = " << bundle.subcommand << "\n"
         << "elapsed_seconds = " << format_double(bundle.elapsed_seconds) << "\n"
         << "thread_cap = " << thread_cap_from_env() << "\n";
    write_file("metadata.txt", meta.str());
}

int thread_cap_from_env() {
    const char* env = std::getenv("BCS2GP_THREADS");
    if (!env) return 0;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) return 0;
    return static_cast<int>(n);
}

}  // namespace bcs2gp
