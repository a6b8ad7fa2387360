#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bcs2gp/cli.hpp"

using namespace bcs2gp;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

const CsvTable* find_table(const ResultBundle& b, const std::string& name) {
    for (const auto& t : b.tables)
        if (t.name == name) return &t;
    return nullptr;
}

int run_binary(const std::string& args) {
    const int rc = std::system(("./bcs2gp " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("config text round-trips through parse and emit") {
    const std::string text =
        "# scan setup\n"
        "potential.kind = gaussian\n"
        "potential.depth = 5.0   # deep well\n"
        "\n"
        "potential.range = 1.0\n"
        "h_list = 0.3 0.2\n";
    const ConfigMap kv = parse_config_text(text);
    CHECK(kv.size() == 4);
    CHECK(kv.at("potential.depth") == "5.0");
    CHECK(parse_config_text(emit_config_text(kv)) == kv);
    CHECK(config_hash(kv) == config_hash(parse_config_text(emit_config_text(kv))));
    CHECK(config_hash(kv).size() == 16);

    ConfigMap other = kv;
    other["potential.depth"] = "6.0";
    CHECK(config_hash(other) != config_hash(kv));
}

TEST_CASE("malformed config lines are rejected") {
    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config_text("= value\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ConfigParseError);
}

TEST_CASE("run config validation") {
    ConfigMap kv = {{"potential.kind", "gaussian"},
                    {"potential.depth", "5"},
                    {"potential.range", "1"}};
    CHECK_NOTHROW(make_run_config("bound-state", kv));
    CHECK_THROWS_AS(make_run_config("explode", kv), ConfigParseError);

    ConfigMap bad = kv;
    bad["potental.kind"] = "gaussian";  // typo
    CHECK_THROWS_AS(make_run_config("bound-state", bad), ConfigParseError);

    ConfigMap negtol = kv;
    negtol["gap.tol_factor"] = "-1e-8";
    CHECK_THROWS_AS(make_run_config("gap", negtol), ConfigParseError);

    ConfigMap mismatch = kv;
    mismatch["subcommand"] = "coupling";
    CHECK_THROWS_AS(make_run_config("bound-state", mismatch), ConfigParseError);
    CHECK_NOTHROW(make_run_config("coupling", mismatch));
}

TEST_CASE("17-digit formatting round-trips doubles exactly") {
    for (double x : {1.0 / 3.0, -2.7315001e-17, 6.0221407599999999e23, 0.1, -0.0, 4096.0}) {
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("coupling run reports the point-interaction coupling") {
    const RunConfig cfg = make_run_config(
        "coupling",
        {{"potential.kind", "point"}, {"potential.scattering_length", "1.0"}});
    const ResultBundle b = run(cfg);
    const CsvTable* t = find_table(b, "coefficients");
    REQUIRE(t != nullptr);
    REQUIRE(t->rows.size() == 1);
    CHECK(std::abs(t->rows[0][0] - 2.0 * M_PI) < 1e-6 * 2.0 * M_PI);
    CHECK(b.summary.find("g = ") != std::string::npos);
    CHECK(b.summary.find("|g - 2 pi a_s| = ") != std::string::npos);
    CHECK(b.config_hash.size() == 16);
}

TEST_CASE("bound-state run emits profile and momentum tables") {
    const RunConfig cfg = make_run_config("bound-state", {{"potential.kind", "gaussian"},
                                                          {"potential.depth", "1"},
                                                          {"potential.range", "1"},
                                                          {"potential.dim", "1"}});
    const ResultBundle b = run(cfg);
    const CsvTable* prof = find_table(b, "profile");
    const CsvTable* mom = find_table(b, "momentum");
    REQUIRE(prof != nullptr);
    REQUIRE(mom != nullptr);
    CHECK(prof->rows.size() > 100);
    CHECK(mom->rows.size() > 100);
    CHECK(b.summary.find("E_b = ") != std::string::npos);
}

TEST_CASE("gp run minimizes the uniform condensate") {
    const RunConfig cfg = make_run_config("gp", {{"dim", "1"},
                                                 {"fields.W.0", "-1"},
                                                 {"gp.g", format_double(2.0 * M_PI)},
                                                 {"gp.tol", "1e-10"}});
    const ResultBundle b = run(cfg);
    CHECK(b.summary.find("energy = ") != std::string::npos);
    const CsvTable* t = find_table(b, "minimizer");
    REQUIRE(t != nullptr);
    // TI minimizer: energy -1/(8 pi), |psi|^2 = 1/(4 pi)
    std::istringstream line(b.summary.substr(b.summary.find("energy = ") + 9));
    double energy;
    line >> energy;
    CHECK(energy == doctest::Approx(-1.0 / (8.0 * M_PI)).epsilon(1e-8));
}

TEST_CASE("gap run solves near the binding threshold") {
    const RunConfig cfg = make_run_config("gap", {{"potential.kind", "gaussian"},
                                                  {"potential.depth", "5"},
                                                  {"potential.range", "1"},
                                                  {"gap.eps", "0.05"}});
    const ResultBundle b = run(cfg);
    const CsvTable* t = find_table(b, "gap");
    REQUIRE(t != nullptr);
    CHECK(t->rows.size() > 100);
    CHECK(b.summary.find("energy_density = ") != std::string::npos);
    CHECK(b.summary.find("energy_per_particle = ") != std::string::npos);
}

TEST_CASE("semiclassical run tabulates the trace expansion") {
    const RunConfig cfg = make_run_config("semiclassical", {{"potential.kind", "gaussian"},
                                                            {"potential.depth", "1"},
                                                            {"potential.range", "1"},
                                                            {"potential.dim", "1"},
                                                            {"h_list", "0.2"},
                                                            {"theta_samples", "4"},
                                                            {"psi.0", "0.5"},
                                                            {"fields.W.0", "-1"}});
    const ResultBundle b = run(cfg);
    const CsvTable* t = find_table(b, "semiclassical");
    REQUIRE(t != nullptr);
    REQUIRE(t->rows.size() == 1);
    CHECK(t->rows[0][1] > 0.0);                        // trace_diff
    CHECK(std::isfinite(t->rows[0][3]));               // residual
    CHECK(t->rows[0][3] < 0.2 * t->rows[0][1]);        // two-term prediction captures it
}

TEST_CASE("crossover run is deterministic byte for byte") {
    const RunConfig cfg = make_run_config("crossover", {{"potential.kind", "gaussian"},
                                                        {"potential.depth", "1"},
                                                        {"potential.range", "1"},
                                                        {"potential.dim", "1"},
                                                        {"delta_mu", "0.5"},
                                                        {"h_list", "0.3 0.2"}});
    const ResultBundle a = run(cfg);
    const ResultBundle b = run(cfg);
    const CsvTable* t = find_table(a, "crossover");
    REQUIRE(t != nullptr);
    CHECK(t->columns ==
          std::vector<std::string>{"h", "E_bcs_over_h", "E_gp", "e", "fitted_exponent"});
    REQUIRE(a.tables.size() == b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i)
        CHECK(render_csv(a.tables[i], a.config_hash) == render_csv(b.tables[i], b.config_hash));

    // write twice, compare the files byte for byte
    const fs::path dir1 = "cli_test_out1", dir2 = "cli_test_out2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    write_bundle(a, dir1.string());
    write_bundle(b, dir2.string());
    for (const auto& entry : fs::directory_iterator(dir1)) {
        if (entry.path().extension() != ".csv") continue;
        const std::string c1 = read_file(entry.path());
        const std::string c2 = read_file(dir2 / entry.path().filename());
        CHECK(c1 == c2);
        CHECK(c1.find(a.config_hash) != std::string::npos);
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("plot projections cover scan tables") {
    ResultBundle b;
    b.subcommand = "crossover";
    b.config_hash = "0123456789abcdef";
    b.tables.push_back(CsvTable{"crossover",
                                {"h", "E_bcs_over_h", "E_gp", "e", "fitted_exponent"},
                                {{0.2, -1.0, -1.1, 0.1, 2.0}, {0.1, -1.05, -1.1, 0.05, 2.0}}});
    const auto plots = emit_plotdata(b);
    bool has_loglog = false, has_abs = false;
    for (const auto& t : plots) {
        if (t.name == "crossover_loglog_e") {
            has_loglog = true;
            CHECK(t.rows[0][0] == doctest::Approx(std::log(0.2)));
            CHECK(t.rows[0][1] == doctest::Approx(std::log(0.1)));
        }
        if (t.name == "crossover_abs_e") has_abs = true;
    }
    CHECK(has_loglog);
    CHECK(has_abs);

    ResultBundle empty;
    empty.subcommand = "crossover";
    CHECK_THROWS_AS(emit_plotdata(empty), EmptyBundle);
}

TEST_CASE("command-line binary maps errors to documented exit codes") {
    const fs::path dir = "cli_test_cfg";
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "good.cfg");
        f << "potential.kind = point\npotential.scattering_length = 1.0\n";
    }
    {
        std::ofstream f(dir / "badtol.cfg");
        f << "potential.kind = gaussian\npotential.depth = 5\npotential.range = 1\n"
          << "gap.eps = 0.05\ngap.tol_factor = -1\n";
    }
    {
        std::ofstream f(dir / "nobound.cfg");
        // too shallow for a d=3 bound state
        f << "potential.kind = gaussian\npotential.depth = 0.1\npotential.range = 1\n";
    }
    CHECK(run_binary("coupling --config cli_test_cfg/good.cfg --out cli_test_cfg/out") == 0);
    CHECK(run_binary("gap --config cli_test_cfg/badtol.cfg") == 2);
    CHECK(run_binary("bound-state --config cli_test_cfg/nobound.cfg") == 3);
    CHECK(run_binary("coupling --config cli_test_cfg/missing.cfg") == 4);
    CHECK(run_binary("coupling") == 2);  // missing --config

    // outputs of the good run carry the config hash on every file
    const std::string summary = read_file(dir / "out" / "summary.txt");
    CHECK(summary.find("# config ") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "coefficients.csv"));
    CHECK(fs::exists(dir / "out" / "metadata.txt"));
    fs::remove_all(dir);
}

TEST_CASE("thread cap reads the environment variable") {
    unsetenv("BCS2GP_THREADS");
    CHECK(thread_cap_from_env() == 0);
    setenv("BCS2GP_THREADS", "3", 1);
    CHECK(thread_cap_from_env() == 3);
    setenv("BCS2GP_THREADS", "zero", 1);
    CHECK(thread_cap_from_env() == 0);
    unsetenv("BCS2GP_THREADS");
}
