#pragma once

#include <map>
#include <string>
#include <vector>

#include "bcs2gp/errors.hpp"

namespace bcs2gp {

inline constexpr const char* kVersion = "bcs2gp 1.0.0";

/// Flat `key = value` configuration text: one pair per line, `#` comments and
/// blank lines ignored, keys unique.  Emission is canonical (sorted keys), so
/// parse -> emit -> parse is the identity.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
std::string emit_config_text(const ConfigMap& kv);

/// FNV-1a 64-bit hash of the canonical config text, as fixed-width hex.
std::string config_hash(const ConfigMap& kv);

/// One-shot formatting with 17 significant digits (exact double round trip).
std::string format_double(double x);

struct RunConfig {
    std::string subcommand;  // bound-state | coupling | gp | gap | semiclassical | crossover
    ConfigMap values;
    std::string out_dir = ".";
};

/// Validates the subcommand name, the key set and the tolerance invariants.
/// A `subcommand` key inside the map must agree with the explicit argument.
RunConfig make_run_config(const std::string& subcommand, const ConfigMap& values,
                          const std::string& out_dir = ".");

/// Reads and validates a config file; IoError when unreadable.
RunConfig load_run_config(const std::string& subcommand, const std::string& config_path,
                          const std::string& out_dir = ".");

struct CsvTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// CSV text: `# config <hash>` line, header, then rows at 17 significant digits.
std::string render_csv(const CsvTable& table, const std::string& hash);

struct ResultBundle {
    std::string subcommand;
    std::vector<CsvTable> tables;
    std::string summary;           // human-readable result lines
    std::string config_hash;       // binds every output to the inputs
    std::string config_canonical;  // canonical config text (incl. subcommand)
    double elapsed_seconds = 0.0;
};

/// Dispatches to the owning module and collects its tables and summary.
ResultBundle run(const RunConfig& config);

/// Two-column projections of every populated table, plus |e| and log-log
/// companions for scan tables carrying an (h, e/residual) pair.
/// Throws EmptyBundle when no table has rows.
std::vector<CsvTable> emit_plotdata(const ResultBundle& bundle);

/// Writes <table>.csv for each table (and plot projections), summary.txt and
/// metadata.txt under out_dir; creates the directory; IoError on failure.
void write_bundle(const ResultBundle& bundle, const std::string& out_dir,
                  bool with_plotdata = true);

/// Thread cap from BCS2GP_THREADS (0 = unset/invalid).
int thread_cap_from_env();

}  // namespace bcs2gp
