#include <CLI11.hpp>
#include <Eigen/Core>
#include <iostream>
#include <string>

#include "bcs2gp/cli.hpp"

extern "C" void openblas_set_num_threads(int);

int main(int argc, char** argv) {
    const int cap = bcs2gp::thread_cap_from_env();
    if (cap > 0) {
        Eigen::setNbThreads(cap);
        openblas_set_num_threads(cap);
    }

    CLI::App app{"BCS pairing to Gross-Pitaevskii: bound states, coupling constants, "
                 "lattice trace asymptotics and the low-density crossover"};
    std::string subcommand, config_path, out_dir = ".";
    app.add_option("subcommand", subcommand,
                   "bound-state | coupling | gp | gap | semiclassical | crossover")
        ->required();
    app.add_option("--config", config_path, "flat key = value configuration file")->required();
    app.add_option("--out", out_dir, "output directory (default '.')");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const bcs2gp::RunConfig config =
            bcs2gp::load_run_config(subcommand, config_path, out_dir);
        const bcs2gp::ResultBundle bundle = bcs2gp::run(config);
        bcs2gp::write_bundle(bundle, config.out_dir);
        std::cout << "# config " << bundle.config_hash << "\n" << bundle.summary;
        return 0;
    } catch (const bcs2gp::ConfigParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const bcs2gp::IoError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const bcs2gp::EmptyBundle& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // numerical failures (NotConverged, GapClosed, NoBoundState, ...)
        std::cerr << e.what() << "\n";
        return 3;
    }
}
