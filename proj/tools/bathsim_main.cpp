#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "bathsim/experiment.hpp"

namespace {

struct Cli {
    std::string config_path;
    bathsim::RunOptions opts;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    bool out_set = false;
};

int dispatch(const std::string& name, const Cli& cli) {
    bathsim::ExperimentConfig cfg = bathsim::load_config(cli.config_path);
    bathsim::RunOptions opts = cli.opts;
    if (cli.seed_set) opts.seed = cli.seed;
    if (cli.out_set) opts.out_dir = cli.out_dir;
    if (opts.seed) cfg.seed = *opts.seed;

    if (name == "sparams") return bathsim::cmd_sparams(cfg, opts);
    if (name == "dos") return bathsim::cmd_dos(cfg, opts);
    if (name == "ssmap") return bathsim::cmd_ssmap(cfg, opts);
    if (name == "trajectory") return bathsim::cmd_trajectory(cfg, opts);
    if (name == "db-contour") return bathsim::cmd_dbcontour(cfg, opts);
    std::fprintf(stderr, "unknown command: %s\n", name.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stepped-impedance bath simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Cli cli;
    app.add_option("--config", cli.config_path, "path to the JSON configuration")->required();
    app.add_option("--out", cli.out_dir, "output directory (overrides the configured one)");
    app.add_flag("--flat-dos", cli.opts.flat_dos, "replace the sampled density of states with a flat one");
    app.add_option("--seed", cli.seed, "readout seed (overrides the configured one)");

    app.add_subcommand("sparams", "sweep the crystal scattering parameters");
    app.add_subcommand("dos", "export the density of states and the decay-rate profile");
    app.add_subcommand("ssmap", "map the driven steady state over the drive grid");
    app.add_subcommand("trajectory", "time-evolve the driven qubit from its ground state");
    app.add_subcommand("db-contour", "trace the detailed-balance contour over detuning");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    cli.seed_set = app.count("--seed") > 0;
    cli.out_set = app.count("--out") > 0;

    try {
        return dispatch(app.get_subcommands().front()->get_name(), cli);
    } catch (const bathsim::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
